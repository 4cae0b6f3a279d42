#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "peersel/core.hpp"
#include "peersel/generation.hpp"

namespace peersel {

/// Malformed input file; the CLI maps this to exit code 3.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All files are UTF-8 CSV with '.' decimals and '\n' line endings,
// regardless of locale.
//
//   profile:     header "reviewer,reviewee,score", decimal scores
//   clustering:  header "agent,cluster"
//   assignment:  header "reviewer,reviewee"
//   ground truth: one line of comma-separated agent ids, best first
//
// n is the largest agent id mentioned plus one.

ReviewProfile read_profile_csv(std::istream& in);
void write_profile_csv(std::ostream& out, const ReviewProfile& profile);

Clustering read_clustering_csv(std::istream& in);
void write_clustering_csv(std::ostream& out, const Clustering& clustering);

ReviewAssignment read_assignment_csv(std::istream& in);
void write_assignment_csv(std::ostream& out, const ReviewAssignment& assignment);

GroundTruth read_ground_truth(std::istream& in);
void write_ground_truth(std::ostream& out, const GroundTruth& truth);

/// Builds the review sets from the scored pairs of a profile, for running
/// partition-free mechanisms without a separate assignment file. m is the
/// largest row size; validation reports uneven rows.
ReviewAssignment assignment_from_profile(const ReviewProfile& profile);

}  // namespace peersel
