#pragma once

#include "peersel/core.hpp"
#include "peersel/generation.hpp"

namespace peersel {

/// |W intersect W'| / k, exact.
struct OverlapScore {
  Rat value;
};

/// Descriptive statistics; std is the population standard deviation (each
/// sweep cell reports over its full trial set, not a sample of it).
struct SummaryStats {
  Rat mean;
  Rat variance;  // population; std = sqrt(variance), rendered at I/O time
  Rat min;
  Rat max;
  int count = 0;
};

/// Both sets must be sorted ascending; `reference` has size k, `w` at most k
/// (an abstaining mechanism contributes an empty set, overlap 0).
OverlapScore overlap(const std::vector<AgentId>& w, const std::vector<AgentId>& reference, int k);

/// First k agents of the reference order, sorted ascending.
std::vector<AgentId> ground_truth_topk(const GroundTruth& sigma, int k);

/// Throws on an empty sample list.
SummaryStats summarize(const std::vector<Rat>& samples);

}  // namespace peersel
