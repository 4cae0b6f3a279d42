#pragma once

#include <vector>

#include "peersel/core.hpp"

namespace peersel {

/// One iteration of the allocation loop, for tracing and invariant checks.
/// Cursor values are recorded after the iteration's update, in sorted-order
/// coordinates (1-based, matching the narration the trace prints); the
/// allocation itself is reported in original cluster order.
struct ApportionStep {
  NiceAllocation allocation;
  Rat prob;
  int low = 0;
  int high = 0;
  int alpha = 0;
  Rat pbar;
  std::vector<Rat> round_up_prob;  // per original cluster, cumulative
};

struct ApportionTrace {
  std::vector<ApportionStep> steps;
};

/// Builds the lottery over nice allocations whose expectation equals the
/// shares exactly. Deterministic: for a given ShareVector the support, its
/// order and all probabilities are a pure function of the input.
///
/// Zero-probability iterations still appear in the trace but are dropped
/// from the returned support.
///
/// Throws std::invalid_argument if shares are negative or do not sum to k.
AllocationDistribution allocation_from_shares(const ShareVector& shares,
                                              ApportionTrace* trace = nullptr);

/// Inverse-CDF draw over the support in its deterministic order.
NiceAllocation sample_allocation(const AllocationDistribution& dist, Seed seed);

/// Per-cluster expectation, computed exactly.
std::vector<Rat> expected_allocation(const AllocationDistribution& dist);

/// Brute-force oracle: every integer vector with t_i in {floor(s_i),
/// ceil(s_i)} summing to k. Rejects inputs with more than 25 fractional
/// coordinates (the enumeration is exponential in that count).
std::vector<NiceAllocation> enumerate_nice_allocations(const ShareVector& shares);

}  // namespace peersel
