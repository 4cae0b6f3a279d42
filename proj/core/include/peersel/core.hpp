#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peersel/rational.hpp"
#include "peersel/rng.hpp"

namespace peersel {

/// Agents are dense indices 0..n-1; external names are mapped at the I/O
/// boundary.
using AgentId = int;

/// Sparse raw valuations: entries[i][j] is the score reviewer i gives j.
/// Every agent owns a row; an absent agent simply has an empty row.
struct ReviewProfile {
  int n = 0;
  std::vector<std::map<AgentId, Rat>> entries;

  explicit ReviewProfile(int agents = 0) : n(agents), entries(agents) {}

  void set(AgentId reviewer, AgentId reviewee, Rat score) {
    entries[reviewer][reviewee] = std::move(score);
  }
  const Rat* find(AgentId reviewer, AgentId reviewee) const {
    auto it = entries[reviewer].find(reviewee);
    return it == entries[reviewer].end() ? nullptr : &it->second;
  }
  bool operator==(const ReviewProfile&) const = default;
};

/// Partition of the agents into ell clusters, sizes differing by at most 1.
struct Clustering {
  int ell = 0;
  std::vector<int> assignment;  // agent -> cluster index

  int n() const { return static_cast<int>(assignment.size()); }
  std::vector<std::vector<AgentId>> members() const;
  std::vector<int> sizes() const;
  bool operator==(const Clustering&) const = default;
};

/// Who reviews whom: reviews[i] holds the m agents reviewed by i, sorted.
struct ReviewAssignment {
  int m = 0;
  std::vector<std::vector<AgentId>> reviews;

  int n() const { return static_cast<int>(reviews.size()); }
  bool reviews_pair(AgentId reviewer, AgentId reviewee) const;
  bool operator==(const ReviewAssignment&) const = default;
};

/// Same shape as ReviewProfile; each reviewer's values over its assigned
/// reviewees sum to exactly 1.
struct NormalizedProfile {
  int n = 0;
  std::vector<std::map<AgentId, Rat>> values;
};

/// Per-cluster fractional quotas s_i with sum exactly k.
struct ShareVector {
  std::vector<Rat> shares;
  int k = 0;

  int ell() const { return static_cast<int>(shares.size()); }
};

/// Integer quotas t_i; "nice" relative to a ShareVector when every t_i is
/// floor(s_i) or ceil(s_i) and the total is k.
struct NiceAllocation {
  std::vector<int> quotas;

  auto operator<=>(const NiceAllocation&) const = default;
};

/// Probability distribution over nice allocations; probabilities are exact,
/// positive and sum to 1; support size never exceeds ell.
struct AllocationDistribution {
  std::vector<std::pair<NiceAllocation, Rat>> support;
};

/// Result of one mechanism run. Winners are sorted ascending. Only the
/// fields a mechanism actually produces are populated.
struct SelectionOutcome {
  std::vector<AgentId> winners;
  std::optional<NiceAllocation> realized_allocation;
  std::optional<AllocationDistribution> distribution;
  std::optional<std::vector<Rat>> selection_probabilities;
  // Credible Subset bookkeeping.
  std::optional<int> potential_entrants;
  std::optional<Rat> abstain_probability;
};

enum class ViolationKind {
  kEmptyInstance,
  kSelfReview,
  kNegativeScore,
  kUnassignedReview,
  kInClusterReview,
  kReviewDegree,
  kReviewedDegree,
  kClusterBalance,
  kUnassignedAgent,
  kTargetTooLarge,
  kTargetExceedsMinCluster,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

/// Violations are data, not exceptions: callers decide how hard to fail.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks profile/clustering/assignment/k against each other. Strict mode
/// additionally requires k <= floor(n/ell); lenient mode only k <= n (the
/// small worked instances in the test suite need lenient).
ValidationReport validate_instance(const ReviewProfile& profile, const Clustering& clustering,
                                   const ReviewAssignment& assignment, int k,
                                   bool strict = false);

}  // namespace peersel
