#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "peersel/apportionment.hpp"
#include "peersel/core.hpp"

namespace peersel {

/// Dollar share of each cluster: x_i sums to 1 when every agent contributes
/// (the normalization default guarantees that).
struct ClusterShares {
  std::vector<Rat> x;
};

/// Top-k set T and the potential entrants P of Credible Subset.
struct CredibleSets {
  std::vector<AgentId> top;       // |top| = k, sorted ascending
  std::vector<AgentId> entrants;  // sorted ascending, disjoint from top
};

/// Rescales each reviewer's scores over its assigned reviewees to sum to
/// exactly 1. A reviewer who submitted nothing, or only zeros, gives 1/m to
/// each assigned reviewee. Throws if the profile scores an unassigned pair.
NormalizedProfile normalize(const ReviewProfile& profile, const ReviewAssignment& assignment);

/// Cluster Dollar shares x_i = (1/n) * sum of incoming normalized values,
/// and the quota vector s = x * k. Throws on in-cluster values.
std::pair<ClusterShares, ShareVector> cluster_shares(const NormalizedProfile& normalized,
                                                     const Clustering& clustering, int k);

/// score(i) = sum of normalized values i receives from outside its cluster.
std::vector<Rat> agent_scores(const NormalizedProfile& normalized, const Clustering& clustering);

/// The full pipeline: normalize, cluster shares, allocation lottery, then
/// the t_j highest-scoring agents of each cluster. The outcome carries the
/// realized allocation and the whole distribution.
SelectionOutcome exact_dollar_partition(const ReviewProfile& profile, const Clustering& clustering,
                                        const ReviewAssignment& assignment, int k, Seed seed);

/// Exact selection probability of every agent under the allocation lottery:
/// an agent ranked r within its cluster is selected iff t_cluster >= r.
std::vector<Rat> edp_selection_probabilities(const ReviewProfile& profile,
                                             const Clustering& clustering,
                                             const ReviewAssignment& assignment, int k);

/// k agents with the highest raw incoming totals.
SelectionOutcome vanilla(const ReviewProfile& profile, int k);

/// Fixed per-cluster quotas floor(k/ell) (+1 for the first k mod ell
/// clusters), filled by out-of-cluster raw score.
SelectionOutcome partition_mechanism(const ReviewProfile& profile, const Clustering& clustering,
                                     const ReviewAssignment& assignment, int k);

/// T and P as used by Credible Subset; exposed for property tests.
CredibleSets credible_sets(const ReviewProfile& profile, const ReviewAssignment& assignment,
                           int k);

/// With probability (k+|P|)/(k+m) a uniformly random k-subset of T u P,
/// otherwise nobody. The outcome records |P| and the abstain probability.
SelectionOutcome credible_subset(const ReviewProfile& profile, const ReviewAssignment& assignment,
                                 int k, Seed seed);

/// Per-agent Dollar shares: each reviewer's raw scores are scaled to sum to
/// 1/n, shares are the incoming totals. When default_absent is set, an
/// agent who submitted nothing (or only zeros) spreads its 1/n uniformly
/// over its listed reviewees, or over everyone else if it listed none.
std::vector<Rat> dollar_shares(const ReviewProfile& profile, bool default_absent = true);

/// Repeatedly draws agents by Dollar share (selected agents removed, shares
/// renormalized) until k distinct winners; zero-share stragglers are filled
/// in by ascending id.
SelectionOutcome dollar_raffle(const ReviewProfile& profile, int k, Seed seed);

/// Draws a cluster by its Dollar share, selects its best not-yet-selected
/// agent, until k winners; exhausted clusters drop out of the draw.
SelectionOutcome dollar_partition_raffle(const ReviewProfile& profile,
                                         const Clustering& clustering,
                                         const ReviewAssignment& assignment, int k, Seed seed);

/// k agents with the highest Dollar shares. Absent agents contribute no
/// score here (no uniform default).
SelectionOutcome top_dollar(const ReviewProfile& profile, int k);

enum class Mechanism {
  kExactDollarPartition,
  kVanilla,
  kPartition,
  kCredibleSubset,
  kDollarRaffle,
  kDollarPartitionRaffle,
  kTopDollar,
};

inline constexpr std::array<Mechanism, 7> kAllMechanisms = {
    Mechanism::kExactDollarPartition, Mechanism::kVanilla,
    Mechanism::kPartition,            Mechanism::kCredibleSubset,
    Mechanism::kDollarRaffle,         Mechanism::kDollarPartitionRaffle,
    Mechanism::kTopDollar,
};

std::string_view mechanism_name(Mechanism mechanism);
std::optional<Mechanism> parse_mechanism(std::string_view name);
bool mechanism_needs_clustering(Mechanism mechanism);
bool mechanism_is_randomized(Mechanism mechanism);

SelectionOutcome run_mechanism(Mechanism mechanism, const ReviewProfile& profile,
                               const Clustering& clustering, const ReviewAssignment& assignment,
                               int k, Seed seed);

}  // namespace peersel
