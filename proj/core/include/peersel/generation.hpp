#pragma once

#include "peersel/core.hpp"

namespace peersel {

/// Reference order over the agents, position 0 = best.
struct GroundTruth {
  std::vector<AgentId> order;
};

/// Mallows dispersion: 0 reproduces the reference order exactly, 1 is
/// uniform over permutations.
struct MallowsParams {
  Rat phi;
};

/// Repeated-insertion sampler for the Mallows model. The element at
/// reference position j goes to position i of the partial ranking with
/// probability phi^(j-i) / (1 + phi + ... + phi^j). Insertion weights are
/// exact big integers, so a seed means the same ranking everywhere.
class MallowsSampler {
 public:
  MallowsSampler(int n, MallowsParams params);

  std::vector<AgentId> sample(const GroundTruth& reference, Rng& rng) const;

 private:
  int n_;
  Rat phi_;
  std::vector<Int> pow_p_;    // phi numerator powers
  std::vector<Int> pow_q_;    // phi denominator powers
  std::vector<Int> totals_;   // totals_[j] = sum of insertion weights for element j
};

std::vector<AgentId> mallows_sample(const GroundTruth& reference, const MallowsParams& params,
                                    Seed seed);

/// Seeded shuffle dealt round-robin; sizes differ by at most one.
Clustering make_clustering(int n, int ell, Seed seed);

/// Seeded review graph: out-degree and in-degree exactly m for every agent,
/// no self or in-cluster reviews, per-reviewer foreign-cluster counts as
/// close to m/(ell-1) as the cluster sizes allow. Throws when no such graph
/// exists (m > n - max cluster size, or a cluster too big to absorb its
/// reviews).
ReviewAssignment balanced_assignment(const Clustering& clustering, int m, Seed seed);

/// Restricts each agent's full ranking to its assignees; the best assignee
/// scores m, the worst scores 1.
ReviewProfile borda_profile(const std::vector<std::vector<AgentId>>& rankings,
                            const ReviewAssignment& assignment);

struct Instance {
  ReviewProfile profile;
  Clustering clustering;
  ReviewAssignment assignment;
  GroundTruth ground_truth;
};

/// Full experiment instance: uniform ground truth, seeded clustering and
/// assignment, one Mallows ranking per agent, Borda scores.
Instance generate_instance(int n, int m, int ell, const MallowsParams& params, Seed seed);

}  // namespace peersel
