#include "peersel/generation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace peersel {

MallowsSampler::MallowsSampler(int n, MallowsParams params) : n_(n), phi_(std::move(params.phi)) {
  if (phi_ < 0 || phi_ > 1) throw std::invalid_argument("mallows dispersion must be in [0, 1]");
  if (phi_ == 0 || phi_ == 1 || n_ <= 1) return;
  const Int p = phi_.get_num();
  const Int q = phi_.get_den();
  pow_p_.resize(n_);
  pow_q_.resize(n_);
  pow_p_[0] = 1;
  pow_q_[0] = 1;
  for (int t = 1; t < n_; ++t) {
    pow_p_[t] = pow_p_[t - 1] * p;
    pow_q_[t] = pow_q_[t - 1] * q;
  }
  // totals_[j] = sum_{i=0..j} p^(j-i) q^i, the scaled insertion normalizer.
  totals_.resize(n_);
  totals_[0] = 1;
  for (int j = 1; j < n_; ++j) totals_[j] = totals_[j - 1] * q + pow_p_[j];
}

std::vector<AgentId> MallowsSampler::sample(const GroundTruth& reference, Rng& rng) const {
  if (static_cast<int>(reference.order.size()) != n_) {
    throw std::invalid_argument("reference order size mismatch");
  }
  if (phi_ == 0 || n_ <= 1) return reference.order;

  std::vector<AgentId> ranking;
  ranking.reserve(n_);
  for (int j = 0; j < n_; ++j) {
    int position;
    if (j == 0) {
      position = 0;
    } else if (phi_ == 1) {
      position = static_cast<int>(rng.below(static_cast<std::uint64_t>(j + 1)));
    } else {
      Int draw = rng.below(totals_[j]);
      // Scan from the in-order slot downwards: weights fall off by a factor
      // phi per step, so the expected scan length is 1/(1-phi).
      position = 0;
      Int acc(0);
      for (int i = j; i >= 0; --i) {
        acc += pow_p_[j - i] * pow_q_[i];
        if (draw < acc) {
          position = i;
          break;
        }
      }
    }
    ranking.insert(ranking.begin() + position, reference.order[j]);
  }
  return ranking;
}

std::vector<AgentId> mallows_sample(const GroundTruth& reference, const MallowsParams& params,
                                    Seed seed) {
  MallowsSampler sampler(static_cast<int>(reference.order.size()), params);
  Rng rng(seed);
  return sampler.sample(reference, rng);
}

Clustering make_clustering(int n, int ell, Seed seed) {
  if (ell < 1 || ell > n) {
    throw std::invalid_argument("need 1 <= ell <= n, got ell=" + std::to_string(ell) +
                                ", n=" + std::to_string(n));
  }
  std::vector<AgentId> agents(n);
  std::iota(agents.begin(), agents.end(), 0);
  Rng rng(seed);
  rng.shuffle(agents);

  Clustering clustering;
  clustering.ell = ell;
  clustering.assignment.resize(n);
  for (int position = 0; position < n; ++position) {
    clustering.assignment[agents[position]] = position % ell;
  }
  return clustering;
}

namespace {

/// Review-count matrix: counts[i][b] reviews from agent i into cluster b.
/// Column sums are exact by construction (m * |B| into every cluster); this
/// repairs the row sums to exactly m by moving single reviews between rows
/// of the same column, chained through intermediate rows when needed. The
/// chain search is a feasible-flow computation: if it cannot reach an
/// under-full row, no valid assignment exists.
class CountMatrix {
 public:
  CountMatrix(const Clustering& clustering, int m)
      : n_(clustering.n()),
        ell_(clustering.ell),
        m_(m),
        cluster_(clustering.assignment),
        sizes_(clustering.sizes()),
        counts_(n_, std::vector<int>(ell_, 0)) {}

  std::vector<std::vector<int>>& counts() { return counts_; }

  bool repair_rows() {
    std::vector<int> error(n_, -m_);
    for (int agent = 0; agent < n_; ++agent) {
      for (int b = 0; b < ell_; ++b) error[agent] += counts_[agent][b];
    }
    for (int agent = 0; agent < n_; ++agent) {
      while (error[agent] > 0) {
        if (!shift_one_review(agent, error)) return false;
      }
    }
    for (int value : error) {
      if (value != 0) return false;
    }
    return true;
  }

 private:
  int cap(int agent, int b) const {
    return cluster_[agent] == b ? 0 : std::min(sizes_[b], m_);
  }

  // BFS from the over-full row: a step u -> w via column b moves one of u's
  // reviews of cluster b onto w, legal when w has room for one more.
  bool shift_one_review(int from, std::vector<int>& error) {
    std::vector<int> via_row(n_, -1), via_col(n_, -1);
    std::vector<int> queue{from};
    via_row[from] = from;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int b = 0; b < ell_; ++b) {
        if (counts_[u][b] <= 0) continue;
        for (int w = 0; w < n_; ++w) {
          if (via_row[w] != -1 || counts_[w][b] >= cap(w, b)) continue;
          via_row[w] = u;
          via_col[w] = b;
          if (error[w] < 0) {
            ++error[w];
            --error[from];
            int at = w;
            while (at != from) {
              --counts_[via_row[at]][via_col[at]];
              ++counts_[at][via_col[at]];
              at = via_row[at];
            }
            return true;
          }
          queue.push_back(w);
        }
      }
    }
    return false;
  }

  int n_;
  int ell_;
  int m_;
  std::vector<int> cluster_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> counts_;
};

}  // namespace

ReviewAssignment balanced_assignment(const Clustering& clustering, int m, Seed seed) {
  const int n = clustering.n();
  const int ell = clustering.ell;
  auto members = clustering.members();
  auto sizes = clustering.sizes();
  const int max_size = *std::max_element(sizes.begin(), sizes.end());

  ReviewAssignment assignment;
  assignment.m = m;
  assignment.reviews.resize(n);
  if (m == 0) return assignment;
  if (ell < 2) {
    throw std::invalid_argument("out-of-cluster reviews need at least two clusters");
  }
  if (m > n - max_size) {
    throw std::invalid_argument("m=" + std::to_string(m) + " exceeds the " +
                                std::to_string(n - max_size) +
                                " agents available outside the largest cluster");
  }
  for (int b = 0; b < ell; ++b) {
    // Cut condition: the m*|B| reviews into B must fit through the agents
    // outside B, each of whom can send at most min(m, |B|) of them.
    long capacity = static_cast<long>(n - sizes[b]) * std::min(m, sizes[b]);
    if (static_cast<long>(m) * sizes[b] > capacity) {
      throw std::invalid_argument("cluster " + std::to_string(b) +
                                  " is too large to receive m*size reviews from outside");
    }
  }

  Rng rng(seed);

  // Per-(reviewer, target cluster) counts. Each cluster's m*|B| incoming
  // reviews are dealt as evenly as possible over the outside reviewers
  // (base each, remainder +1 along a seeded rotation), which makes the
  // column sums exact; augmenting transfers then make every row sum m.
  CountMatrix matrix(clustering, m);
  std::vector<AgentId> reviewer_order(n);
  std::iota(reviewer_order.begin(), reviewer_order.end(), 0);
  rng.shuffle(reviewer_order);
  for (int b = 0; b < ell; ++b) {
    if (sizes[b] == 0) continue;
    std::vector<AgentId> outside;
    for (AgentId reviewer : reviewer_order) {
      if (clustering.assignment[reviewer] != b) outside.push_back(reviewer);
    }
    const int base = m * sizes[b] / static_cast<int>(outside.size());
    const int remainder = m * sizes[b] % static_cast<int>(outside.size());
    std::size_t cursor = rng.below(static_cast<std::uint64_t>(outside.size()));
    for (AgentId reviewer : outside) matrix.counts()[reviewer][b] = base;
    for (int dealt = 0; dealt < remainder; ++dealt) {
      ++matrix.counts()[outside[cursor]][b];
      cursor = (cursor + 1) % outside.size();
    }
  }
  if (!matrix.repair_rows()) {
    throw std::invalid_argument("cluster shape does not admit a balanced assignment");
  }

  // For each target cluster, walk all outside reviewers in a seeded order
  // and deal each one a window of consecutive members around the target
  // cycle. The window lengths sum to m*|B|, so every member of B is hit
  // exactly m times.
  for (int b = 0; b < ell; ++b) {
    if (sizes[b] == 0) continue;
    std::vector<AgentId> targets = members[b];
    rng.shuffle(targets);
    std::size_t cursor = rng.below(static_cast<std::uint64_t>(targets.size()));
    for (AgentId reviewer : reviewer_order) {
      if (clustering.assignment[reviewer] == b) continue;
      for (int dealt = 0; dealt < matrix.counts()[reviewer][b]; ++dealt) {
        assignment.reviews[reviewer].push_back(targets[cursor]);
        cursor = (cursor + 1) % targets.size();
      }
    }
  }
  for (auto& targets : assignment.reviews) std::sort(targets.begin(), targets.end());

  // The construction is supposed to be exact; double-check both degrees.
  std::vector<int> incoming(n, 0);
  for (AgentId reviewer = 0; reviewer < n; ++reviewer) {
    if (static_cast<int>(assignment.reviews[reviewer].size()) != m ||
        std::adjacent_find(assignment.reviews[reviewer].begin(),
                           assignment.reviews[reviewer].end()) !=
            assignment.reviews[reviewer].end()) {
      throw std::logic_error("balanced_assignment produced an irregular out-degree");
    }
    for (AgentId target : assignment.reviews[reviewer]) ++incoming[target];
  }
  for (int count : incoming) {
    if (count != m) throw std::logic_error("balanced_assignment produced an irregular in-degree");
  }
  return assignment;
}

ReviewProfile borda_profile(const std::vector<std::vector<AgentId>>& rankings,
                            const ReviewAssignment& assignment) {
  const int n = assignment.n();
  if (static_cast<int>(rankings.size()) != n) {
    throw std::invalid_argument("need one ranking per agent");
  }
  ReviewProfile profile(n);
  for (AgentId reviewer = 0; reviewer < n; ++reviewer) {
    const auto& targets = assignment.reviews[reviewer];
    const int count = static_cast<int>(targets.size());
    int rank = 0;
    for (AgentId candidate : rankings[reviewer]) {
      if (std::binary_search(targets.begin(), targets.end(), candidate)) {
        profile.set(reviewer, candidate, Rat(count - rank));
        ++rank;
      }
    }
    if (rank != count) {
      throw std::invalid_argument("ranking of agent " + std::to_string(reviewer) +
                                  " does not cover its assignees");
    }
  }
  return profile;
}

Instance generate_instance(int n, int m, int ell, const MallowsParams& params, Seed seed) {
  Instance instance;

  instance.ground_truth.order.resize(n);
  std::iota(instance.ground_truth.order.begin(), instance.ground_truth.order.end(), 0);
  Rng sigma_rng(Seed{seed_combine(seed.value, "sigma")});
  sigma_rng.shuffle(instance.ground_truth.order);

  instance.clustering = make_clustering(n, ell, Seed{seed_combine(seed.value, "clustering")});
  instance.assignment =
      balanced_assignment(instance.clustering, m, Seed{seed_combine(seed.value, "assignment")});

  MallowsSampler sampler(n, params);
  const std::uint64_t mallows_seed = seed_combine(seed.value, "mallows");
  std::vector<std::vector<AgentId>> rankings(n);
  for (AgentId agent = 0; agent < n; ++agent) {
    Rng rng(Seed{seed_combine(mallows_seed, static_cast<std::uint64_t>(agent))});
    rankings[agent] = sampler.sample(instance.ground_truth, rng);
  }
  instance.profile = borda_profile(rankings, instance.assignment);
  return instance;
}

}  // namespace peersel
