#include "peersel/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace peersel {

namespace {

/// Ids ordered by (score descending, id ascending); the fixed tie-break
/// keeps every mechanism deterministic given its seed.
std::vector<AgentId> by_score_desc(const std::vector<Rat>& scores) {
  std::vector<AgentId> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&scores](AgentId a, AgentId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return ids;
}

std::vector<AgentId> top_k(const std::vector<Rat>& scores, int k) {
  auto ids = by_score_desc(scores);
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Rat> raw_incoming_totals(const ReviewProfile& profile) {
  std::vector<Rat> totals(profile.n, Rat(0));
  for (AgentId reviewer = 0; reviewer < profile.n; ++reviewer) {
    for (const auto& [reviewee, score] : profile.entries[reviewer]) {
      totals[reviewee] += score;
    }
  }
  return totals;
}

void require_k_at_most_n(int k, int n) {
  if (k < 0 || k > n) {
    throw std::invalid_argument("target size k=" + std::to_string(k) +
                                " must be between 0 and n=" + std::to_string(n));
  }
}

}  // namespace

NormalizedProfile normalize(const ReviewProfile& profile, const ReviewAssignment& assignment) {
  NormalizedProfile normalized;
  normalized.n = profile.n;
  normalized.values.resize(profile.n);
  for (AgentId reviewer = 0; reviewer < profile.n; ++reviewer) {
    const auto& targets = assignment.reviews[reviewer];
    for (const auto& [reviewee, score] : profile.entries[reviewer]) {
      if (!assignment.reviews_pair(reviewer, reviewee)) {
        throw std::invalid_argument("agent " + std::to_string(reviewer) +
                                    " scores unassigned agent " + std::to_string(reviewee));
      }
      if (score < 0) {
        throw std::invalid_argument("negative score from agent " + std::to_string(reviewer));
      }
    }
    if (targets.empty()) continue;
    Rat total(0);
    for (AgentId target : targets) {
      if (const Rat* score = profile.find(reviewer, target)) total += *score;
    }
    if (total == 0) {
      // Absent or all-zero reviewer: forced uniform split.
      Rat uniform(1, static_cast<unsigned long>(targets.size()));
      uniform.canonicalize();
      for (AgentId target : targets) normalized.values[reviewer][target] = uniform;
    } else {
      for (AgentId target : targets) {
        if (const Rat* score = profile.find(reviewer, target)) {
          normalized.values[reviewer][target] = *score / total;
        } else {
          normalized.values[reviewer][target] = Rat(0);
        }
      }
    }
  }
  return normalized;
}

std::pair<ClusterShares, ShareVector> cluster_shares(const NormalizedProfile& normalized,
                                                     const Clustering& clustering, int k) {
  ClusterShares shares;
  shares.x.assign(clustering.ell, Rat(0));
  for (AgentId reviewer = 0; reviewer < normalized.n; ++reviewer) {
    for (const auto& [reviewee, value] : normalized.values[reviewer]) {
      if (clustering.assignment[reviewee] == clustering.assignment[reviewer]) {
        throw std::invalid_argument("normalized profile has an in-cluster value: " +
                                    std::to_string(reviewer) + " -> " + std::to_string(reviewee));
      }
      shares.x[clustering.assignment[reviewee]] += value;
    }
  }
  for (auto& x : shares.x) x /= normalized.n;

  ShareVector quota;
  quota.k = k;
  quota.shares.reserve(shares.x.size());
  for (const auto& x : shares.x) quota.shares.push_back(x * k);
  return {std::move(shares), std::move(quota)};
}

std::vector<Rat> agent_scores(const NormalizedProfile& normalized, const Clustering& clustering) {
  std::vector<Rat> scores(normalized.n, Rat(0));
  for (AgentId reviewer = 0; reviewer < normalized.n; ++reviewer) {
    for (const auto& [reviewee, value] : normalized.values[reviewer]) {
      if (clustering.assignment[reviewee] == clustering.assignment[reviewer]) {
        throw std::invalid_argument("normalized profile has an in-cluster value");
      }
      scores[reviewee] += value;
    }
  }
  return scores;
}

namespace {

/// Members of each cluster ordered best-first by (score desc, id asc).
std::vector<std::vector<AgentId>> ranked_clusters(const std::vector<Rat>& scores,
                                                  const Clustering& clustering) {
  std::vector<std::vector<AgentId>> ranked(clustering.ell);
  for (AgentId agent : by_score_desc(scores)) {
    ranked[clustering.assignment[agent]].push_back(agent);
  }
  return ranked;
}

}  // namespace

SelectionOutcome exact_dollar_partition(const ReviewProfile& profile, const Clustering& clustering,
                                        const ReviewAssignment& assignment, int k, Seed seed) {
  require_k_at_most_n(k, profile.n);
  auto normalized = normalize(profile, assignment);
  auto [x, quota] = cluster_shares(normalized, clustering, k);
  auto dist = allocation_from_shares(quota);
  NiceAllocation realized = sample_allocation(dist, seed);

  auto ranked = ranked_clusters(agent_scores(normalized, clustering), clustering);
  SelectionOutcome outcome;
  for (int cluster = 0; cluster < clustering.ell; ++cluster) {
    int take = realized.quotas[cluster];
    if (take > static_cast<int>(ranked[cluster].size())) {
      throw std::runtime_error("allocation asks for " + std::to_string(take) +
                               " agents from cluster " + std::to_string(cluster) + " of size " +
                               std::to_string(ranked[cluster].size()));
    }
    outcome.winners.insert(outcome.winners.end(), ranked[cluster].begin(),
                           ranked[cluster].begin() + take);
  }
  std::sort(outcome.winners.begin(), outcome.winners.end());
  outcome.realized_allocation = std::move(realized);
  outcome.distribution = std::move(dist);
  return outcome;
}

std::vector<Rat> edp_selection_probabilities(const ReviewProfile& profile,
                                             const Clustering& clustering,
                                             const ReviewAssignment& assignment, int k) {
  require_k_at_most_n(k, profile.n);
  auto normalized = normalize(profile, assignment);
  auto [x, quota] = cluster_shares(normalized, clustering, k);
  auto dist = allocation_from_shares(quota);
  auto ranked = ranked_clusters(agent_scores(normalized, clustering), clustering);

  std::vector<Rat> probability(profile.n, Rat(0));
  for (int cluster = 0; cluster < clustering.ell; ++cluster) {
    for (std::size_t pos = 0; pos < ranked[cluster].size(); ++pos) {
      const int rank = static_cast<int>(pos) + 1;
      Rat mass(0);
      for (const auto& [allocation, prob] : dist.support) {
        if (allocation.quotas[cluster] >= rank) mass += prob;
      }
      probability[ranked[cluster][pos]] = mass;
    }
  }
  return probability;
}

SelectionOutcome vanilla(const ReviewProfile& profile, int k) {
  require_k_at_most_n(k, profile.n);
  SelectionOutcome outcome;
  outcome.winners = top_k(raw_incoming_totals(profile), k);
  return outcome;
}

SelectionOutcome partition_mechanism(const ReviewProfile& profile, const Clustering& clustering,
                                     const ReviewAssignment& assignment, int k) {
  require_k_at_most_n(k, profile.n);
  (void)assignment;
  // Out-of-cluster raw scores; under a valid assignment every review already
  // crosses clusters, the guard just keeps malformed profiles honest.
  std::vector<Rat> scores(profile.n, Rat(0));
  for (AgentId reviewer = 0; reviewer < profile.n; ++reviewer) {
    for (const auto& [reviewee, score] : profile.entries[reviewer]) {
      if (clustering.assignment[reviewee] != clustering.assignment[reviewer]) {
        scores[reviewee] += score;
      }
    }
  }
  auto ranked = ranked_clusters(scores, clustering);

  SelectionOutcome outcome;
  for (int cluster = 0; cluster < clustering.ell; ++cluster) {
    int take = k / clustering.ell + (cluster < k % clustering.ell ? 1 : 0);
    if (take > static_cast<int>(ranked[cluster].size())) {
      throw std::runtime_error("partition quota " + std::to_string(take) +
                               " exceeds cluster " + std::to_string(cluster) + " size " +
                               std::to_string(ranked[cluster].size()));
    }
    outcome.winners.insert(outcome.winners.end(), ranked[cluster].begin(),
                           ranked[cluster].begin() + take);
  }
  std::sort(outcome.winners.begin(), outcome.winners.end());
  return outcome;
}

CredibleSets credible_sets(const ReviewProfile& profile, const ReviewAssignment& assignment,
                           int k) {
  require_k_at_most_n(k, profile.n);
  (void)assignment;
  auto totals = raw_incoming_totals(profile);
  CredibleSets sets;
  sets.top = top_k(totals, k);

  std::vector<bool> in_top(profile.n, false);
  for (AgentId agent : sets.top) in_top[agent] = true;
  for (AgentId candidate = 0; candidate < profile.n; ++candidate) {
    if (in_top[candidate]) continue;
    // Candidate withholds all of its own scores; no renormalization.
    std::vector<Rat> adjusted = totals;
    for (const auto& [reviewee, score] : profile.entries[candidate]) {
      adjusted[reviewee] -= score;
    }
    int better = 0;
    for (AgentId other = 0; other < profile.n; ++other) {
      if (other == candidate) continue;
      if (adjusted[other] > adjusted[candidate] ||
          (adjusted[other] == adjusted[candidate] && other < candidate)) {
        ++better;
      }
    }
    if (better < k) sets.entrants.push_back(candidate);
  }
  return sets;
}

SelectionOutcome credible_subset(const ReviewProfile& profile, const ReviewAssignment& assignment,
                                 int k, Seed seed) {
  auto sets = credible_sets(profile, assignment, k);
  const int m = assignment.m;
  const int p = static_cast<int>(sets.entrants.size());
  if (p > m) throw std::runtime_error("credible subset invariant |P| <= m violated");
  if (k + m == 0) return {};  // nothing to select, nothing to abstain from

  SelectionOutcome outcome;
  outcome.potential_entrants = p;
  outcome.abstain_probability = Rat(m - p, k + m);
  outcome.abstain_probability->canonicalize();

  Rng rng(seed);
  // Bernoulli((k+p)/(k+m)) with integer weights.
  bool select = weighted_pick(std::vector<Int>{Int(k + p), Int(m - p)}, rng) == 0;
  if (select) {
    std::vector<AgentId> pool = sets.top;
    pool.insert(pool.end(), sets.entrants.begin(), sets.entrants.end());
    std::sort(pool.begin(), pool.end());
    rng.shuffle(pool);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    outcome.winners = std::move(pool);
  }
  return outcome;
}

std::vector<Rat> dollar_shares(const ReviewProfile& profile, bool default_absent) {
  const int n = profile.n;
  std::vector<Rat> shares(n, Rat(0));
  for (AgentId reviewer = 0; reviewer < n; ++reviewer) {
    const auto& row = profile.entries[reviewer];
    Rat total(0);
    for (const auto& [reviewee, score] : row) {
      if (score < 0) throw std::invalid_argument("negative score in profile");
      total += score;
    }
    if (total > 0) {
      for (const auto& [reviewee, score] : row) {
        shares[reviewee] += score / (total * n);
      }
    } else if (default_absent) {
      if (!row.empty()) {
        Rat piece(1, static_cast<unsigned long>(row.size()));
        piece.canonicalize();
        for (const auto& [reviewee, score] : row) shares[reviewee] += piece / n;
      } else {
        for (AgentId other = 0; other < n; ++other) {
          if (other != reviewer) shares[other] += Rat(1) / (Rat(n) * (n - 1));
        }
      }
    }
  }
  return shares;
}

SelectionOutcome dollar_raffle(const ReviewProfile& profile, int k, Seed seed) {
  require_k_at_most_n(k, profile.n);
  auto shares = dollar_shares(profile);

  // Scale once to integer weights; removing a winner is then just zeroing
  // its weight, which is the removal-and-renormalize reading of the raffle.
  Int common(1);
  for (const auto& s : shares) {
    Int den = s.get_den();
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
  }
  std::vector<Int> weight(profile.n);
  Int total(0);
  for (int i = 0; i < profile.n; ++i) {
    weight[i] = shares[i].get_num() * (common / shares[i].get_den());
    total += weight[i];
  }

  Rng rng(seed);
  std::vector<bool> selected(profile.n, false);
  SelectionOutcome outcome;
  while (static_cast<int>(outcome.winners.size()) < k) {
    if (total == 0) {
      // Everyone left has zero share: fill by the fixed tie-break order.
      for (AgentId agent = 0; agent < profile.n && static_cast<int>(outcome.winners.size()) < k;
           ++agent) {
        if (!selected[agent]) {
          selected[agent] = true;
          outcome.winners.push_back(agent);
        }
      }
      break;
    }
    Int draw = rng.below(total);
    Int acc(0);
    for (AgentId agent = 0; agent < profile.n; ++agent) {
      acc += weight[agent];
      if (draw < acc) {
        selected[agent] = true;
        outcome.winners.push_back(agent);
        total -= weight[agent];
        weight[agent] = 0;
        break;
      }
    }
  }
  std::sort(outcome.winners.begin(), outcome.winners.end());
  return outcome;
}

SelectionOutcome dollar_partition_raffle(const ReviewProfile& profile,
                                         const Clustering& clustering,
                                         const ReviewAssignment& assignment, int k, Seed seed) {
  require_k_at_most_n(k, profile.n);
  if (clustering.ell < 2) {
    throw std::invalid_argument("dollar partition raffle needs at least two clusters");
  }
  auto normalized = normalize(profile, assignment);
  auto [cluster_x, quota] = cluster_shares(normalized, clustering, k);
  auto scores = agent_scores(normalized, clustering);
  auto ranked = ranked_clusters(scores, clustering);

  Int common(1);
  for (const auto& x : cluster_x.x) {
    Int den = x.get_den();
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
  }
  std::vector<Int> weight(clustering.ell);
  Int total(0);
  std::vector<std::size_t> next(clustering.ell, 0);
  for (int cluster = 0; cluster < clustering.ell; ++cluster) {
    weight[cluster] = cluster_x.x[cluster].get_num() * (common / cluster_x.x[cluster].get_den());
    if (ranked[cluster].empty()) weight[cluster] = 0;
    total += weight[cluster];
  }

  Rng rng(seed);
  SelectionOutcome outcome;
  while (static_cast<int>(outcome.winners.size()) < k) {
    int cluster = -1;
    if (total == 0) {
      // Remaining clusters carry no share; fall back to the global
      // score/tie-break order among unselected agents.
      for (int c = 0; c < clustering.ell; ++c) {
        if (next[c] >= ranked[c].size()) continue;
        if (cluster == -1) {
          cluster = c;
          continue;
        }
        AgentId head = ranked[c][next[c]];
        AgentId best = ranked[cluster][next[cluster]];
        if (scores[head] > scores[best] || (scores[head] == scores[best] && head < best)) {
          cluster = c;
        }
      }
      if (cluster == -1) break;  // nobody left anywhere
    } else {
      Int draw = rng.below(total);
      Int acc(0);
      for (int c = 0; c < clustering.ell; ++c) {
        acc += weight[c];
        if (draw < acc) {
          cluster = c;
          break;
        }
      }
    }
    outcome.winners.push_back(ranked[cluster][next[cluster]++]);
    if (next[cluster] >= ranked[cluster].size()) {
      total -= weight[cluster];
      weight[cluster] = 0;
    }
  }
  std::sort(outcome.winners.begin(), outcome.winners.end());
  return outcome;
}

SelectionOutcome top_dollar(const ReviewProfile& profile, int k) {
  require_k_at_most_n(k, profile.n);
  SelectionOutcome outcome;
  outcome.winners = top_k(dollar_shares(profile, /*default_absent=*/false), k);
  return outcome;
}

std::string_view mechanism_name(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kExactDollarPartition: return "edp";
    case Mechanism::kVanilla: return "vanilla";
    case Mechanism::kPartition: return "partition";
    case Mechanism::kCredibleSubset: return "credible-subset";
    case Mechanism::kDollarRaffle: return "dollar-raffle";
    case Mechanism::kDollarPartitionRaffle: return "dollar-partition-raffle";
    case Mechanism::kTopDollar: return "top-dollar";
  }
  return "unknown";
}

std::optional<Mechanism> parse_mechanism(std::string_view name) {
  for (Mechanism mechanism : kAllMechanisms) {
    if (mechanism_name(mechanism) == name) return mechanism;
  }
  return std::nullopt;
}

bool mechanism_needs_clustering(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kExactDollarPartition:
    case Mechanism::kPartition:
    case Mechanism::kDollarPartitionRaffle:
      return true;
    default:
      return false;
  }
}

bool mechanism_is_randomized(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kExactDollarPartition:
    case Mechanism::kCredibleSubset:
    case Mechanism::kDollarRaffle:
    case Mechanism::kDollarPartitionRaffle:
      return true;
    default:
      return false;
  }
}

SelectionOutcome run_mechanism(Mechanism mechanism, const ReviewProfile& profile,
                               const Clustering& clustering, const ReviewAssignment& assignment,
                               int k, Seed seed) {
  switch (mechanism) {
    case Mechanism::kExactDollarPartition:
      return exact_dollar_partition(profile, clustering, assignment, k, seed);
    case Mechanism::kVanilla:
      return vanilla(profile, k);
    case Mechanism::kPartition:
      return partition_mechanism(profile, clustering, assignment, k);
    case Mechanism::kCredibleSubset:
      return credible_subset(profile, assignment, k, seed);
    case Mechanism::kDollarRaffle:
      return dollar_raffle(profile, k, seed);
    case Mechanism::kDollarPartitionRaffle:
      return dollar_partition_raffle(profile, clustering, assignment, k, seed);
    case Mechanism::kTopDollar:
      return top_dollar(profile, k);
  }
  throw std::logic_error("unreachable mechanism id");
}

}  // namespace peersel
