#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "peersel/generation.hpp"
#include "peersel/mechanisms.hpp"

using namespace peersel;

namespace {

GroundTruth identity_truth(int n) {
  GroundTruth truth;
  truth.order.resize(n);
  std::iota(truth.order.begin(), truth.order.end(), 0);
  return truth;
}

int kendall_tau(const std::vector<AgentId>& ranking, const std::vector<AgentId>& reference) {
  std::vector<int> position(ranking.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) position[ranking[i]] = static_cast<int>(i);
  int inversions = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    for (std::size_t j = i + 1; j < reference.size(); ++j) {
      inversions += position[reference[i]] > position[reference[j]];
    }
  }
  return inversions;
}

}  // namespace

TEST_CASE("zero dispersion reproduces the reference order") {
  GroundTruth truth;
  truth.order = {3, 0, 2, 1, 4};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CHECK(mallows_sample(truth, MallowsParams{Rat(0)}, Seed{seed}) == truth.order);
  }
}

TEST_CASE("dispersion one is uniform over permutations") {
  const int draws = 12000;
  std::map<std::vector<AgentId>, int> counts;
  auto truth = identity_truth(3);
  for (int i = 0; i < draws; ++i) {
    ++counts[mallows_sample(truth, MallowsParams{Rat(1)}, Seed{static_cast<std::uint64_t>(i)})];
  }
  CHECK(counts.size() == 6);
  const double expected = draws / 6.0;
  const double sigma = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
  for (const auto& [permutation, count] : counts) {
    CHECK(std::abs(count - expected) < 4 * sigma);
  }
}

TEST_CASE("two elements at phi = 0.5 swap with probability 1/3") {
  auto truth = identity_truth(2);
  const int draws = 100000;
  int swaps = 0;
  for (int i = 0; i < draws; ++i) {
    auto ranking =
        mallows_sample(truth, MallowsParams{Rat(1, 2)}, Seed{static_cast<std::uint64_t>(i)});
    swaps += ranking == std::vector<AgentId>{1, 0};
  }
  double freq = static_cast<double>(swaps) / draws;
  double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / draws);
  CHECK(freq > 1.0 / 3 - 3 * sigma);
  CHECK(freq < 1.0 / 3 + 3 * sigma);
}

TEST_CASE("empirical law matches the closed-form Mallows mass on four elements") {
  auto truth = identity_truth(4);
  const int draws = 1000000;
  for (const char* phi_text : {"0.25", "0.5", "0.75"}) {
    Rat phi = parse_decimal(phi_text);
    MallowsSampler sampler(4, MallowsParams{phi});

    // Normalizer: product over j of (1 + phi + ... + phi^j).
    Rat normalizer(1);
    for (int j = 1; j < 4; ++j) {
      Rat level(0);
      Rat power(1);
      for (int d = 0; d <= j; ++d) {
        level += power;
        power *= phi;
      }
      normalizer *= level;
    }

    std::map<std::vector<AgentId>, int> counts;
    std::uint64_t base = seed_combine(1234, phi_text);
    for (int i = 0; i < draws; ++i) {
      Rng rng(Seed{seed_combine(base, static_cast<std::uint64_t>(i))});
      ++counts[sampler.sample(truth, rng)];
    }

    std::vector<AgentId> permutation = truth.order;
    do {
      Rat mass(1);
      for (int t = 0; t < kendall_tau(permutation, truth.order); ++t) mass *= phi;
      mass /= normalizer;
      double p = rat_to_double(mass);
      double freq = static_cast<double>(counts[permutation]) / draws;
      double sigma = std::sqrt(p * (1 - p) / draws);
      CHECK(std::abs(freq - p) < 4 * sigma);
    } while (std::next_permutation(permutation.begin(), permutation.end()));
  }
}

TEST_CASE("mallows sampling is seed-stable and rejects bad dispersion") {
  auto truth = identity_truth(20);
  MallowsParams params{Rat(1, 2)};
  CHECK(mallows_sample(truth, params, Seed{7}) == mallows_sample(truth, params, Seed{7}));
  CHECK_THROWS_AS(MallowsSampler(4, MallowsParams{Rat(3, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(MallowsSampler(4, MallowsParams{Rat(-1, 2)}), std::invalid_argument);
}

TEST_CASE("clusterings deal agents round-robin with near-equal sizes") {
  auto even = make_clustering(8, 4, Seed{0});
  CHECK(even.sizes() == std::vector<int>{2, 2, 2, 2});

  auto nsf = make_clustering(130, 4, Seed{1});
  CHECK(nsf.sizes() == std::vector<int>{33, 33, 32, 32});

  auto singletons = make_clustering(5, 5, Seed{2});
  CHECK(singletons.sizes() == std::vector<int>{1, 1, 1, 1, 1});

  CHECK_THROWS_AS(make_clustering(4, 5, Seed{0}), std::invalid_argument);
  CHECK_THROWS_AS(make_clustering(4, 0, Seed{0}), std::invalid_argument);

  Rng rng(Seed{3});
  for (int round = 0; round < 50; ++round) {
    int n = 1 + static_cast<int>(rng.below(std::uint64_t{40}));
    int ell = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    auto sizes = make_clustering(n, ell, Seed{rng.next()}).sizes();
    auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*hi - *lo <= 1);
    CHECK(std::accumulate(sizes.begin(), sizes.end(), 0) == n);
  }
}

namespace {

void check_assignment(const Clustering& clustering, const ReviewAssignment& assignment, int m) {
  const int n = clustering.n();
  std::vector<int> incoming(n, 0);
  for (AgentId reviewer = 0; reviewer < n; ++reviewer) {
    const auto& targets = assignment.reviews[reviewer];
    CHECK(static_cast<int>(targets.size()) == m);
    std::set<AgentId> unique(targets.begin(), targets.end());
    CHECK(unique.size() == targets.size());
    for (AgentId target : targets) {
      CHECK(target != reviewer);
      CHECK(clustering.assignment[target] != clustering.assignment[reviewer]);
      ++incoming[target];
    }
  }
  for (int count : incoming) CHECK(count == m);
}

std::map<int, int> foreign_counts(const Clustering& clustering,
                                  const ReviewAssignment& assignment, AgentId reviewer) {
  std::map<int, int> counts;
  for (AgentId target : assignment.reviews[reviewer]) {
    ++counts[clustering.assignment[target]];
  }
  return counts;
}

}  // namespace

TEST_CASE("the 8/4/2 assignment is 2-regular across two distinct foreign clusters") {
  auto clustering = make_clustering(8, 4, Seed{21});
  auto assignment = balanced_assignment(clustering, 2, Seed{22});
  check_assignment(clustering, assignment, 2);
  for (AgentId reviewer = 0; reviewer < 8; ++reviewer) {
    auto counts = foreign_counts(clustering, assignment, reviewer);
    CHECK(counts.size() == 2);  // one review in each of two foreign clusters
  }
}

TEST_CASE("the 130/4/9 assignment is 9-regular and balanced within one review") {
  auto clustering = make_clustering(130, 4, Seed{5});
  auto assignment = balanced_assignment(clustering, 9, Seed{6});
  check_assignment(clustering, assignment, 9);
  // m/(ell-1) = 3; unequal cluster sizes force counts into {2,3,4}.
  for (AgentId reviewer = 0; reviewer < 130; ++reviewer) {
    for (const auto& [cluster, count] : foreign_counts(clustering, assignment, reviewer)) {
      CHECK(count >= 2);
      CHECK(count <= 4);
    }
  }
}

TEST_CASE("two equal clusters with maximal m review the whole other side") {
  auto clustering = make_clustering(8, 2, Seed{8});
  auto assignment = balanced_assignment(clustering, 4, Seed{9});
  check_assignment(clustering, assignment, 4);
  auto members = clustering.members();
  for (AgentId reviewer : members[0]) {
    CHECK(assignment.reviews[reviewer] == members[1]);
  }
}

TEST_CASE("infeasible assignment shapes are rejected with diagnostics") {
  // m beyond the agents outside the largest cluster.
  auto clustering = make_clustering(8, 4, Seed{0});
  CHECK_THROWS_AS(balanced_assignment(clustering, 7, Seed{0}), std::invalid_argument);

  // An odd split across two clusters cannot give the bigger half m reviews.
  auto lopsided = make_clustering(5, 2, Seed{0});
  CHECK_THROWS_AS(balanced_assignment(lopsided, 2, Seed{0}), std::invalid_argument);

  // One cluster cannot host out-of-cluster reviews at all.
  auto single = make_clustering(5, 1, Seed{0});
  CHECK_THROWS_AS(balanced_assignment(single, 1, Seed{0}), std::invalid_argument);
}

TEST_CASE("random feasible shapes always yield exact degrees") {
  Rng rng(Seed{1001});
  int built = 0, refused = 0;
  for (int round = 0; round < 80; ++round) {
    int n = 6 + static_cast<int>(rng.below(std::uint64_t{30}));
    int ell = 2 + static_cast<int>(rng.below(std::uint64_t{5}));
    if (ell > n / 2) ell = 2;
    if (ell == 2 && n % 2 == 1) ++n;
    int max_size = (n + ell - 1) / ell;
    int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - max_size)));
    auto clustering = make_clustering(n, ell, Seed{rng.next()});
    ReviewAssignment assignment;
    try {
      assignment = balanced_assignment(clustering, m, Seed{rng.next()});
    } catch (const std::invalid_argument&) {
      // Some shapes near the m bound genuinely admit no m-regular graph
      // (two large clusters can pin their shared outsiders above m).
      ++refused;
      continue;
    }
    ++built;
    check_assignment(clustering, assignment, m);

    // Determinism: the same seed rebuilds the same graph.
    auto again = balanced_assignment(clustering, m, Seed{0xabcdef});
    auto once_more = balanced_assignment(clustering, m, Seed{0xabcdef});
    CHECK(again == once_more);
  }
  CHECK(built >= 60);  // refusals are the rare exception
}

TEST_CASE("borda scores are m down to 1 in ranking order") {
  auto clustering = make_clustering(6, 3, Seed{2});
  auto assignment = balanced_assignment(clustering, 2, Seed{3});
  std::vector<std::vector<AgentId>> rankings(6, std::vector<AgentId>{0, 1, 2, 3, 4, 5});
  auto profile = borda_profile(rankings, assignment);
  for (AgentId reviewer = 0; reviewer < 6; ++reviewer) {
    const auto& targets = assignment.reviews[reviewer];
    // Ranking is the identity, so the smaller assignee id gets score 2.
    CHECK(profile.entries[reviewer].at(targets[0]) == 2);
    CHECK(profile.entries[reviewer].at(targets[1]) == 1);
  }
}

TEST_CASE("seven reviews spread scores 7..1 as a permutation") {
  auto clustering = make_clustering(16, 2, Seed{4});
  auto assignment = balanced_assignment(clustering, 7, Seed{5});
  GroundTruth sigma = identity_truth(16);
  std::vector<std::vector<AgentId>> rankings;
  for (int agent = 0; agent < 16; ++agent) {
    rankings.push_back(mallows_sample(sigma, MallowsParams{Rat(1, 2)},
                                      Seed{static_cast<std::uint64_t>(agent)}));
  }
  auto profile = borda_profile(rankings, assignment);
  for (AgentId reviewer = 0; reviewer < 16; ++reviewer) {
    std::set<Rat> scores;
    for (const auto& [reviewee, score] : profile.entries[reviewer]) scores.insert(score);
    CHECK(scores == std::set<Rat>{Rat(1), Rat(2), Rat(3), Rat(4), Rat(5), Rat(6), Rat(7)});
  }
}

TEST_CASE("zero dispersion makes every restricted ranking agree with sigma") {
  auto instance = generate_instance(8, 2, 4, MallowsParams{Rat(0)}, Seed{77});
  std::vector<int> rank_of(8);
  for (int pos = 0; pos < 8; ++pos) rank_of[instance.ground_truth.order[pos]] = pos;
  for (AgentId reviewer = 0; reviewer < 8; ++reviewer) {
    for (const auto& [reviewee, score] : instance.profile.entries[reviewer]) {
      for (const auto& [other, other_score] : instance.profile.entries[reviewer]) {
        if (score > other_score) CHECK(rank_of[reviewee] < rank_of[other]);
      }
    }
  }
}

TEST_CASE("generated NSF-like instances validate strictly") {
  auto instance = generate_instance(130, 9, 4, MallowsParams{Rat(1, 2)}, Seed{2023});
  auto report =
      validate_instance(instance.profile, instance.clustering, instance.assignment, 30, true);
  CHECK(report.ok());
  CHECK(report.to_string().empty());
}

TEST_CASE("instance generation is a pure function of its seed") {
  auto first = generate_instance(20, 4, 4, MallowsParams{Rat(1, 2)}, Seed{99});
  auto second = generate_instance(20, 4, 4, MallowsParams{Rat(1, 2)}, Seed{99});
  CHECK(first.profile == second.profile);
  CHECK(first.clustering == second.clustering);
  CHECK(first.assignment == second.assignment);
  CHECK(first.ground_truth.order == second.ground_truth.order);

  auto third = generate_instance(20, 4, 4, MallowsParams{Rat(1, 2)}, Seed{100});
  CHECK(first.profile != third.profile);
}
