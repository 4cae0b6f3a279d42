#pragma once

#include <string>
#include <vector>

#include "peersel/core.hpp"
#include "peersel/generation.hpp"
#include "peersel/io.hpp"
#include "peersel/rng.hpp"

namespace peersel::testing {

struct FixtureInstance {
  ReviewProfile profile;
  Clustering clustering;
  ReviewAssignment assignment;
};

struct Entry {
  AgentId reviewer;
  AgentId reviewee;
  const char* score;
};

inline ReviewProfile make_profile(int n, const std::vector<Entry>& entries) {
  ReviewProfile profile(n);
  for (const auto& entry : entries) {
    profile.set(entry.reviewer, entry.reviewee, parse_decimal(entry.score));
  }
  return profile;
}

inline Clustering make_clusters(std::vector<int> assignment, int ell) {
  Clustering clustering;
  clustering.ell = ell;
  clustering.assignment = std::move(assignment);
  return clustering;
}

// The worked 8-agent instance: A..H = 0..7, clusters {A,B} {C,D} {E,F} {G,H},
// every agent grading its two assignees on a 0-100 scale.
constexpr AgentId A = 0, B = 1, C = 2, D = 3, E = 4, F = 5, G = 6, H = 7;

inline ReviewProfile table1_profile() {
  return make_profile(8, {
                             {A, D, "0"},   {A, H, "100"},
                             {B, C, "80"},  {B, E, "30"},
                             {C, A, "83"},  {C, G, "42"},
                             {D, B, "77"},  {D, F, "50"},
                             {E, D, "65"},  {E, G, "65"},
                             {F, B, "56"},  {F, H, "98"},
                             {G, A, "29"},  {G, F, "62"},
                             {H, C, "75"},  {H, E, "29"},
                         });
}

// The same instance with the four-digit normalized grades; rows already sum
// to 1, so the pipeline's own normalization leaves them untouched.
inline ReviewProfile table2_profile() {
  return make_profile(8, {
                             {A, D, "0"},      {A, H, "1.00"},
                             {B, C, "0.7272"}, {B, E, "0.2728"},
                             {C, A, "0.664"},  {C, G, "0.336"},
                             {D, B, "0.6063"}, {D, F, "0.3937"},
                             {E, D, "0.50"},   {E, G, "0.50"},
                             {F, B, "0.3636"}, {F, H, "0.6364"},
                             {G, A, "0.3187"}, {G, F, "0.6813"},
                             {H, C, "0.7212"}, {H, E, "0.2788"},
                         });
}

inline Clustering table_clustering() { return make_clusters({0, 0, 1, 1, 2, 2, 3, 3}, 4); }

inline ReviewAssignment table_assignment() {
  return assignment_from_profile(table1_profile());
}

inline FixtureInstance table1_instance() {
  return {table1_profile(), table_clustering(), table_assignment()};
}

inline FixtureInstance table2_instance() {
  return {table2_profile(), table_clustering(), table_assignment()};
}

// 18 agents in three clusters of six. The first cluster pours its weight
// onto the second with a slight edge to agents 6 and 7; the other two
// clusters split their points over agents 0..3. Everyone agrees that
// {0,1,2,3,6,7} are the best six.
inline FixtureInstance contrast18_instance() {
  ReviewProfile profile(18);
  for (AgentId reviewer = 0; reviewer < 6; ++reviewer) {
    for (AgentId reviewee = 6; reviewee < 12; ++reviewee) {
      profile.set(reviewer, reviewee, Rat(reviewee < 8 ? 11 : 10));
    }
  }
  for (AgentId reviewer = 6; reviewer < 18; ++reviewer) {
    for (AgentId reviewee = 0; reviewee < 4; ++reviewee) {
      profile.set(reviewer, reviewee, Rat(10));
    }
  }
  Clustering clustering;
  clustering.ell = 3;
  clustering.assignment.resize(18);
  for (AgentId agent = 0; agent < 18; ++agent) clustering.assignment[agent] = agent / 6;
  return {profile, clustering, assignment_from_profile(profile)};
}

struct RandomInstance {
  ReviewProfile profile;
  Clustering clustering;
  ReviewAssignment assignment;
  int k = 1;
};

inline std::map<AgentId, Rat> random_row(Rng& rng, const std::vector<AgentId>& targets) {
  std::map<AgentId, Rat> row;
  if (rng.below(8) == 0) return row;  // absent agent
  for (AgentId target : targets) {
    row[target] = Rat(static_cast<unsigned long>(rng.below(101)));
  }
  return row;
}

/// Feasible random instance for property suites: 6 <= n <= max_n, balanced
/// clusters, exact m-regular assignment, uniform random integer scores with
/// occasional absent agents. m near the upper bound can be infeasible for
/// some cluster shapes (the assignment generator is the oracle for that),
/// so m steps down until the graph exists.
inline RandomInstance random_instance(Rng& rng, int max_n = 24) {
  RandomInstance instance;
  int n = 6 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n - 5)));
  int ell = 2 + static_cast<int>(rng.below(std::min(5, n / 2 - 1)));
  if (ell == 2 && n % 2 == 1) ++n;  // odd halves cannot take m reviews each
  const int max_size = (n + ell - 1) / ell;
  int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - max_size)));

  instance.clustering = make_clustering(n, ell, Seed{rng.next()});
  for (;; --m) {
    try {
      instance.assignment = balanced_assignment(instance.clustering, m, Seed{rng.next()});
      break;
    } catch (const std::invalid_argument&) {
      if (m <= 1) throw;
    }
  }
  instance.profile = ReviewProfile(n);
  for (AgentId reviewer = 0; reviewer < n; ++reviewer) {
    instance.profile.entries[reviewer] = random_row(rng, instance.assignment.reviews[reviewer]);
  }
  instance.k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  return instance;
}

}  // namespace peersel::testing
