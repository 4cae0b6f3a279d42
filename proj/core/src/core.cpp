#include "peersel/core.hpp"

#include <algorithm>
#include <sstream>

namespace peersel {

std::vector<std::vector<AgentId>> Clustering::members() const {
  std::vector<std::vector<AgentId>> out(ell);
  for (AgentId agent = 0; agent < n(); ++agent) {
    out[assignment[agent]].push_back(agent);
  }
  return out;
}

std::vector<int> Clustering::sizes() const {
  std::vector<int> out(ell, 0);
  for (int cluster : assignment) ++out[cluster];
  return out;
}

bool ReviewAssignment::reviews_pair(AgentId reviewer, AgentId reviewee) const {
  const auto& targets = reviews[reviewer];
  return std::binary_search(targets.begin(), targets.end(), reviewee);
}

namespace {

const char* kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kEmptyInstance: return "empty-instance";
    case ViolationKind::kSelfReview: return "self-review";
    case ViolationKind::kNegativeScore: return "negative-score";
    case ViolationKind::kUnassignedReview: return "unassigned-review";
    case ViolationKind::kInClusterReview: return "in-cluster-review";
    case ViolationKind::kReviewDegree: return "review-degree";
    case ViolationKind::kReviewedDegree: return "reviewed-degree";
    case ViolationKind::kClusterBalance: return "cluster-balance";
    case ViolationKind::kUnassignedAgent: return "unassigned-agent";
    case ViolationKind::kTargetTooLarge: return "target-too-large";
    case ViolationKind::kTargetExceedsMinCluster: return "target-exceeds-min-cluster";
  }
  return "unknown";
}

}  // namespace

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& violation : violations) {
    out << kind_name(violation.kind) << ": " << violation.detail << "\n";
  }
  return out.str();
}

ValidationReport validate_instance(const ReviewProfile& profile, const Clustering& clustering,
                                   const ReviewAssignment& assignment, int k, bool strict) {
  ValidationReport report;
  auto flag = [&report](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  const int n = profile.n;
  if (n <= 0) {
    flag(ViolationKind::kEmptyInstance, "instance has no agents");
    return report;
  }
  if (clustering.n() != n || assignment.n() != n) {
    flag(ViolationKind::kEmptyInstance, "profile, clustering and assignment disagree on n");
    return report;
  }

  for (AgentId agent = 0; agent < n; ++agent) {
    if (clustering.assignment[agent] < 0 || clustering.assignment[agent] >= clustering.ell) {
      flag(ViolationKind::kUnassignedAgent, "agent " + std::to_string(agent) + " has no cluster");
    }
  }
  auto sizes = clustering.sizes();
  auto [min_it, max_it] = std::minmax_element(sizes.begin(), sizes.end());
  if (!sizes.empty() && *max_it - *min_it > 1) {
    flag(ViolationKind::kClusterBalance,
         "cluster sizes differ by " + std::to_string(*max_it - *min_it));
  }

  std::vector<int> reviewed_count(n, 0);
  for (AgentId reviewer = 0; reviewer < n; ++reviewer) {
    const auto& targets = assignment.reviews[reviewer];
    if (static_cast<int>(targets.size()) != assignment.m) {
      flag(ViolationKind::kReviewDegree,
           "agent " + std::to_string(reviewer) + " reviews " + std::to_string(targets.size()) +
               " agents, expected " + std::to_string(assignment.m));
    }
    for (AgentId target : targets) {
      ++reviewed_count[target];
      if (target == reviewer) {
        flag(ViolationKind::kSelfReview, "agent " + std::to_string(reviewer) + " reviews itself");
      } else if (clustering.assignment[target] == clustering.assignment[reviewer]) {
        flag(ViolationKind::kInClusterReview,
             "agent " + std::to_string(reviewer) + " reviews cluster mate " +
                 std::to_string(target));
      }
    }
    for (const auto& [reviewee, score] : profile.entries[reviewer]) {
      if (reviewee == reviewer) {
        flag(ViolationKind::kSelfReview,
             "agent " + std::to_string(reviewer) + " scores itself");
      } else if (!assignment.reviews_pair(reviewer, reviewee)) {
        flag(ViolationKind::kUnassignedReview,
             "agent " + std::to_string(reviewer) + " scores unassigned agent " +
                 std::to_string(reviewee));
      }
      if (score < 0) {
        flag(ViolationKind::kNegativeScore,
             "agent " + std::to_string(reviewer) + " gives a negative score to " +
                 std::to_string(reviewee));
      }
    }
  }
  for (AgentId agent = 0; agent < n; ++agent) {
    if (reviewed_count[agent] != assignment.m) {
      flag(ViolationKind::kReviewedDegree,
           "agent " + std::to_string(agent) + " is reviewed " +
               std::to_string(reviewed_count[agent]) + " times, expected " +
               std::to_string(assignment.m));
    }
  }

  if (k > n) {
    flag(ViolationKind::kTargetTooLarge,
         "k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  } else if (strict && clustering.ell > 0 && k > n / clustering.ell) {
    flag(ViolationKind::kTargetExceedsMinCluster,
         "k=" + std::to_string(k) + " exceeds floor(n/ell)=" + std::to_string(n / clustering.ell));
  }
  return report;
}

}  // namespace peersel
