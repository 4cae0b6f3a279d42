#include "peersel/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace peersel {

OverlapScore overlap(const std::vector<AgentId>& w, const std::vector<AgentId>& reference,
                     int k) {
  if (k <= 0) throw std::invalid_argument("overlap needs k > 0");
  std::vector<AgentId> common;
  std::set_intersection(w.begin(), w.end(), reference.begin(), reference.end(),
                        std::back_inserter(common));
  Rat value(static_cast<unsigned long>(common.size()), static_cast<unsigned long>(k));
  value.canonicalize();
  return {value};
}

std::vector<AgentId> ground_truth_topk(const GroundTruth& sigma, int k) {
  if (k < 0 || k > static_cast<int>(sigma.order.size())) {
    throw std::invalid_argument("k out of range for ground truth order");
  }
  std::vector<AgentId> top(sigma.order.begin(), sigma.order.begin() + k);
  std::sort(top.begin(), top.end());
  return top;
}

SummaryStats summarize(const std::vector<Rat>& samples) {
  if (samples.empty()) throw std::invalid_argument("cannot summarize an empty sample list");
  SummaryStats stats;
  stats.count = static_cast<int>(samples.size());
  stats.min = samples.front();
  stats.max = samples.front();
  Rat sum(0);
  for (const auto& sample : samples) {
    sum += sample;
    if (sample < stats.min) stats.min = sample;
    if (sample > stats.max) stats.max = sample;
  }
  stats.mean = sum / stats.count;
  Rat squares(0);
  for (const auto& sample : samples) {
    Rat offset = sample - stats.mean;
    squares += offset * offset;
  }
  stats.variance = squares / stats.count;
  return stats;
}

}  // namespace peersel
