#include "peersel/apportionment.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace peersel {

namespace {

void check_shares(const ShareVector& shares) {
  Rat total(0);
  for (const auto& share : shares.shares) {
    if (share < 0) throw std::invalid_argument("share vector has a negative entry");
    total += share;
  }
  if (total != shares.k) {
    throw std::invalid_argument("share vector sums to " + format_fraction(total) +
                                ", expected k=" + std::to_string(shares.k));
  }
}

}  // namespace

AllocationDistribution allocation_from_shares(const ShareVector& shares, ApportionTrace* trace) {
  check_shares(shares);
  const int ell = shares.ell();
  if (ell == 0) {
    if (shares.k != 0) throw std::invalid_argument("no clusters but k > 0");
    return {};
  }

  // Work in sorted coordinates: ascending fractional part, ties by original
  // cluster index so the distribution is a pure function of the shares.
  std::vector<int> order(ell);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Rat> frac(ell);
  std::vector<long> floor_q(ell);
  for (int i = 0; i < ell; ++i) {
    floor_q[i] = static_cast<long>(rat_floor(shares.shares[i]).get_si());
    frac[i] = rat_frac(shares.shares[i]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&frac](int a, int b) { return frac[a] < frac[b]; });

  // alpha = sum of fractional parts; integral whenever the shares sum to an
  // integer. A non-integer here means corrupted input, not a case to round.
  Rat frac_sum(0);
  for (const auto& f : frac) frac_sum += f;
  if (!rat_is_integer(frac_sum)) {
    throw std::invalid_argument("fractional parts do not sum to an integer");
  }
  int alpha = static_cast<int>(frac_sum.get_num().get_si());

  // Cursors and accumulators, all in sorted coordinates. up_prob[i] is the
  // probability mass of emitted allocations in which sorted-cluster i is
  // rounded up; pbar is the total mass emitted so far.
  int low = 0;          // 0-based; the narration prints low+1
  int high = ell - 1;
  std::vector<Rat> up_prob(ell, Rat(0));
  Rat pbar(0);

  auto frac_at = [&](int sorted_pos) -> const Rat& { return frac[order[sorted_pos]]; };

  AllocationDistribution dist;
  while (low <= high) {
    // Round up the alpha clusters starting at low, plus everything past high.
    std::vector<bool> up(ell, false);
    for (int i = low; i < low + alpha; ++i) up[i] = true;
    for (int i = high + 1; i < ell; ++i) up[i] = true;

    NiceAllocation allocation;
    allocation.quotas.resize(ell);
    for (int i = 0; i < ell; ++i) {
      int original = order[i];
      allocation.quotas[original] = static_cast<int>(floor_q[original]) + (up[i] ? 1 : 0);
    }

    Rat prob(0);
    if (alpha == 0) {
      prob = Rat(1) - pbar;
      --high;
    } else {
      Rat low_need = frac_at(low) - up_prob[low];
      Rat high_need = (Rat(1) - frac_at(high)) - pbar + up_prob[high];
      if (low_need < high_need) {
        prob = low_need;
        ++low;
      } else {
        prob = high_need;
        --high;
        --alpha;
      }
    }

    for (int i = 0; i < ell; ++i) {
      if (up[i]) up_prob[i] += prob;
    }
    pbar += prob;

    if (trace) {
      ApportionStep step;
      step.allocation = allocation;
      step.prob = prob;
      step.low = low + 1;
      step.high = high + 1;
      step.alpha = alpha;
      step.pbar = pbar;
      step.round_up_prob.resize(ell);
      for (int i = 0; i < ell; ++i) step.round_up_prob[order[i]] = up_prob[i];
      trace->steps.push_back(std::move(step));
    }
    if (prob > 0) {
      dist.support.emplace_back(std::move(allocation), std::move(prob));
    }
  }

  assert(pbar == 1);
  return dist;
}

NiceAllocation sample_allocation(const AllocationDistribution& dist, Seed seed) {
  if (dist.support.empty()) throw std::invalid_argument("empty allocation distribution");
  std::vector<Rat> weights;
  weights.reserve(dist.support.size());
  for (const auto& [allocation, prob] : dist.support) weights.push_back(prob);
  Rng rng(seed);
  return dist.support[weighted_pick(weights, rng)].first;
}

std::vector<Rat> expected_allocation(const AllocationDistribution& dist) {
  if (dist.support.empty()) return {};
  std::vector<Rat> expectation(dist.support.front().first.quotas.size(), Rat(0));
  for (const auto& [allocation, prob] : dist.support) {
    for (std::size_t i = 0; i < expectation.size(); ++i) {
      expectation[i] += prob * allocation.quotas[i];
    }
  }
  return expectation;
}

std::vector<NiceAllocation> enumerate_nice_allocations(const ShareVector& shares) {
  check_shares(shares);
  const int ell = shares.ell();
  std::vector<int> fractional;
  std::vector<int> base(ell);
  for (int i = 0; i < ell; ++i) {
    base[i] = static_cast<int>(rat_floor(shares.shares[i]).get_si());
    if (!rat_is_integer(shares.shares[i])) fractional.push_back(i);
  }
  if (fractional.size() > 25) {
    throw std::invalid_argument("too many fractional coordinates to enumerate");
  }
  int base_total = std::accumulate(base.begin(), base.end(), 0);
  int ups_needed = shares.k - base_total;

  std::vector<NiceAllocation> out;
  const std::size_t f = fractional.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << f); ++mask) {
    if (static_cast<int>(std::popcount(mask)) != ups_needed) continue;
    NiceAllocation allocation;
    allocation.quotas = base;
    for (std::size_t b = 0; b < f; ++b) {
      if (mask & (std::uint64_t(1) << b)) ++allocation.quotas[fractional[b]];
    }
    out.push_back(std::move(allocation));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace peersel
