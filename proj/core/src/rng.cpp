#include "peersel/rng.hpp"

#include <stdexcept>

namespace peersel {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ (splitmix64(value) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

std::uint64_t seed_combine(std::uint64_t seed, std::string_view tag) {
  // FNV-1a over the tag bytes, then the integer combiner.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return seed_combine(seed, h);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(Seed seed) {
  std::uint64_t s = seed.value;
  for (auto& word : state_) {
    s = splitmix64(s);
    word = s;
  }
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Reject the tail that would bias the modulus.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t draw;
  do {
    draw = next();
  } while (draw >= limit);
  return draw % bound;
}

Int Rng::below(const Int& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
  if (mpz_fits_ulong_p(bound.get_mpz_t()) && bound.get_ui() <= UINT64_MAX) {
    return Int(static_cast<unsigned long>(below(static_cast<std::uint64_t>(bound.get_ui()))));
  }
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const int top_shift = static_cast<int>(words * 64 - bits);
  std::vector<std::uint64_t> buffer(words);
  Int draw;
  while (true) {
    for (auto& w : buffer) w = next();
    buffer.back() >>= top_shift;
    mpz_import(draw.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buffer.data());
    if (draw < bound) return draw;
  }
}

std::size_t weighted_pick(const std::vector<Int>& weights, Rng& rng) {
  Int total(0);
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("weighted_pick: negative weight");
    total += w;
  }
  if (total == 0) throw std::invalid_argument("weighted_pick: total weight is zero");
  Int draw = rng.below(total);
  Int acc(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (draw < acc) return i;
  }
  return weights.size() - 1;  // unreachable
}

std::size_t weighted_pick(const std::vector<Rat>& weights, Rng& rng) {
  Int common(1);
  for (const auto& w : weights) {
    Int den = w.get_den();
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
  }
  std::vector<Int> scaled;
  scaled.reserve(weights.size());
  for (const auto& w : weights) {
    scaled.push_back(Int(w.get_num() * (common / w.get_den())));
  }
  return weighted_pick(scaled, rng);
}

}  // namespace peersel
