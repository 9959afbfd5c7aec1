#include "emolex/numerics/random.hpp"

#include <cmath>
#include <numbers>

#include "emolex/error.hpp"
#include "emolex/numerics/special.hpp"
#include "emolex/text.hpp"

namespace emolex::numerics {

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), key_(mix64(seed)) {}

Rng::Rng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

Rng Rng::substream(std::string_view label) const {
  return Rng(seed_, mix64(key_ ^ mix64(text::fnv1a(label))));
}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(seed_, mix64(key_ ^ mix64(index ^ 0x5851f42d4c957f2dULL)));
}

void Rng::refill() {
  block_ = philox4x32({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u},
                      {static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)});
  ++counter_;
  next_word_ = 0;
}

std::uint64_t Rng::next_u64() {
  if (next_word_ > 2) refill();
  const std::uint64_t hi = block_[next_word_];
  const std::uint64_t lo = block_[next_word_ + 1];
  next_word_ += 2;
  return (hi << 32) | lo;
}

double Rng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection of the biased low range.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t x = next_u64();
    const u128 m = static_cast<u128>(x) * n;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

double gamma_implicit_derivative(double shape, double value) {
  if (!(value > 0.0)) return 0.0;
  const double pdf = gamma_pdf(shape, value);
  if (!(pdf > 0.0)) return 0.0;
  return -gamma_p_shape_derivative(shape, value) / pdf;
}

GammaDraw sample_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("sample_gamma: shape must be positive");
  double boost = 1.0;
  double a = shape;
  if (shape < 1.0) {
    boost = std::pow(rng.uniform(), 1.0 / shape);
    a = shape + 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  double value = 0.0;
  while (true) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      value = d * v;
      break;
    }
  }
  value *= boost;
  return {value, gamma_implicit_derivative(shape, value)};
}

}  // namespace emolex::numerics
