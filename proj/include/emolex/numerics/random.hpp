#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace emolex::numerics {

// Counter-based generator (Philox4x32-10). The stream is a pure function of
// (key, counter), so a seed reproduces it exactly and `substream(label)`
// derives statistically independent streams by name.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  Rng substream(std::string_view label) const;
  Rng substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  Rng(std::uint64_t seed, std::uint64_t key);
  void refill();

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  unsigned next_word_ = 4;
};

struct GammaDraw {
  double value;
  // Pathwise derivative d(value)/d(shape) at fixed CDF level.
  double dshape;
};

// dz/da for z ~ Gamma(a, 1) by implicit differentiation of the CDF:
// -(∂P/∂a)(a, z) / p(z; a).
double gamma_implicit_derivative(double shape, double value);

// Marsaglia-Tsang for shape >= 1, boosted through Gamma(shape + 1) below 1.
GammaDraw sample_gamma(double shape, Rng& rng);

}  // namespace emolex::numerics
