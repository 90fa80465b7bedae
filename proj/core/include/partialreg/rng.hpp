#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace partialreg {

/// xoshiro256** seeded through splitmix64. The algorithm is fixed so a seed
/// names the same stream on every platform.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);
  /// Starts from a raw state; must not be all zero.
  static Xoshiro256 from_state(const std::array<std::uint64_t, 4>& state);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on (0, 1]: the top 53 bits plus one ulp, so log() is safe.
  double uniform_open_closed();

 private:
  Xoshiro256() = default;

  std::array<std::uint64_t, 4> state_{};
};

/// Standard normal draws by Box-Muller. Each pair of uniforms yields two
/// variates; the cosine branch is returned first.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  Xoshiro256 engine_;
  std::optional<double> spare_;
};

}  // namespace partialreg
