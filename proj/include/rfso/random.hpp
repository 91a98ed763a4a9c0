#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rfso {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based stream keyed by (seed, stream index). Two streams with the
/// same key produce the same sequence regardless of which thread owns them.
/// Satisfies UniformRandomBitGenerator, so std distributions accept it.
class PhiloxStream {
 public:
  using result_type = std::uint32_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  /// Uniform double in (0, 1) with 53 random bits.
  double uniform();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  unsigned pos_ = 4;
};

}  // namespace rfso
