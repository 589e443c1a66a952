#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sublevel_ph {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Random stream addressed by (seed, stream). The seed is the Philox key; the
/// stream id fills the upper half of the counter and the lower half counts
/// blocks, so streams never overlap and need no jump-ahead.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform() noexcept;
  /// Standard normal by Box-Muller.
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stream id for (replication, tag) pairs used by the experiment harness.
constexpr std::uint64_t stream_id(std::uint64_t replication, std::uint64_t tag) noexcept {
  return (replication << 20) ^ tag;
}

}  // namespace sublevel_ph
