#pragma once

// Counter-based random streams.
//
// Every random number used by the library is a pure function of
// (seed, stream, purpose, index), computed with Philox4x32-10. Matrix entries
// are therefore independent of fill order and thread count, and any
// (seed, stream) pair can be regenerated without replaying earlier draws.

#include <array>
#include <cstdint>

namespace optisketch {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key) noexcept;

/// Separates the draws of different consumers that share a (seed, stream).
enum class Purpose : std::uint32_t {
  DenseMatrix = 1,
  OpticalMatrix = 2,
  Anchor = 3,
  Pilot = 4,
  Synthetic = 5,
  Experiment = 6,
};

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  Purpose purpose = Purpose::Experiment;

  StreamKey with_stream(std::uint32_t s) const noexcept { return {seed, s, purpose}; }
  StreamKey with_purpose(Purpose p) const noexcept { return {seed, stream, p}; }
};

/// Random stream addressed by block index. Each block yields 128 random bits.
class CounterStream {
 public:
  explicit CounterStream(StreamKey key) noexcept;

  Philox4x32Counter block(std::uint64_t index) const noexcept;

  /// Uniform double in the open interval (0, 1); two per block.
  double uniform(std::uint64_t index) const noexcept;

  /// Standard normal draw; entries 2b and 2b+1 are the Box-Muller pair of block b.
  double normal(std::uint64_t index) const noexcept;

  /// Both normals of block `index` at once.
  std::array<double, 2> normal_pair(std::uint64_t index) const noexcept;

  /// Fair coin flip from one 32-bit word.
  bool bit(std::uint64_t index) const noexcept;

  const StreamKey& key() const noexcept { return key_; }

 private:
  StreamKey key_;
  Philox4x32Key philox_key_;
};

}  // namespace optisketch
