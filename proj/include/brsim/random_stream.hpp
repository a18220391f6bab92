#pragma once

#include <array>
#include <cstdint>

namespace brsim {

/// Philox4x32-10 block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Identifies one independent random stream.
///
/// The simulator keys the Poisson V sequence on stream 0 and cluster i on
/// stream i; `replication` separates independent runs that share a seed.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint32_t replication = 0;
};

/// Counter-based generator: output is a pure function of (key, position), so
/// any stream can be produced on any thread in any order.
class RandomStream {
public:
  explicit RandomStream(StreamKey key);
  RandomStream(std::uint64_t seed, std::uint64_t stream,
               std::uint32_t replication = 0)
      : RandomStream(StreamKey{seed, stream, replication}) {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1) with 53 bits of resolution.
  double uniform();

  /// Standard normal by inverse-CDF transform of uniform().
  double normal();

  /// Standard exponential, -log(U).
  double exponential();

  const StreamKey &key() const { return key_; }

private:
  void refill();

  StreamKey key_;
  PhiloxKey philox_key_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  unsigned used_ = 4;
};

} // namespace brsim
