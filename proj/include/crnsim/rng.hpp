#pragma once

#include <cstdint>

namespace crnsim {

// 64-bit finalizer used everywhere we need to turn structured integers
// (seeds, stream ids, grid coordinates) into well-mixed words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Combine two words into one (order sensitive).
constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
}

// Counter-based uniform stream.  A stream is fully identified by
// (seed, stream_id); advancing is a single add+mix, so any number of
// logically independent streams can be split off the same seed without
// coordination.  Draws are reproducible across platforms and runs.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : state_(mix64(seed + 0x9E3779B97F4A7C15ull) ^
               mix64(stream_id ^ 0xD1342543DE82EF95ull)) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform on the open interval (0,1): never returns 0.0 or 1.0, so
  // log transforms are always finite.  52 mantissa bits keep every value
  // exactly representable; the extremes are 2^-53 and 1 - 2^-53 (a 53-bit
  // mantissa would round the top value up to exactly 1.0).
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

 private:
  std::uint64_t state_;
};

// Purpose tags for the per-replication substreams of the network model.
// Each (class, purpose) pair owns an independent stream; service streams
// are split further per station kind so that two runs that differ only in
// scheduling discipline still hand every station-entry the same demand.
enum class StreamPurpose : std::uint64_t {
  Arrival = 1,
  EntryDrop = 2,
  ServiceSec = 3,
  ServiceAc = 4,
  ServiceCh = 5,
};

inline std::uint64_t make_stream_id(std::uint64_t replication, int job_class,
                                    StreamPurpose purpose) noexcept {
  std::uint64_t h = mix64(replication + 0x5851F42D4C957F2Dull);
  h = hash_combine(h, static_cast<std::uint64_t>(job_class) + 1);
  h = hash_combine(h, static_cast<std::uint64_t>(purpose));
  return h;
}

}  // namespace crnsim
