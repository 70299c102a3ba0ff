#pragma once

#include <cstdint>
#include <random>

namespace phi3 {

/// splitmix64 finalizer; used to derive well-separated generator seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// (master seed, stream id) pair. Streams are derived by hashing, never by
/// sharing a generator, so any worker can reconstruct its stream alone.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  std::uint64_t derived() const noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL));
  }

  /// Sub-stream i of this stream (e.g. per-sample or per-chain).
  SeedSpec child(std::uint64_t i) const noexcept { return {derived(), i}; }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// mt19937_64 plus a Box-Muller normal generator that does not depend on the
/// standard library's distribution implementation, so sample sequences are
/// reproducible across toolchains.
class Rng {
 public:
  explicit Rng(const SeedSpec& seed) : engine_(seed.derived()) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal();

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace phi3
