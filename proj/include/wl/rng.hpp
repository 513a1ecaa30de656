#pragma once

#include <cstdint>
#include <random>

namespace wl {

// SplitMix64 finalizer. Used both as a bit mixer for seed derivation and as
// the published replicate-seed rule (see replicate_seed below).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Replicate r draws its seed from the (r+1)-th output of a SplitMix64 stream
// seeded with master_seed. Ensembles are therefore reproducible and can be
// extended with new replicates without rerunning earlier ones.
inline std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t replicate_index) {
  return mix64(master_seed + replicate_index * 0x9E3779B97F4A7C15ULL);
}

// Seeded uniform stream. std::mt19937_64 is fully specified by the standard,
// and the u64 -> double mapping below is fixed, so trajectories are
// bit-for-bit reproducible across platforms for a given seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wl
