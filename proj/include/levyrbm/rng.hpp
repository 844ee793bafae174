// Counter-based random streams (Philox2x64-10).
//
// Every random draw in the engine is addressed by (seed, stream kind,
// member, step): the generator is a keyed bijection of a 128-bit counter,
// so substreams for distinct particles or time steps never overlap and the
// noise fed to a particle does not depend on how many draws any other
// particle consumed. This is what lets a full-interaction run and a
// random-batch run replay bit-identical Levy increments.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace levyrbm {

// SplitMix64 finalizer, used for key derivation only.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace detail {

// One block of Philox2x64, 10 rounds.
inline std::array<std::uint64_t, 2> philox2x64(std::array<std::uint64_t, 2> ctr,
                                               std::uint64_t key) {
  constexpr std::uint64_t kMul = 0xd2b74407b1ce6e93ull;
  constexpr std::uint64_t kWeyl = 0x9e3779b97f4a7c15ull;
  for (int round = 0; round < 10; ++round) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(kMul) * ctr[0];
    const auto hi = static_cast<std::uint64_t>(prod >> 64);
    const auto lo = static_cast<std::uint64_t>(prod);
    ctr = {hi ^ key ^ ctr[1], lo};
    key += kWeyl;
  }
  return ctr;
}

}  // namespace detail

// A single substream: fixed (key, lane), incrementing block counter.
// Cheap to construct; create one per (particle, step) cell and discard.
class Substream {
 public:
  Substream(std::uint64_t key, std::uint64_t lane) : key_(key), lane_(lane) {}

  std::uint64_t next_u64() {
    if (buf_pos_ > 1) {
      buf_ = detail::philox2x64({block_++, lane_}, key_);
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0,1); safe as log/tan argument.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal, Box-Muller (cosine branch, no cached state).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Exp(1), strictly positive.
  double exponential() { return -std::log(uniform_open()); }

  // Uniform integer in [0, k). Modulo bias is O(k / 2^64), far below any
  // statistical tolerance used here.
  std::uint64_t bounded(std::uint64_t k) { return next_u64() % k; }

 private:
  std::uint64_t key_;
  std::uint64_t lane_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buf_pos_ = 2;
};

// Disjoint stream kinds; each gets an unrelated Philox key for the same seed.
enum class StreamKind : std::uint64_t {
  noise = 1,         // per-(particle, fine step) Levy increments
  partition = 2,     // per-(batch window) shuffles
  initial = 3,       // initial positions
  initial_velocity = 4,
  scratch = 9,       // tests and ad-hoc sampling
};

// Factory for the substreams of one (seed, kind) family.
class StreamFamily {
 public:
  StreamFamily(std::uint64_t seed, StreamKind kind)
      : key_(mix64(mix64(seed) ^ (static_cast<std::uint64_t>(kind) * 0xa24baed4963ee407ull))) {}

  // member and step must each fit in 32 bits; they address the lane.
  Substream at(std::uint64_t member, std::uint64_t step = 0) const {
    return Substream(key_, (member << 32) | (step & 0xffffffffull));
  }

 private:
  std::uint64_t key_;
};

}  // namespace levyrbm
