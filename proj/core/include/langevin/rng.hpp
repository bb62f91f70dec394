#pragma once

// Counter-based RNG (Philox4x32-10) with explicit stream splitting.
// A (seed, stream) pair fully determines the output sequence, so replica
// streams can be consumed in any order, on any number of threads, and
// still reproduce bit-identical results.

#include <array>
#include <cmath>
#include <cstdint>

namespace langevin {

class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint64_t next_u64() {
    if (buf_pos_ == 2) refill();
    return buf_[buf_pos_++];
  }

  // Uniform in (0,1]; never returns 0, so log() is always safe.
  double uniform() {
    const std::uint64_t r = next_u64() >> 11;  // 53 bits
    return (static_cast<double>(r) + 1.0) * 0x1p-53;
  }

  // Uniform in [0,1).
  double uniform_co() {
    const std::uint64_t r = next_u64() >> 11;
    return static_cast<double>(r) * 0x1p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform_co();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t stream() const { return stream_; }

 private:
  static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b, std::uint32_t* lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    *lo = static_cast<std::uint32_t>(p);
    return static_cast<std::uint32_t>(p >> 32);
  }

  void refill() {
    // Philox4x32-10: counter = (counter_lo, counter_hi, stream_lo, stream_hi).
    std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
    std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      std::uint32_t lo0, lo1;
      const std::uint32_t hi0 = mulhi(0xD2511F53u, c0, &lo0);
      const std::uint32_t hi1 = mulhi(0xCD9E8D57u, c2, &lo1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = (static_cast<std::uint64_t>(c1) << 32) | c0;
    buf_[1] = (static_cast<std::uint64_t>(c3) << 32) | c2;
    buf_pos_ = 0;
    ++counter_;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buf_pos_ = 2;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream id for replica r of a run seeded with `seed`.
inline Philox replica_rng(std::uint64_t seed, std::uint64_t replica) {
  return Philox(seed, replica);
}

}  // namespace langevin
