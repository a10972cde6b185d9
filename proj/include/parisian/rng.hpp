#pragma once

// Counter-based random numbers. A replication's draws are a pure function of
// (master_seed, replication_index, stream), so replications can be generated
// in any order on any number of workers.

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace parisian {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replication_index = 0;
};

// Independent draw families within one replication.
enum class Stream : std::uint32_t {
  Path = 0,      // process noise
  Window = 1,    // random Parisian window durations
  Tilt = 2,      // importance-sampling index for the Pickands estimators
  PathAlt = 3,   // second path of a pair, or test-only noise
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// UniformRandomBitGenerator over 64-bit words; counter layout is
// {block, stream, replication_lo, replication_hi}.
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  PhiloxEngine(SeedSpec seed, Stream stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == kBuffered) refill();
    return buffer_[pos_++];
  }

 private:
  static constexpr int kBlocks = 8;
  static constexpr int kBuffered = 2 * kBlocks;
  void refill();

  PhiloxKey key_;
  std::array<std::uint32_t, 3> words_;  // stream, replication_lo, replication_hi
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, kBuffered> buffer_{};
  int pos_ = kBuffered;
};

// Uniform on the open interval (0, 1) from the top 53 bits.
inline double uniform01(PhiloxEngine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal and exponential variates (ziggurat-based).
double standard_normal(PhiloxEngine& eng);
void fill_standard_normal(PhiloxEngine& eng, std::span<double> out);
double exponential(PhiloxEngine& eng, double rate);

}  // namespace parisian
