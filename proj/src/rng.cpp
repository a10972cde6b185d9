#include "parisian/rng.hpp"

#include "parisian/simd.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace parisian {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

PhiloxEngine::PhiloxEngine(SeedSpec seed, Stream stream)
    : key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)},
      words_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(seed.replication_index),
             static_cast<std::uint32_t>(seed.replication_index >> 32)} {}

void PhiloxEngine::refill() {
  simd::active().philox(key_.data(), words_.data(), block_, kBlocks, buffer_.data());
  block_ += kBlocks;
  pos_ = 0;
}

double standard_normal(PhiloxEngine& eng) {
  boost::random::normal_distribution<double> dist;
  return dist(eng);
}

void fill_standard_normal(PhiloxEngine& eng, std::span<double> out) {
  boost::random::normal_distribution<double> dist;
  for (double& v : out) v = dist(eng);
}

double exponential(PhiloxEngine& eng, double rate) {
  boost::random::exponential_distribution<double> dist(rate);
  return dist(eng);
}

}  // namespace parisian
