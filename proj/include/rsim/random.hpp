#pragma once

#include <cstdint>
#include <random>

namespace rsim {

/// One independent random stream. Wraps a 64-bit Mersenne twister and hands
/// out uniforms on the open interval (0, 1) so that inversion formulas never
/// see log(0).
class Stream {
 public:
  Stream() : Stream(0) {}
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53 random bits, shifted off zero by half an ulp.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to spread structured keys over the seed space.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the stream identified by (master, replication, class, purpose).
/// The derivation is stable across platforms: a chained SplitMix64 hash of
/// the four integers in that order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication,
                          std::uint64_t cls, std::uint64_t purpose);

}  // namespace rsim
