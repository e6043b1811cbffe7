#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace tli::rng {

// Deterministic stream of random draws. Streams are derived from a master
// seed and a stream index by counter-based splitting: equal (seed, index)
// pairs always reproduce the same sequence, so parallel consumers (trials,
// grid chunks) stay replayable without sharing state.
//
// All distribution transforms are implemented here rather than taken from
// <random>, because the standard specifies the mt19937_64 engine bit-exactly
// but not the distributions.
class Stream {
 public:
  explicit Stream(std::uint64_t master_seed, std::uint64_t stream_index = 0);

  double uniform01();                      // [0, 1)
  double normal();                         // N(0, 1)
  std::complex<double> circular_normal();  // circularly symmetric, E|z|^2 = 1
  long poisson(double mean);               // inversion below mean 10, rejection above

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  std::uint64_t master_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
};

}  // namespace tli::rng
