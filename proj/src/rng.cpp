#include "tli/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tli::rng {

namespace {

// SplitMix64 step; decorrelates (seed, index) pairs before seeding the engine.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Stream::Stream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_(master_seed), index_(stream_index) {
  std::uint64_t state = master_seed;
  std::uint64_t a = splitmix64(state);
  state ^= 0x9e3779b97f4a7c15ull * (stream_index + 1);
  std::uint64_t b = splitmix64(state);
  std::uint64_t c = splitmix64(state);
  std::seed_seq seq{
      static_cast<std::uint32_t>(a),       static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b),       static_cast<std::uint32_t>(b >> 32),
      static_cast<std::uint32_t>(c),       static_cast<std::uint32_t>(c >> 32),
  };
  engine_.seed(seq);
}

double Stream::uniform01() {
  // 53 mantissa bits from the top of one engine word.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  // Box-Muller using two fresh uniforms per call; no cached spare, so the
  // draw count per call is fixed and streams stay alignment-independent.
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Stream::circular_normal() {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-std::log(u1));  // |z|^2 ~ Exp(1) gives E|z|^2 = 1
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

long Stream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::domain_error("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // inversion by sequential search through the pmf
    const double u = uniform01();
    double p = std::exp(-mean);
    double cdf = p;
    long k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  // rejection with a Lorentzian envelope
  const double sq = std::sqrt(2.0 * mean);
  const double loglam = std::log(mean);
  const double gfn = mean * loglam - std::lgamma(mean + 1.0);
  while (true) {
    double y;
    double em;
    do {
      y = std::tan(std::numbers::pi * uniform01());
      em = sq * y + mean;
    } while (em < 0.0);
    em = std::floor(em);
    const double t =
        0.9 * (1.0 + y * y) * std::exp(em * loglam - std::lgamma(em + 1.0) - gfn);
    if (uniform01() <= t) return static_cast<long>(em);
  }
}

}  // namespace tli::rng
