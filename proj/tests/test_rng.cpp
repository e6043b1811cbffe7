#include <cmath>
#include <vector>

#include <doctest.h>

#include "tli/rng.hpp"

using tli::rng::Stream;

TEST_CASE("streams replay exactly for equal (seed, index)") {
  Stream a(12345, 7);
  Stream b(12345, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform01() == b.uniform01());
  for (int i = 0; i < 50; ++i) CHECK(a.normal() == b.normal());
  for (int i = 0; i < 50; ++i) CHECK(a.poisson(3.7) == b.poisson(3.7));
  for (int i = 0; i < 50; ++i) CHECK(a.circular_normal() == b.circular_normal());
}

TEST_CASE("different stream indices decorrelate") {
  Stream a(12345, 0);
  Stream b(12345, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    if (a.uniform01() == b.uniform01()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Stream s(99, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal moments") {
  Stream s(2024, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("circular_normal has unit second moment and no mean") {
  Stream s(77, 3);
  const int n = 200000;
  std::complex<double> mean{0.0, 0.0};
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = s.circular_normal();
    mean += z;
    power += std::norm(z);
  }
  mean /= double(n);
  power /= double(n);
  CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(power - 1.0) < 5.0 * std::sqrt(1.0 / double(n)));
}

TEST_CASE("poisson moments across the inversion/rejection split") {
  Stream s(4242, 1);
  for (double lambda : {0.5, 3.0, 9.9, 10.1, 25.0, 100.0}) {
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = double(s.poisson(lambda));
      sum += k;
      sum2 += k * k;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double se_mean = std::sqrt(lambda / n);
    CHECK(std::abs(mean - lambda) < 5.0 * se_mean);
    // Poisson variance of the variance estimate ~ (2 lambda^2 + lambda)/n
    const double se_var = std::sqrt((2.0 * lambda * lambda + lambda) / n);
    CHECK(std::abs(var - lambda) < 5.0 * se_var);
  }
}

TEST_CASE("poisson edge cases") {
  Stream s(5, 0);
  CHECK(s.poisson(0.0) == 0);
  CHECK_THROWS_AS(s.poisson(-1.0), std::domain_error);
}
