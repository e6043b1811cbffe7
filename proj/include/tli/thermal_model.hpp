#pragma once

#include "tli/fock_basis.hpp"
#include "tli/rng.hpp"

namespace tli {

// Physical parameters under estimation: epsilon is the mean photon number per
// temporal mode pair (epsilon/2 per mode) and g = g1 + i g2 is the complex
// degree of coherence, |g| <= 1. Construction validates both invariants.
struct CoherenceParams {
  CoherenceParams(double epsilon_in, Complex g_in);

  double epsilon;
  Complex g;

  double g1() const { return g.real(); }
  double g2() const { return g.imag(); }
};

// Classical field amplitudes of the two modes.
struct FieldSample {
  Complex alpha;
  Complex beta;
};

// Weak-light density operator on the truncated Fock basis. The |1,1> block is
// exactly zero: the dropped second-order term is not renormalized, which
// leaves the trace at exactly 1.
struct FockDensityOperator {
  Matrix4c matrix;
  bool order_eps2_dropped = true;
};

// [[eps/2, eps g/2], [eps g*/2, eps/2]]; Hermitian PSD with trace eps.
Matrix2c build_coherence_matrix(const CoherenceParams& params);

// Gaussian phase-space density at (alpha, beta): exp(-v^dag Gamma^-1 v) /
// (pi^2 det Gamma). Requires det Gamma > 0; singular Gamma (eps = 0 or
// |g| = 1) raises a domain error pointing at the degenerate sampling path.
double evaluate_p_function(const Matrix2c& gamma, const FieldSample& sample);

// Requires 0 <= eps <= 1 so the truncated operator stays PSD.
FockDensityOperator weak_density_operator(const CoherenceParams& params);

// Draws circularly symmetric complex Gaussian pairs with E[v v^dag] = Gamma.
// Rank-deficient Gamma is factorized through its nonzero eigenspace, so the
// second moments are exact even at |g| = 1 or eps = 0.
class GaussianFieldSampler {
 public:
  explicit GaussianFieldSampler(const Matrix2c& gamma);
  FieldSample draw(rng::Stream& stream) const;

 private:
  Matrix2c factor_;  // Gamma = factor factor^dag
};

FieldSample sample_fields(const Matrix2c& gamma, rng::Stream& stream);

// Gamma' = Gamma + I: covariance of the dual coherent-detection outcome law;
// the identity is the vacuum contribution of the detectors.
Matrix2c heterodyne_output_covariance(const Matrix2c& gamma);

}  // namespace tli
