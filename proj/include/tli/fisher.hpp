#pragma once

#include <functional>
#include <span>
#include <stdexcept>

#include "tli/povm.hpp"
#include "tli/thermal_model.hpp"

namespace tli {

// 2x2 symmetric PSD information matrix over the parameters (g1, g2),
// per measurement.
using FisherMatrix = Eigen::Matrix2d;

// Raised when an outcome has vanishing probability but a non-vanishing
// derivative: the information sum genuinely diverges there.
struct singular_support_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Central-difference step on g1, g2; truncation error O(h^2) sits below the
// quadrature error at double precision.
inline constexpr double kFisherFdStep = 1e-5;
// Outcomes below this probability are dropped when both derivatives are
// below kFisherDerivFloor, and diagnosed otherwise.
inline constexpr double kFisherProbFloor = 1e-15;
inline constexpr double kFisherDerivFloor = 1e-12;

using ProbabilityModel = std::function<OutcomeDistribution(const CoherenceParams&)>;

// Outcome model of a scheme under the weak-light state: delta is the
// beam-splitter / local-oscillator phase (ignored by heterodyne), grid the
// quadrature spec for continuous schemes.
ProbabilityModel born_model(Scheme scheme, double delta = 0.0, GridSpec grid = {});
ProbabilityModel born_model(const DiscretePovm& povm);
ProbabilityModel born_model(const ContinuousPovmKernel& kernel);

// Assembles the information matrix from central differences of the outcome
// law: F = sum_y w_y grad P(y) grad P(y)^T / P(y).
FisherMatrix fisher_numeric(const ProbabilityModel& model,
                            const CoherenceParams& at,
                            double step = kFisherFdStep);

// eps / (1 - Re(g e^{-i delta})^2) times the rank-one cos/sin projector;
// eigenvalues {0, eps / (1 - Re(g e^{-i delta})^2)}.
FisherMatrix fisher_direct_analytic(double epsilon, Complex g, double delta);
// Exactly half of direct detection.
FisherMatrix fisher_shared_entanglement_analytic(double epsilon, Complex g,
                                                 double delta);
// Leading order (eps^2/2) I; valid for eps << 1.
FisherMatrix fisher_heterodyne_analytic(double epsilon);
// Leading order eps^2 times the cos/sin projector at delta = delta_a - delta_b.
FisherMatrix fisher_homodyne_analytic(double epsilon, double delta);

// Sum of eigenvalue magnitudes; equals the trace for PSD matrices.
double trace_norm(const FisherMatrix& f);

// Covariance lower bound for M measurements: pseudo-inverse of M F with the
// zero-information subspace reported explicitly (structural null directions,
// not numerical noise).
struct CramerRaoBound {
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();      // pseudo-inverse of M F
  Eigen::Matrix2d null_projector = Eigen::Matrix2d::Zero();  // unobservable directions

  bool axis_unbounded(int axis) const;
  double variance_bound(int axis) const;  // +inf along unbounded axes
};

CramerRaoBound cramer_rao(const FisherMatrix& f, double measurements);

// eps^2 / (1 - eps): the information ceiling for any single local (LOCC)
// measurement on the weak-light state. Requires 0 <= eps < 1.
double locc_bound(double epsilon);

struct BoundReport {
  double fisher_trace_norm = 0.0;    // measured ||F|| for the scheme
  double locc_bound_value = 0.0;     // eps^2 / (1 - eps)
  double povm_specific_bound = 0.0;  // eps^2/(1-eps) sum_y |E10,01|^2 / E00,00
  bool applicable = true;            // pointwise separability certificate held
  bool satisfied = true;
  double margin = 0.0;
};

// Evaluates the scheme-specific information bound and compares the measured
// trace norm against it. Non-separable schemes (the certificate fails) are
// reported as not applicable.
BoundReport locc_bound_from_povm(const ContinuousPovmKernel& kernel,
                                 double epsilon, Complex g = {0.0, 0.0});
BoundReport locc_bound_from_povm(const DiscretePovm& povm, double epsilon,
                                 Complex g = {0.0, 0.0});

// Upper bound on the total information of an adaptive sequence: the sum of
// per-step trace norms, each already maximized over measurement histories.
double adaptive_fisher_bound(std::span<const FisherMatrix> per_step_max);

}  // namespace tli
