#include "tli/fisher.hpp"

#include <cmath>
#include <limits>

#include "tli/matrix_checks.hpp"

namespace tli {

ProbabilityModel born_model(Scheme scheme, double delta, GridSpec grid) {
  switch (scheme) {
    case Scheme::direct:
      return born_model(direct_detection_povm(delta));
    case Scheme::entangled:
      return born_model(shared_entanglement_povm(delta));
    case Scheme::heterodyne:
      return born_model(heterodyne_kernel(grid));
    case Scheme::homodyne:
      return born_model(homodyne_kernel(delta, 0.0, grid));
  }
  throw std::logic_error("born_model: unknown scheme");
}

ProbabilityModel born_model(const DiscretePovm& povm) {
  return [povm](const CoherenceParams& p) {
    return born_distribution(weak_density_operator(p), povm);
  };
}

ProbabilityModel born_model(const ContinuousPovmKernel& kernel) {
  return [kernel](const CoherenceParams& p) {
    return born_distribution(weak_density_operator(p), kernel);
  };
}

FisherMatrix fisher_numeric(const ProbabilityModel& model,
                            const CoherenceParams& at, double step) {
  if (!(step > 0.0)) throw std::domain_error("fisher_numeric: step must be > 0");

  const OutcomeDistribution center = model(at);
  const std::size_t n = center.size();
  for (double p : center.density)
    if (p < -kFisherDerivFloor)
      throw std::domain_error("fisher_numeric: model produced a negative probability");

  const auto shifted = [&](double d1, double d2) {
    return model(CoherenceParams(at.epsilon, at.g + Complex(d1, d2)));
  };
  const auto central_difference = [&](bool along_g2) {
    const OutcomeDistribution plus = along_g2 ? shifted(0.0, step) : shifted(step, 0.0);
    const OutcomeDistribution minus =
        along_g2 ? shifted(0.0, -step) : shifted(-step, 0.0);
    if (plus.size() != n || minus.size() != n)
      throw std::logic_error("fisher_numeric: model support changed under shift");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
      d[i] = (plus.density[i] - minus.density[i]) / (2.0 * step);
    return d;
  };

  const std::vector<double> d1 = central_difference(false);
  const std::vector<double> d2 = central_difference(true);

  FisherMatrix f = FisherMatrix::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = center.density[i];
    if (p < kFisherProbFloor) {
      if (std::abs(d1[i]) < kFisherDerivFloor && std::abs(d2[i]) < kFisherDerivFloor)
        continue;
      throw singular_support_error(
          "fisher_numeric: vanishing outcome probability with non-vanishing "
          "derivative");
    }
    const double w = center.weight[i] / p;
    f(0, 0) += w * d1[i] * d1[i];
    f(0, 1) += w * d1[i] * d2[i];
    f(1, 1) += w * d2[i] * d2[i];
  }
  f(1, 0) = f(0, 1);
  return f;
}

namespace {

FisherMatrix phase_projector(double delta) {
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  FisherMatrix m;
  m << c * c, s * c, s * c, s * s;
  return m;
}

}  // namespace

FisherMatrix fisher_direct_analytic(double epsilon, Complex g, double delta) {
  CoherenceParams params(epsilon, g);  // validates domain
  const double r = params.g1() * std::cos(delta) + params.g2() * std::sin(delta);
  const double denom = 1.0 - r * r;
  if (denom <= 0.0)
    throw std::domain_error(
        "fisher_direct_analytic: diverges at |Re(g e^{-i delta})| = 1 "
        "(deterministic outcome)");
  return (epsilon / denom) * phase_projector(delta);
}

FisherMatrix fisher_shared_entanglement_analytic(double epsilon, Complex g,
                                                 double delta) {
  return 0.5 * fisher_direct_analytic(epsilon, g, delta);
}

FisherMatrix fisher_heterodyne_analytic(double epsilon) {
  if (!(epsilon >= 0.0))
    throw std::domain_error("fisher_heterodyne_analytic: epsilon must be >= 0");
  return 0.5 * epsilon * epsilon * FisherMatrix::Identity();
}

FisherMatrix fisher_homodyne_analytic(double epsilon, double delta) {
  if (!(epsilon >= 0.0))
    throw std::domain_error("fisher_homodyne_analytic: epsilon must be >= 0");
  return epsilon * epsilon * phase_projector(delta);
}

double trace_norm(const FisherMatrix& f) {
  Eigen::SelfAdjointEigenSolver<FisherMatrix> es(f);
  return es.eigenvalues().cwiseAbs().sum();
}

bool CramerRaoBound::axis_unbounded(int axis) const {
  return null_projector(axis, axis) > kPsdTol;
}

double CramerRaoBound::variance_bound(int axis) const {
  if (axis_unbounded(axis)) return std::numeric_limits<double>::infinity();
  return covariance(axis, axis);
}

CramerRaoBound cramer_rao(const FisherMatrix& f, double measurements) {
  if (!(measurements >= 1.0))
    throw std::domain_error("cramer_rao: requires at least one measurement");
  Eigen::SelfAdjointEigenSolver<FisherMatrix> es(f);
  const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  const double cutoff = 1e-12 * lmax;  // null directions are structural
  CramerRaoBound bound;
  for (int k = 0; k < 2; ++k) {
    const double lam = es.eigenvalues()(k);
    const Eigen::Vector2d v = es.eigenvectors().col(k);
    if (lam > cutoff && lam > 0.0)
      bound.covariance += v * v.transpose() / (measurements * lam);
    else
      bound.null_projector += v * v.transpose();
  }
  return bound;
}

double locc_bound(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::domain_error("locc_bound: requires 0 <= epsilon < 1");
  return epsilon * epsilon / (1.0 - epsilon);
}

namespace {

BoundReport finish_bound_report(double cap, double ratio_sum, bool applicable,
                                double fisher_norm) {
  BoundReport r;
  r.locc_bound_value = cap;
  r.povm_specific_bound = cap * ratio_sum;
  r.applicable = applicable;
  r.fisher_trace_norm = fisher_norm;
  if (applicable) {
    const double limit = std::min(r.locc_bound_value, r.povm_specific_bound);
    r.margin = limit - fisher_norm;
    r.satisfied = r.margin >= -1e-9 * std::max(limit, 1e-30);
  } else {
    r.margin = std::numeric_limits<double>::quiet_NaN();
    r.satisfied = true;  // the bound makes no claim about nonlocal schemes
  }
  return r;
}

}  // namespace

BoundReport locc_bound_from_povm(const ContinuousPovmKernel& kernel,
                                 double epsilon, Complex g) {
  const double cap = locc_bound(epsilon);
  double ratio_sum = 0.0;
  const std::size_t n = kernel.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    const KernelElements k = kernel.node_elements(i);
    if (k.e00_00 > 0.0)
      ratio_sum += kernel.node_weight(i) * std::norm(k.e01_10) / k.e00_00;
  }
  const bool applicable = worst_grid_ppt(kernel).satisfied;
  const double fisher_norm =
      trace_norm(fisher_numeric(born_model(kernel), CoherenceParams(epsilon, g)));
  return finish_bound_report(cap, ratio_sum, applicable, fisher_norm);
}

BoundReport locc_bound_from_povm(const DiscretePovm& povm, double epsilon,
                                 Complex g) {
  const double cap = locc_bound(epsilon);
  double ratio_sum = 0.0;
  bool applicable = true;
  for (const Matrix4c& e : povm.elements) {
    applicable = applicable && check_ppt_cauchy_schwarz(e).satisfied;
    const double lhs = std::norm(e(kFock10, kFock01));
    const double e00 = e(kFock00, kFock00).real();
    if (e00 > 0.0)
      ratio_sum += lhs / e00;
    else if (lhs > kPsdTol * kPsdTol)
      ratio_sum = std::numeric_limits<double>::infinity();
  }
  const double fisher_norm =
      trace_norm(fisher_numeric(born_model(povm), CoherenceParams(epsilon, g)));
  return finish_bound_report(cap, ratio_sum, applicable, fisher_norm);
}

double adaptive_fisher_bound(std::span<const FisherMatrix> per_step_max) {
  double total = 0.0;
  for (const FisherMatrix& f : per_step_max) {
    if (min_hermitian_eigenvalue(f) < -1e-10)
      throw std::domain_error("adaptive_fisher_bound: step matrix must be PSD");
    total += trace_norm(f);
  }
  return total;
}

}  // namespace tli
