#include "tli/povm.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tli/matrix_checks.hpp"

namespace tli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kTwoPi = 2.0 * kPi;

// Discrete probabilities must renormalize to 1e-9; grid quadrature carries
// the trapezoid truncation error instead.
constexpr double kDiscreteMassTol = 1e-9;
constexpr double kGridMassTol = 1e-6;

void trapezoid_axis(double lo, double hi, int points, std::vector<double>& node,
                    std::vector<double>& weight) {
  if (points < 2) throw std::domain_error("GridSpec: at least 2 points per axis");
  node.resize(points);
  weight.resize(points);
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    node[i] = lo + h * i;
    weight[i] = (i == 0 || i == points - 1) ? 0.5 * h : h;
  }
}

// Trapezoid on a radial half-axis converges only O(h^2): the measure
// r exp(-r^2) has a nonzero slope at r = 0. Gauss-Legendre at the same point
// count reaches quadrature error far below 1e-12 for these integrands.
void gauss_legendre_axis(double lo, double hi, int points,
                         std::vector<double>& node, std::vector<double>& weight) {
  if (points < 2) throw std::domain_error("GridSpec: at least 2 points per axis");
  node.resize(points);
  weight.resize(points);
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-based initial guess
    double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const double mid = 0.5 * (hi + lo);
    const double span = 0.5 * (hi - lo);
    node[i] = mid - span * x;
    node[points - 1 - i] = mid + span * x;
    weight[i] = span * w;
    weight[points - 1 - i] = span * w;
  }
}

double poisson_pmf(int k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::direct: return "direct";
    case Scheme::entangled: return "entangled";
    case Scheme::heterodyne: return "heterodyne";
    case Scheme::homodyne: return "homodyne";
  }
  throw std::logic_error("scheme_name: unknown scheme");
}

Scheme scheme_from_name(std::string_view name) {
  if (name == "direct") return Scheme::direct;
  if (name == "entangled") return Scheme::entangled;
  if (name == "heterodyne") return Scheme::heterodyne;
  if (name == "homodyne") return Scheme::homodyne;
  throw std::domain_error("unknown scheme: " + std::string(name));
}

DiscretePovm direct_detection_povm(double delta) {
  const Complex phase = std::exp(Complex(0.0, -delta));  // e^{-i delta} on the ket
  Vector4c plus = Vector4c::Zero();
  Vector4c minus = Vector4c::Zero();
  plus(kFock10) = 1.0;
  plus(kFock01) = phase;
  minus(kFock10) = 1.0;
  minus(kFock01) = -phase;

  DiscretePovm povm;
  povm.labels = {"00", "10", "01"};
  povm.elements.assign(3, Matrix4c::Zero());
  povm.elements[0](kFock00, kFock00) = 1.0;
  povm.elements[1] = 0.5 * (plus * plus.adjoint());
  povm.elements[2] = 0.5 * (minus * minus.adjoint());
  povm.subspace_dim = 3;
  return povm;
}

DiscretePovm shared_entanglement_povm(double delta) {
  const DiscretePovm direct = direct_detection_povm(delta);
  DiscretePovm povm;
  povm.labels = {"y0", "y1", "y2", "y3", "y4"};
  povm.elements.assign(5, Matrix4c::Zero());
  povm.elements[0](kFock00, kFock00) = 1.0;
  povm.elements[1](kFock01, kFock01) = 0.5;
  povm.elements[2](kFock10, kFock10) = 0.5;
  povm.elements[3] = 0.5 * direct.elements[1];
  povm.elements[4] = 0.5 * direct.elements[2];
  povm.subspace_dim = 3;
  return povm;
}

void validate_povm(const DiscretePovm& povm) {
  if (povm.labels.size() != povm.elements.size())
    throw povm_consistency_error("POVM labels and elements disagree in size");
  Matrix4c sum = Matrix4c::Zero();
  for (const Matrix4c& e : povm.elements) {
    if (!is_hermitian(e))
      throw povm_consistency_error("POVM element is not Hermitian");
    if (min_hermitian_eigenvalue(e) < -kPsdTol)
      throw povm_consistency_error("POVM element is not PSD");
    sum += e;
  }
  Matrix4c expected = Matrix4c::Zero();
  for (int i = 0; i < povm.subspace_dim; ++i) expected(i, i) = 1.0;
  if (max_abs_diff(sum, expected) > kPsdTol)
    throw povm_consistency_error("POVM is not complete on its subspace");
}

KernelElements heterodyne_matrix_elements(Complex mu, Complex nu) {
  const double amu = std::norm(mu);
  const double anu = std::norm(nu);
  const double w = std::exp(-amu - anu) / kPi2;
  KernelElements k;
  k.e00_00 = w;
  k.e01_01 = w * anu;
  k.e10_10 = w * amu;
  k.e11_11 = w * amu * anu;
  k.e01_10 = w * std::conj(mu) * nu;
  return k;
}

KernelElements homodyne_matrix_elements(double x, double y, double delta_a,
                                        double delta_b) {
  const double gauss = std::exp(-x * x - y * y);
  KernelElements k;
  k.e00_00 = gauss / kPi;
  k.e01_01 = 2.0 / kPi * gauss * y * y;
  k.e10_10 = 2.0 / kPi * gauss * x * x;
  k.e11_11 = 4.0 / kPi * gauss * x * x * y * y;
  // <1,0|E|0,1> = (2/pi) e^{i(delta_a - delta_b)} e^{-x^2-y^2} x y.
  k.e01_10 = 2.0 / kPi * gauss * x * y *
             std::exp(Complex(0.0, -(delta_a - delta_b)));
  return k;
}

std::size_t ContinuousPovmKernel::node_count() const {
  if (scheme == Scheme::heterodyne)
    return ax1_node.size() * ax2_node.size() * ax3_node.size();
  return ax1_node.size() * ax2_node.size();
}

KernelElements ContinuousPovmKernel::node_elements(std::size_t index) const {
  if (scheme == Scheme::heterodyne) {
    const std::size_t n3 = ax3_node.size();
    const std::size_t n2 = ax2_node.size();
    const std::size_t k = index % n3;
    const std::size_t j = (index / n3) % n2;
    const std::size_t i = index / (n3 * n2);
    // representative outcome with mu real: arg(mu* nu) is the only phase that
    // matters
    const Complex mu(ax1_node[i], 0.0);
    const Complex nu = ax2_node[j] * std::exp(Complex(0.0, ax3_node[k]));
    return heterodyne_matrix_elements(mu, nu);
  }
  const std::size_t n2 = ax2_node.size();
  const std::size_t j = index % n2;
  const std::size_t i = index / n2;
  return homodyne_matrix_elements(ax1_node[i], ax2_node[j], delta_a, delta_b);
}

double ContinuousPovmKernel::node_weight(std::size_t index) const {
  if (scheme == Scheme::heterodyne) {
    const std::size_t n3 = ax3_node.size();
    const std::size_t n2 = ax2_node.size();
    const std::size_t k = index % n3;
    const std::size_t j = (index / n3) % n2;
    const std::size_t i = index / (n3 * n2);
    // d^2mu d^2nu = 2 pi r1 r2 dr1 dr2 dtheta after integrating the overall
    // phase out
    return kTwoPi * ax1_node[i] * ax2_node[j] * ax1_weight[i] * ax2_weight[j] *
           ax3_weight[k];
  }
  const std::size_t n2 = ax2_node.size();
  const std::size_t j = index % n2;
  const std::size_t i = index / n2;
  return ax1_weight[i] * ax2_weight[j];
}

ContinuousPovmKernel heterodyne_kernel(GridSpec grid) {
  ContinuousPovmKernel k;
  k.scheme = Scheme::heterodyne;
  k.grid = grid;
  gauss_legendre_axis(0.0, grid.extent, grid.points, k.ax1_node, k.ax1_weight);
  gauss_legendre_axis(0.0, grid.extent, grid.points, k.ax2_node, k.ax2_weight);
  // the relative-phase axis is periodic, where the trapezoid rule is exact
  trapezoid_axis(0.0, kTwoPi, grid.points, k.ax3_node, k.ax3_weight);
  return k;
}

ContinuousPovmKernel homodyne_kernel(double delta_a, double delta_b, GridSpec grid) {
  ContinuousPovmKernel k;
  k.scheme = Scheme::homodyne;
  k.delta_a = delta_a;
  k.delta_b = delta_b;
  k.grid = grid;
  trapezoid_axis(-grid.extent, grid.extent, grid.points, k.ax1_node, k.ax1_weight);
  trapezoid_axis(-grid.extent, grid.extent, grid.points, k.ax2_node, k.ax2_weight);
  return k;
}

double OutcomeDistribution::total_mass() const {
  double mass = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) mass += weight[i] * density[i];
  return mass;
}

OutcomeDistribution born_distribution(const FockDensityOperator& rho,
                                      const DiscretePovm& povm) {
  OutcomeDistribution dist;
  dist.labels = povm.labels;
  dist.weight.assign(povm.elements.size(), 1.0);
  dist.density.reserve(povm.elements.size());
  for (const Matrix4c& e : povm.elements) {
    const Complex tr = (e * rho.matrix).trace();
    if (std::abs(tr.imag()) > kDiscreteMassTol)
      throw povm_consistency_error("born_distribution: complex probability");
    double p = tr.real();
    if (p < -kDiscreteMassTol)
      throw povm_consistency_error("born_distribution: negative probability");
    dist.density.push_back(std::max(p, 0.0));
  }
  if (std::abs(dist.total_mass() - 1.0) > kDiscreteMassTol)
    throw povm_consistency_error("born_distribution: probabilities do not sum to 1");
  return dist;
}

OutcomeDistribution born_distribution(const FockDensityOperator& rho,
                                      const ContinuousPovmKernel& kernel) {
  // P(y) = p00 E00,00 + pb E01,01 + pa E10,10 + 2 Re(coh E01,10) where
  // coh = <1,0|rho|0,1>. The |1,1> block of rho is zero by construction.
  const double p00 = rho.matrix(kFock00, kFock00).real();
  const double pb = rho.matrix(kFock01, kFock01).real();
  const double pa = rho.matrix(kFock10, kFock10).real();
  const Complex coh = rho.matrix(kFock10, kFock01);

  OutcomeDistribution dist;
  dist.weight.resize(kernel.node_count());
  dist.density.resize(kernel.node_count());

  if (kernel.scheme == Scheme::heterodyne) {
    const std::size_t n1 = kernel.ax1_node.size();
    const std::size_t n2 = kernel.ax2_node.size();
    const std::size_t n3 = kernel.ax3_node.size();
    std::vector<double> gauss1(n1), gauss2(n2), ct(n3), st(n3);
    for (std::size_t i = 0; i < n1; ++i)
      gauss1[i] = std::exp(-kernel.ax1_node[i] * kernel.ax1_node[i]);
    for (std::size_t j = 0; j < n2; ++j)
      gauss2[j] = std::exp(-kernel.ax2_node[j] * kernel.ax2_node[j]);
    for (std::size_t k = 0; k < n3; ++k) {
      ct[k] = std::cos(kernel.ax3_node[k]);
      st[k] = std::sin(kernel.ax3_node[k]);
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n1; ++i) {
      const double r1 = kernel.ax1_node[i];
      for (std::size_t j = 0; j < n2; ++j) {
        const double r2 = kernel.ax2_node[j];
        const double amp = gauss1[i] * gauss2[j] / kPi2;
        const double rr = r1 * r2;
        // mu* nu = r1 r2 e^{i theta}; coh couples through 2 Re(coh mu* nu)
        const double base = p00 + pb * r2 * r2 + pa * r1 * r1;
        const double c_re = 2.0 * coh.real() * rr;
        const double c_im = 2.0 * coh.imag() * rr;
        const double wjk = kTwoPi * rr * kernel.ax1_weight[i] * kernel.ax2_weight[j];
        for (std::size_t k = 0; k < n3; ++k, ++idx) {
          dist.density[idx] = amp * (base + c_re * ct[k] - c_im * st[k]);
          dist.weight[idx] = wjk * kernel.ax3_weight[k];
        }
      }
    }
  } else if (kernel.scheme == Scheme::homodyne) {
    const std::size_t n1 = kernel.ax1_node.size();
    const std::size_t n2 = kernel.ax2_node.size();
    std::vector<double> gauss1(n1), gauss2(n2);
    for (std::size_t i = 0; i < n1; ++i)
      gauss1[i] = std::exp(-kernel.ax1_node[i] * kernel.ax1_node[i]);
    for (std::size_t j = 0; j < n2; ++j)
      gauss2[j] = std::exp(-kernel.ax2_node[j] * kernel.ax2_node[j]);
    const Complex rot = std::exp(Complex(0.0, -(kernel.delta_a - kernel.delta_b)));
    const double cr = 2.0 * (coh * rot).real() * 2.0 / kPi;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n1; ++i) {
      const double x = kernel.ax1_node[i];
      for (std::size_t j = 0; j < n2; ++j, ++idx) {
        const double y = kernel.ax2_node[j];
        const double gauss = gauss1[i] * gauss2[j];
        dist.density[idx] =
            gauss * (p00 / kPi + 2.0 / kPi * (pb * y * y + pa * x * x) +
                     cr * x * y);
        dist.weight[idx] = kernel.ax1_weight[i] * kernel.ax2_weight[j];
      }
    }
  } else {
    throw std::logic_error("born_distribution: kernel scheme must be continuous");
  }

  double min_density = 0.0;
  for (double p : dist.density) min_density = std::min(min_density, p);
  if (min_density < -kGridMassTol)
    throw povm_consistency_error("born_distribution: negative density on grid");
  if (std::abs(dist.total_mass() - 1.0) > kGridMassTol)
    throw povm_consistency_error("born_distribution: grid mass deviates from 1");
  return dist;
}

PptReport check_ppt_cauchy_schwarz(const Matrix4c& element) {
  PptReport r;
  r.lhs = std::norm(element(kFock10, kFock01));
  r.rhs = element(kFock00, kFock00).real() * element(kFock11, kFock11).real();
  r.slack = r.rhs - r.lhs;
  r.satisfied = r.slack >= -kPsdTol;
  return r;
}

PptReport check_ppt_cauchy_schwarz(const KernelElements& elements) {
  PptReport r;
  r.lhs = std::norm(elements.e01_10);
  r.rhs = elements.e00_00 * elements.e11_11;
  r.slack = r.rhs - r.lhs;
  r.satisfied = r.slack >= -kPsdTol;
  return r;
}

PptReport worst_grid_ppt(const ContinuousPovmKernel& kernel) {
  PptReport worst;
  worst.slack = std::numeric_limits<double>::infinity();
  const std::size_t n = kernel.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    const PptReport r = check_ppt_cauchy_schwarz(kernel.node_elements(i));
    if (r.slack < worst.slack) worst = r;
  }
  worst.satisfied = worst.slack >= -kPsdTol;
  return worst;
}

double husimi_heterodyne(Complex mu, Complex nu, const FieldSample& fields) {
  return std::exp(-std::norm(mu - fields.alpha) - std::norm(nu - fields.beta)) /
         kPi2;
}

double husimi_direct(int n, int m, const FieldSample& fields, double delta) {
  // beam-splitter output fields u = (alpha + e^{i delta} beta)/sqrt(2),
  // v = (alpha - e^{i delta} beta)/sqrt(2)
  const Complex ph = std::exp(Complex(0.0, delta));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex u = (fields.alpha + ph * fields.beta) * inv_sqrt2;
  const Complex v = (fields.alpha - ph * fields.beta) * inv_sqrt2;
  return poisson_pmf(n, std::norm(u)) * poisson_pmf(m, std::norm(v));
}

}  // namespace tli
