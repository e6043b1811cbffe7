#include <cmath>
#include <numbers>

#include <doctest.h>

#include "tli/matrix_checks.hpp"
#include "tli/povm.hpp"
#include "tli/rng.hpp"

using namespace tli;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

FockDensityOperator basis_projector(FockIndex which) {
  FockDensityOperator rho;
  rho.matrix = Matrix4c::Zero();
  rho.matrix(which, which) = 1.0;
  return rho;
}

}  // namespace

TEST_CASE("beam-splitter POVM interference element") {
  const DiscretePovm povm0 = direct_detection_povm(0.0);
  CHECK(std::abs(povm0.elements[1](kFock10, kFock01) - Complex(0.5, 0.0)) < 1e-15);

  const DiscretePovm povm90 = direct_detection_povm(0.5 * kPi);
  // <1,0|E(1,0)|0,1> = e^{i delta}/2 and its transpose partner is conjugate
  CHECK(std::abs(povm90.elements[1](kFock10, kFock01) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(povm90.elements[1](kFock01, kFock10) - Complex(0.0, -0.5)) < 1e-15);
}

TEST_CASE("beam-splitter POVM completeness and ranks") {
  rng::Stream s(21, 0);
  for (int i = 0; i < 20; ++i) {
    const double delta = 2.0 * kPi * s.uniform01();
    const DiscretePovm povm = direct_detection_povm(delta);
    CHECK_NOTHROW(validate_povm(povm));
    for (int e : {1, 2}) {
      Eigen::SelfAdjointEigenSolver<Matrix4c> es(povm.elements[e]);
      int rank = 0;
      for (int k = 0; k < kFockDim; ++k)
        if (es.eigenvalues()(k) > 1e-12) ++rank;
      CHECK(rank == 1);
    }
  }
}

TEST_CASE("shared-entanglement POVM halves the interference elements") {
  rng::Stream s(22, 0);
  for (int i = 0; i < 20; ++i) {
    const double delta = 2.0 * kPi * s.uniform01();
    const DiscretePovm shared = shared_entanglement_povm(delta);
    const DiscretePovm direct = direct_detection_povm(delta);
    CHECK_NOTHROW(validate_povm(shared));
    CHECK(max_abs_diff(shared.elements[3], (0.5 * direct.elements[1]).eval()) < 1e-15);
    CHECK(max_abs_diff(shared.elements[4], (0.5 * direct.elements[2]).eval()) < 1e-15);
  }
}

TEST_CASE("shared-entanglement outcome probabilities") {
  const FockDensityOperator rho = weak_density_operator(CoherenceParams(0.1, {0.6, 0.0}));
  const OutcomeDistribution dist =
      born_distribution(rho, shared_entanglement_povm(0.0));
  CHECK(dist.density[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(dist.density[1] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(dist.density[2] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(dist.density[3] == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(dist.density[4] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("shared-entanglement probabilities are half of direct detection") {
  rng::Stream s(23, 0);
  for (int i = 0; i < 50; ++i) {
    const double eps = s.uniform01();
    const double r = 0.99 * std::sqrt(s.uniform01());
    const double phi = 2.0 * kPi * s.uniform01();
    const double delta = 2.0 * kPi * s.uniform01();
    const CoherenceParams p(eps, r * std::exp(Complex(0.0, phi)));
    const FockDensityOperator rho = weak_density_operator(p);
    const OutcomeDistribution d = born_distribution(rho, direct_detection_povm(delta));
    const OutcomeDistribution e =
        born_distribution(rho, shared_entanglement_povm(delta));
    CHECK(std::abs(e.density[3] - 0.5 * d.density[1]) < 1e-15);
    CHECK(std::abs(e.density[4] - 0.5 * d.density[2]) < 1e-15);
  }
}

TEST_CASE("direct-detection probabilities match the closed forms") {
  rng::Stream s(24, 0);
  for (int i = 0; i < 100; ++i) {
    const double eps = s.uniform01();
    const double r = std::sqrt(s.uniform01());
    const double phi = 2.0 * kPi * s.uniform01();
    const double delta = 2.0 * kPi * s.uniform01();
    const Complex g = r * std::exp(Complex(0.0, phi));
    const FockDensityOperator rho = weak_density_operator(CoherenceParams(eps, g));
    const OutcomeDistribution dist =
        born_distribution(rho, direct_detection_povm(delta));
    const double re = (g * std::exp(Complex(0.0, -delta))).real();
    CHECK(std::abs(dist.density[0] - (1.0 - eps)) < 1e-14);
    CHECK(std::abs(dist.density[1] - 0.5 * eps * (1.0 + re)) < 1e-14);
    CHECK(std::abs(dist.density[2] - 0.5 * eps * (1.0 - re)) < 1e-14);
  }
}

TEST_CASE("direct detection at the spec point") {
  const FockDensityOperator rho = weak_density_operator(CoherenceParams(0.1, {0.6, 0.0}));
  const OutcomeDistribution dist = born_distribution(rho, direct_detection_povm(0.0));
  CHECK(dist.density[0] == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(dist.density[1] == doctest::Approx(0.08).epsilon(1e-14));
  CHECK(dist.density[2] == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("vacuum is deterministic under direct detection") {
  const FockDensityOperator rho = weak_density_operator(CoherenceParams(0.0, {0.2, 0.1}));
  const OutcomeDistribution dist = born_distribution(rho, direct_detection_povm(0.7));
  CHECK(dist.density[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dist.density[1] == 0.0);
  CHECK(dist.density[2] == 0.0);
}

TEST_CASE("coherent-state kernel values") {
  const KernelElements origin = heterodyne_matrix_elements({0, 0}, {0, 0});
  CHECK(origin.e00_00 == doctest::Approx(1.0 / kPi2).epsilon(1e-14));
  CHECK(std::abs(origin.e01_10) == 0.0);

  const KernelElements one = heterodyne_matrix_elements({1, 0}, {1, 0});
  CHECK(one.e10_10 == doctest::Approx(std::exp(-2.0) / kPi2).epsilon(1e-14));
}

TEST_CASE("coherent-state kernel saturates the separability inequality") {
  rng::Stream s(25, 0);
  for (int i = 0; i < 200; ++i) {
    const Complex mu = 3.0 * (s.uniform01() - 0.5) + Complex(0, 3.0) * (s.uniform01() - 0.5);
    const Complex nu = 3.0 * (s.uniform01() - 0.5) + Complex(0, 3.0) * (s.uniform01() - 0.5);
    const KernelElements k = heterodyne_matrix_elements(mu, nu);
    CHECK(std::abs(std::norm(k.e01_10) - k.e00_00 * k.e11_11) <=
          1e-15 * std::max(1.0, k.e00_00 * k.e11_11));
  }
}

TEST_CASE("quadrature kernel values") {
  const KernelElements o = homodyne_matrix_elements(0.0, 0.0, 0.3, 0.1);
  CHECK(o.e00_00 == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(o.e01_01 == 0.0);
  CHECK(o.e10_10 == 0.0);
  CHECK(std::abs(o.e01_10) == 0.0);

  const KernelElements k = homodyne_matrix_elements(1.0, 1.0, 0.0, 0.0);
  // <1,0|E|0,1> = (2/pi) e^{-2} at delta = 0
  CHECK(std::abs(std::conj(k.e01_10) - Complex(2.0 / kPi * std::exp(-2.0), 0.0)) <
        1e-14);
}

TEST_CASE("quadrature kernel phase enters as the phase difference") {
  const KernelElements a = homodyne_matrix_elements(0.7, -0.4, 1.1, 0.4);
  const KernelElements b = homodyne_matrix_elements(0.7, -0.4, 0.7, 0.0);
  CHECK(std::abs(a.e01_10 - b.e01_10) < 1e-15);
}

TEST_CASE("continuous kernels integrate to one on their grids") {
  // a basis projector turns the grid density into a single matrix element
  for (FockIndex which : {kFock00, kFock01, kFock10}) {
    const OutcomeDistribution het =
        born_distribution(basis_projector(which), heterodyne_kernel());
    CHECK(het.total_mass() == doctest::Approx(1.0).epsilon(1e-7));
    const OutcomeDistribution hom =
        born_distribution(basis_projector(which), homodyne_kernel(0.4, 0.1));
    CHECK(hom.total_mass() == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("remaining kernel integrals: e11 normalizes, coherence averages out") {
  const ContinuousPovmKernel kernel = heterodyne_kernel();
  const std::size_t n = kernel.node_count();
  double e11 = 0.0;
  Complex cross{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const KernelElements k = kernel.node_elements(i);
    const double w = kernel.node_weight(i);
    e11 += w * k.e11_11;
    cross += w * k.e01_10;
  }
  CHECK(e11 == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(cross) < 1e-10);
}

TEST_CASE("grid mass stays normalized for weak-light states") {
  const FockDensityOperator rho = weak_density_operator(CoherenceParams(0.1, {0.6, 0.0}));
  CHECK(born_distribution(rho, heterodyne_kernel()).total_mass() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(born_distribution(rho, homodyne_kernel(0.0, 0.0)).total_mass() ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("separability certificate fails for the interference elements") {
  const DiscretePovm povm = direct_detection_povm(0.3);
  for (int e : {1, 2}) {
    const PptReport r = check_ppt_cauchy_schwarz(povm.elements[e]);
    CHECK(r.lhs == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.rhs == 0.0);
    CHECK(r.slack == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK_FALSE(r.satisfied);
  }
  // the vacuum element is harmless
  CHECK(check_ppt_cauchy_schwarz(povm.elements[0]).satisfied);
  CHECK(check_ppt_cauchy_schwarz(Matrix4c::Zero().eval()).satisfied);
}

TEST_CASE("separability certificate holds on every grid node") {
  CHECK(worst_grid_ppt(heterodyne_kernel()).slack >= -kPsdTol);
  CHECK(worst_grid_ppt(homodyne_kernel(0.2, 0.9)).slack >= -kPsdTol);
}

TEST_CASE("semiclassical outcome likelihoods") {
  const FieldSample f{Complex(0.4, -0.2), Complex(-0.1, 0.3)};
  // coherent detection peaks at the sampled fields
  CHECK(husimi_heterodyne(f.alpha, f.beta, f) ==
        doctest::Approx(1.0 / kPi2).epsilon(1e-14));

  const double delta = 0.6;
  const Complex ph = std::exp(Complex(0.0, delta));
  const Complex u = (f.alpha + ph * f.beta) / std::sqrt(2.0);
  const Complex v = (f.alpha - ph * f.beta) / std::sqrt(2.0);
  CHECK(husimi_direct(0, 0, f, delta) ==
        doctest::Approx(std::exp(-std::norm(u) - std::norm(v))).epsilon(1e-13));

  double total = 0.0;
  for (int n = 0; n < 40; ++n)
    for (int m = 0; m < 40; ++m) total += husimi_direct(n, m, f, delta);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("broken POVMs are rejected") {
  DiscretePovm povm = direct_detection_povm(0.0);
  povm.elements[1](kFock10, kFock10) += 0.5;  // break completeness
  CHECK_THROWS_AS(validate_povm(povm), povm_consistency_error);

  const FockDensityOperator rho = weak_density_operator(CoherenceParams(0.1, {0.0, 0.0}));
  CHECK_THROWS_AS(born_distribution(rho, povm), povm_consistency_error);
}
