#include "tli/thermal_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tli/matrix_checks.hpp"

namespace tli {

CoherenceParams::CoherenceParams(double epsilon_in, Complex g_in)
    : epsilon(epsilon_in), g(g_in) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::domain_error("CoherenceParams: epsilon must be finite and >= 0");
  if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) ||
      std::norm(g) > 1.0 + 1e-12)
    throw std::domain_error("CoherenceParams: |g| must be <= 1");
}

Matrix2c build_coherence_matrix(const CoherenceParams& p) {
  const double half = 0.5 * p.epsilon;
  Matrix2c gamma;
  gamma << Complex(half, 0.0), half * p.g,
           half * std::conj(p.g), Complex(half, 0.0);
  return gamma;
}

double evaluate_p_function(const Matrix2c& gamma, const FieldSample& s) {
  const double det = gamma.determinant().real();
  const double scale = 0.5 * gamma.trace().real();
  if (!(det > kPsdTol * scale * scale) || det <= 0.0)
    throw std::domain_error(
        "evaluate_p_function: Gamma is singular; use the degenerate sampling path");
  Eigen::Vector2cd v;
  v << s.alpha, s.beta;
  const Complex q = (v.adjoint() * gamma.inverse() * v)(0, 0);
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  return std::exp(-q.real()) / (pi2 * det);
}

FockDensityOperator weak_density_operator(const CoherenceParams& p) {
  if (p.epsilon > 1.0 + 1e-12)
    throw std::domain_error("weak_density_operator: requires epsilon <= 1");
  Matrix4c rho = Matrix4c::Zero();
  rho(kFock00, kFock00) = 1.0 - p.epsilon;
  rho(kFock01, kFock01) = 0.5 * p.epsilon;
  rho(kFock10, kFock10) = 0.5 * p.epsilon;
  rho(kFock01, kFock10) = 0.5 * p.epsilon * std::conj(p.g);  // <0,1|rho|1,0>
  rho(kFock10, kFock01) = 0.5 * p.epsilon * p.g;             // <1,0|rho|0,1>
  return {rho, true};
}

GaussianFieldSampler::GaussianFieldSampler(const Matrix2c& gamma) {
  if (!is_hermitian(gamma))
    throw std::domain_error("GaussianFieldSampler: Gamma must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(gamma);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw std::domain_error("GaussianFieldSampler: Gamma must be PSD");
  const Eigen::Vector2d lam = es.eigenvalues().cwiseMax(0.0);
  factor_ = es.eigenvectors() *
            lam.cwiseSqrt().cast<Complex>().asDiagonal().toDenseMatrix();
}

FieldSample GaussianFieldSampler::draw(rng::Stream& stream) const {
  Eigen::Vector2cd z;
  z << stream.circular_normal(), stream.circular_normal();
  const Eigen::Vector2cd v = factor_ * z;
  return {v(0), v(1)};
}

FieldSample sample_fields(const Matrix2c& gamma, rng::Stream& stream) {
  return GaussianFieldSampler(gamma).draw(stream);
}

Matrix2c heterodyne_output_covariance(const Matrix2c& gamma) {
  return gamma + Matrix2c::Identity();
}

}  // namespace tli
