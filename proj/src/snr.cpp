#include "tli/snr.hpp"

#include <cmath>
#include <stdexcept>

namespace tli {

namespace {

void check_domain(double epsilon, double g_sq) {
  if (!(epsilon >= 0.0))
    throw std::domain_error("snr: epsilon must be >= 0");
  if (!(g_sq <= 1.0 + 1e-12) || !(g_sq >= 0.0))
    throw std::domain_error("snr: |g| must be <= 1");
}

}  // namespace

HeterodyneMoments heterodyne_moments(double epsilon, Complex g) {
  check_domain(epsilon, std::norm(g));
  HeterodyneMoments m;
  const double half = 0.5 * epsilon;
  m.signal = half * half * std::norm(g);  // |<mu nu*>|^2 = |eps g / 2|^2
  m.noise = (1.0 + half) * (1.0 + half);
  m.fourth_moment = m.noise + m.signal;
  return m;
}

SnrReport heterodyne_snr(double epsilon, double g_abs) {
  check_domain(epsilon, g_abs * g_abs);
  const HeterodyneMoments m = heterodyne_moments(epsilon, Complex(g_abs, 0.0));
  SnrReport r;
  r.scheme = Scheme::heterodyne;
  r.protocol = "single-delta";
  r.signal = m.signal;
  r.noise = m.noise;
  r.ratio = r.signal > 0.0 ? r.signal / r.noise : 0.0;
  return r;
}

MomentReport direct_moments(double epsilon, Complex g, double delta) {
  check_domain(epsilon, std::norm(g));
  const Complex rotated = g * std::exp(Complex(0.0, -delta));
  MomentReport m;
  m.mean_n = 0.5 * epsilon * (1.0 + rotated.real());
  m.mean_m = 0.5 * epsilon * (1.0 - rotated.real());
  m.var_n = m.mean_n + m.mean_n * m.mean_n;
  m.var_m = m.mean_m + m.mean_m * m.mean_m;
  m.cov_nm = 0.25 * epsilon * epsilon * rotated.imag() * rotated.imag();
  return m;
}

SnrReport direct_snr_single(double epsilon, Complex g, double delta) {
  const MomentReport m = direct_moments(epsilon, g, delta);
  SnrReport r;
  r.scheme = Scheme::direct;
  r.protocol = "single-delta";
  const double diff = m.mean_n - m.mean_m;
  r.signal = diff * diff;
  r.noise = m.var_n + m.var_m - 2.0 * m.cov_nm;
  r.ratio = r.signal > 0.0 && r.noise > 0.0 ? r.signal / r.noise : 0.0;
  return r;
}

SnrReport direct_snr_avg(double epsilon, double g_abs) {
  check_domain(epsilon, g_abs * g_abs);
  SnrReport r;
  r.scheme = Scheme::direct;
  r.protocol = "two-delta averaged";
  r.signal = 0.5 * epsilon * epsilon * g_abs * g_abs;
  r.noise = epsilon + 0.5 * epsilon * epsilon;
  r.ratio = r.signal > 0.0 && r.noise > 0.0 ? r.signal / r.noise : 0.0;
  return r;
}

std::vector<RegimeRow> regime_compare(std::span<const double> epsilons,
                                      double g_abs) {
  std::vector<RegimeRow> rows;
  rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    RegimeRow row;
    row.epsilon = eps;
    row.direct = direct_snr_avg(eps, g_abs).ratio;
    row.heterodyne = heterodyne_snr(eps, g_abs).ratio;
    row.ratio = row.heterodyne > 0.0 ? row.direct / row.heterodyne : 1.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tli
