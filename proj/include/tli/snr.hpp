#pragma once

#include <span>
#include <string>
#include <vector>

#include "tli/fock_basis.hpp"
#include "tli/povm.hpp"

namespace tli {

// Photon-count moments of beam-splitter detection on the full thermal state;
// valid at any epsilon.
struct MomentReport {
  double mean_n = 0.0;
  double mean_m = 0.0;
  double var_n = 0.0;
  double var_m = 0.0;
  double cov_nm = 0.0;
};

// Closed-form fourth-moment data of the dual coherent-detection statistic
// mu nu*: signal |<mu nu*>|^2, noise <|mu nu*|^2> - signal.
struct HeterodyneMoments {
  double signal = 0.0;
  double noise = 0.0;
  double fourth_moment = 0.0;  // <|mu nu*|^2>
};

struct SnrReport {
  double signal = 0.0;
  double noise = 0.0;
  double ratio = 0.0;
  Scheme scheme = Scheme::direct;
  std::string protocol;  // "single-delta" or "two-delta averaged"
};

HeterodyneMoments heterodyne_moments(double epsilon, Complex g);

// S/N = eps^2 |g|^2 / (2 + eps)^2; tends to eps^2 |g|^2 / 4 for weak light
// and saturates at |g|^2 for strong light.
SnrReport heterodyne_snr(double epsilon, double g_abs);

// mean n = (eps/2)(1 + Re(g e^{-i delta})), variances mean + mean^2,
// covariance (eps^2/4) Im(g e^{-i delta})^2.
MomentReport direct_moments(double epsilon, Complex g, double delta);

// Single-phase SNR of the difference count n - m.
SnrReport direct_snr_single(double epsilon, Complex g, double delta);

// Two-phase protocol (delta and delta + pi/2) averaged per measurement:
// S = eps^2 |g|^2 / 2, N = eps + eps^2 / 2, S/N = eps |g|^2 / (2 + eps).
SnrReport direct_snr_avg(double epsilon, double g_abs);

struct RegimeRow {
  double epsilon = 0.0;
  double direct = 0.0;
  double heterodyne = 0.0;
  double ratio = 0.0;  // direct / heterodyne; 1 where both vanish
};

// Tabulates both closed forms over an epsilon grid: the ratio behaves as
// (2 + eps)/eps, i.e. ~2/eps for weak light and ->1 for strong light.
std::vector<RegimeRow> regime_compare(std::span<const double> epsilons,
                                      double g_abs);

}  // namespace tli
