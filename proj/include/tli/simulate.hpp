#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tli/fisher.hpp"
#include "tli/povm.hpp"
#include "tli/rng.hpp"
#include "tli/thermal_model.hpp"

namespace tli {

// One sampled measurement run. Discrete schemes store an outcome index per
// shot (direct: 0=(0,0), 1=(1,0), 2=(0,1); entangled: y0..y4) together with
// the per-shot phase; heterodyne stores the complex outcome pair, homodyne
// the quadrature pair plus the per-shot phase. The (master_seed,
// stream_index) pair replays the record exactly.
struct MeasurementRecord {
  Scheme scheme = Scheme::direct;
  double epsilon = 0.0;
  std::optional<Complex> true_g;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  std::vector<double> delta;    // per shot; empty for heterodyne
  std::vector<int> outcome;     // discrete schemes
  std::vector<Complex> mu, nu;  // heterodyne
  std::vector<double> x, y;     // homodyne

  std::size_t size() const;
};

// {delta1, delta1 + pi/2} repeated; the default two-quadrature schedule.
std::vector<double> alternating_schedule(double delta1, std::size_t shots);

// Draws `shots` i.i.d. outcomes. Discrete schemes sample the weak-light
// outcome law at each shot's phase (requires epsilon <= 1); heterodyne and
// homodyne sample their exact Gaussian outcome laws, valid at any epsilon.
// The schedule is cycled through per shot and may be empty for heterodyne.
MeasurementRecord sample_record(const CoherenceParams& params, Scheme scheme,
                                std::span<const double> schedule,
                                std::size_t shots, rng::Stream& stream);

struct EstimationResult {
  Complex g_hat{0.0, 0.0};
  double loglik = 0.0;  // mean log-likelihood at g_hat
  bool converged = false;
  bool degenerate = false;  // flat likelihood (no informative shots)
};

// Maximum-likelihood estimate of g over the closed unit disk with epsilon
// known. Discrete schemes maximize the weak-light likelihood; heterodyne and
// homodyne maximize their exact Gaussian likelihoods (the same laws the
// sampler draws from). Deterministic: coarse 41x41 grid seed, then damped
// Newton to gradient norm < 1e-9, boundary handled by projection.
EstimationResult mle_estimate(const MeasurementRecord& record, double epsilon);

// Semiclassical photon-count sampler for beam-splitter detection: classical
// fields from Gamma, rotated into the output ports, then Poisson counts.
// Valid at any epsilon.
std::pair<long, long> semiclassical_direct_counts(const GaussianFieldSampler& fields,
                                                  double delta, rng::Stream& stream);
std::pair<long, long> semiclassical_direct_counts(const Matrix2c& gamma,
                                                  double delta, rng::Stream& stream);

// Moment statistics of a sampled quadratic estimator with standard errors.
struct SnrEstimate {
  double signal = 0.0, signal_se = 0.0;
  double noise = 0.0, noise_se = 0.0;
  double ratio = 0.0, ratio_se = 0.0;
};

// mu nu* estimator on dual coherent detection of the full thermal state.
SnrEstimate empirical_heterodyne_snr(const CoherenceParams& params,
                                     std::size_t shots, rng::Stream& stream);
// n - m estimator with the two-phase protocol (delta1 and delta1 + pi/2);
// signal and noise are averaged over the two phases before taking the ratio.
SnrEstimate empirical_direct_snr(const CoherenceParams& params, double delta1,
                                 std::size_t shots_per_delta, rng::Stream& stream);

// mu nu* / n - m estimator evaluated on a stored record (heterodyne or
// direct; direct records group shots by phase and average over the groups).
SnrEstimate empirical_snr(const MeasurementRecord& record);

// Independent-trial ensemble: trial t consumes stream index t of the master
// seed, so any trial can be replayed in isolation.
struct EnsembleSummary {
  std::size_t trials = 0;
  std::vector<EstimationResult> results;
  std::vector<std::uint64_t> trial_streams;
  Complex mean_g{0.0, 0.0};
  Eigen::Matrix2d empirical_cov = Eigen::Matrix2d::Zero();  // unbiased
  std::size_t converged_count = 0;
  std::size_t degenerate_count = 0;
};

EnsembleSummary run_trials(const CoherenceParams& params, Scheme scheme,
                           std::span<const double> schedule, std::size_t shots,
                           std::size_t trials, std::uint64_t master_seed);

// Per-shot information matrix averaged over the schedule, for Cramer-Rao
// comparisons of mixed-phase records. Heterodyne uses the leading-order
// (eps^2/2) I matrix.
FisherMatrix schedule_average_fisher(const CoherenceParams& params, Scheme scheme,
                                     std::span<const double> schedule,
                                     std::size_t shots);

}  // namespace tli
