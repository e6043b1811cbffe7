#include "tli/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace tli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDiskRadius = 1.0 - 1e-9;   // MLE search stays inside |g| <= this
constexpr double kGradTol = 1e-9;            // on the mean log-likelihood
constexpr int kCoarseGridPoints = 41;

bool needs_schedule(Scheme scheme) { return scheme != Scheme::heterodyne; }

struct DeltaGroupCounts {
  std::vector<long> counts;
};

// outcome counts per distinct phase value
std::map<double, DeltaGroupCounts> group_counts(const MeasurementRecord& record,
                                                std::size_t outcomes) {
  std::map<double, DeltaGroupCounts> groups;
  for (std::size_t i = 0; i < record.outcome.size(); ++i) {
    auto& g = groups[record.delta[i]];
    if (g.counts.empty()) g.counts.assign(outcomes, 0);
    g.counts[record.outcome[i]] += 1;
  }
  return groups;
}

// Mean log-likelihood with gradient; the objective handed to the optimizer.
using Objective = std::function<double(const Eigen::Vector2d&, Eigen::Vector2d*)>;

Eigen::Vector2d project_to_disk(Eigen::Vector2d g) {
  const double r = g.norm();
  if (r > kDiskRadius) g *= kDiskRadius / r;
  return g;
}

EstimationResult maximize_over_disk(const Objective& objective) {
  // coarse grid seed over the disk
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCoarseGridPoints; ++i) {
    for (int j = 0; j < kCoarseGridPoints; ++j) {
      Eigen::Vector2d g(-1.0 + 2.0 * i / (kCoarseGridPoints - 1),
                        -1.0 + 2.0 * j / (kCoarseGridPoints - 1));
      g = project_to_disk(g);
      const double val = objective(g, nullptr);
      if (val > best_val) {
        best_val = val;
        best = g;
      }
    }
  }

  // damped Newton refinement with a numerically differentiated Hessian
  Eigen::Vector2d g = best;
  Eigen::Vector2d grad;
  double val = objective(g, &grad);
  bool converged = false;
  constexpr double kHessStep = 1e-6;
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::Vector2d projected = grad;
    if (g.norm() >= kDiskRadius - 1e-12) {
      const Eigen::Vector2d outward = g.normalized();
      const double radial = grad.dot(outward);
      if (radial > 0.0) projected -= radial * outward;
    }
    if (projected.lpNorm<Eigen::Infinity>() < kGradTol) {
      converged = true;
      break;
    }

    Eigen::Matrix2d hess;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d gp, gm;
      Eigen::Vector2d step = Eigen::Vector2d::Zero();
      step(k) = kHessStep;
      objective(g + step, &gp);
      objective(g - step, &gm);
      hess.col(k) = (gp - gm) / (2.0 * kHessStep);
    }
    hess = 0.5 * (hess + hess.transpose()).eval();

    Eigen::Vector2d direction;
    bool use_newton = std::abs(hess.determinant()) > 1e-300;
    if (use_newton) {
      direction = -hess.inverse() * grad;
      if (direction.dot(grad) <= 0.0) use_newton = false;  // not an ascent direction
    }
    if (!use_newton) direction = grad;

    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      const Eigen::Vector2d cand = project_to_disk(g + t * direction);
      Eigen::Vector2d cand_grad;
      const double cand_val = objective(cand, &cand_grad);
      if (cand_val > val) {
        g = cand;
        val = cand_val;
        grad = cand_grad;
        improved = true;
        break;
      }
    }
    if (!improved) {
      converged = projected.lpNorm<Eigen::Infinity>() < 1e-6;
      break;
    }
  }

  EstimationResult result;
  result.g_hat = Complex(g(0), g(1));
  result.loglik = val;
  result.converged = converged;
  result.degenerate = false;
  return result;
}

EstimationResult degenerate_result(double loglik) {
  EstimationResult r;
  r.g_hat = Complex(0.0, 0.0);
  r.loglik = loglik;
  r.converged = false;
  r.degenerate = true;
  return r;
}

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double var = 0.0;  // unbiased
  double m4c = 0.0;  // central fourth moment (biased-n normalization)
};

SampleMoments compute_moments(const std::vector<double>& v) {
  SampleMoments m;
  m.n = v.size();
  if (m.n == 0) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(m.n);
  double s2 = 0.0, s4 = 0.0;
  for (double x : v) {
    const double d = x - m.mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  m.var = m.n > 1 ? s2 / static_cast<double>(m.n - 1) : 0.0;
  m.m4c = s4 / static_cast<double>(m.n);
  return m;
}

// signal = mean^2 (bias corrected), noise = variance of the sampled statistic
void difference_count_stats(const std::vector<double>& d, double& signal,
                            double& signal_se, double& noise, double& noise_se) {
  const SampleMoments m = compute_moments(d);
  const double n = static_cast<double>(m.n);
  const double mean_var = m.var / n;
  signal = m.mean * m.mean - mean_var;
  signal_se = std::sqrt(4.0 * m.mean * m.mean * mean_var +
                        2.0 * mean_var * mean_var);
  noise = m.var;
  noise_se = std::sqrt(std::max(m.m4c - m.var * m.var, 0.0) / n);
}

void finish_ratio(SnrEstimate& e) {
  if (e.noise <= 0.0) {
    e.ratio = 0.0;
    e.ratio_se = 0.0;
    return;
  }
  e.ratio = e.signal / e.noise;
  e.ratio_se = std::sqrt(std::pow(e.signal_se / e.noise, 2) +
                         std::pow(e.signal * e.noise_se / (e.noise * e.noise), 2));
}

}  // namespace

std::size_t MeasurementRecord::size() const {
  switch (scheme) {
    case Scheme::direct:
    case Scheme::entangled:
      return outcome.size();
    case Scheme::heterodyne:
      return mu.size();
    case Scheme::homodyne:
      return x.size();
  }
  return 0;
}

std::vector<double> alternating_schedule(double delta1, std::size_t shots) {
  std::vector<double> schedule(std::max<std::size_t>(shots, 2));
  for (std::size_t i = 0; i < schedule.size(); ++i)
    schedule[i] = (i % 2 == 0) ? delta1 : delta1 + 0.5 * kPi;
  return schedule;
}

MeasurementRecord sample_record(const CoherenceParams& params, Scheme scheme,
                                std::span<const double> schedule,
                                std::size_t shots, rng::Stream& stream) {
  if (needs_schedule(scheme) && schedule.empty() && shots > 0)
    throw std::domain_error("sample_record: this scheme needs a phase schedule");

  MeasurementRecord rec;
  rec.scheme = scheme;
  rec.epsilon = params.epsilon;
  rec.true_g = params.g;
  rec.master_seed = stream.master_seed();
  rec.stream_index = stream.stream_index();

  const auto delta_at = [&](std::size_t i) { return schedule[i % schedule.size()]; };

  switch (scheme) {
    case Scheme::direct:
    case Scheme::entangled: {
      if (params.epsilon > 1.0)
        throw std::domain_error(
            "sample_record: weak-light outcome law needs epsilon <= 1");
      rec.delta.reserve(shots);
      rec.outcome.reserve(shots);
      // cumulative outcome thresholds per distinct phase
      std::map<double, std::vector<double>> cumulative;
      for (std::size_t i = 0; i < shots; ++i) {
        const double delta = delta_at(i);
        auto it = cumulative.find(delta);
        if (it == cumulative.end()) {
          const DiscretePovm povm = scheme == Scheme::direct
                                        ? direct_detection_povm(delta)
                                        : shared_entanglement_povm(delta);
          const OutcomeDistribution dist =
              born_distribution(weak_density_operator(params), povm);
          std::vector<double> cum(dist.density.size());
          double acc = 0.0;
          for (std::size_t k = 0; k < dist.density.size(); ++k) {
            acc += dist.density[k];
            cum[k] = acc;
          }
          it = cumulative.emplace(delta, std::move(cum)).first;
        }
        const std::vector<double>& cum = it->second;
        const double u = stream.uniform01();
        int outcome = 0;
        while (outcome + 1 < static_cast<int>(cum.size()) && u >= cum[outcome])
          ++outcome;
        rec.delta.push_back(delta);
        rec.outcome.push_back(outcome);
      }
      break;
    }
    case Scheme::heterodyne: {
      const GaussianFieldSampler fields(build_coherence_matrix(params));
      rec.mu.reserve(shots);
      rec.nu.reserve(shots);
      for (std::size_t i = 0; i < shots; ++i) {
        const FieldSample f = fields.draw(stream);
        rec.mu.push_back(f.alpha + stream.circular_normal());
        rec.nu.push_back(f.beta + stream.circular_normal());
      }
      break;
    }
    case Scheme::homodyne: {
      const GaussianFieldSampler fields(build_coherence_matrix(params));
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      rec.delta.reserve(shots);
      rec.x.reserve(shots);
      rec.y.reserve(shots);
      for (std::size_t i = 0; i < shots; ++i) {
        const double delta = delta_at(i);
        const FieldSample f = fields.draw(stream);
        const Complex rotated = f.alpha * std::exp(Complex(0.0, -delta));
        rec.delta.push_back(delta);
        rec.x.push_back(std::sqrt(2.0) * rotated.real() +
                        stream.normal() * inv_sqrt2);
        rec.y.push_back(std::sqrt(2.0) * f.beta.real() +
                        stream.normal() * inv_sqrt2);
      }
      break;
    }
  }
  return rec;
}

EstimationResult mle_estimate(const MeasurementRecord& record, double epsilon) {
  if (!(epsilon >= 0.0))
    throw std::domain_error("mle_estimate: epsilon must be >= 0");
  const std::size_t shots = record.size();
  if (shots == 0) return degenerate_result(0.0);

  const double m = static_cast<double>(shots);

  switch (record.scheme) {
    case Scheme::direct:
    case Scheme::entangled: {
      const bool direct = record.scheme == Scheme::direct;
      const std::size_t outcomes = direct ? 3 : 5;
      const auto groups = group_counts(record, outcomes);
      // only the interference outcomes carry coherence information
      const int plus = direct ? 1 : 3;
      const int minus = direct ? 2 : 4;
      long informative = 0;
      for (const auto& [delta, g] : groups)
        informative += g.counts[plus] + g.counts[minus];
      const double base_prob = direct ? 0.5 * epsilon : 0.25 * epsilon;

      Objective objective = [&, groups](const Eigen::Vector2d& g,
                                        Eigen::Vector2d* grad) {
        double ll = 0.0;
        Eigen::Vector2d gr = Eigen::Vector2d::Zero();
        for (const auto& [delta, counts] : groups) {
          const double c = std::cos(delta), s = std::sin(delta);
          const double r = g(0) * c + g(1) * s;
          const long np = counts.counts[plus];
          const long nm = counts.counts[minus];
          const long n0 = counts.counts[0];
          if (n0 > 0) ll += n0 * std::log(1.0 - epsilon);
          if (!direct) {
            if (counts.counts[1] > 0) ll += counts.counts[1] * std::log(0.25 * epsilon);
            if (counts.counts[2] > 0) ll += counts.counts[2] * std::log(0.25 * epsilon);
          }
          if (np > 0) ll += np * std::log(base_prob * (1.0 + r));
          if (nm > 0) ll += nm * std::log(base_prob * (1.0 - r));
          const double pull = np / (1.0 + r) - nm / (1.0 - r);
          gr(0) += pull * c;
          gr(1) += pull * s;
        }
        if (grad) *grad = gr / m;
        return ll / m;
      };
      if (epsilon == 0.0 || informative == 0) {
        const double ll = objective(Eigen::Vector2d::Zero(), nullptr);
        return degenerate_result(ll);
      }
      return maximize_over_disk(objective);
    }

    case Scheme::heterodyne: {
      // exact Gaussian outcome law: sufficient statistics are
      // mean(|mu|^2 + |nu|^2) and mean(mu* nu)
      double sabs = 0.0;
      Complex cross{0.0, 0.0};
      for (std::size_t i = 0; i < shots; ++i) {
        sabs += std::norm(record.mu[i]) + std::norm(record.nu[i]);
        cross += std::conj(record.mu[i]) * record.nu[i];
      }
      sabs /= m;
      cross /= m;
      const double c = 1.0 + 0.5 * epsilon;
      const double c2 = c * c;
      const double q = 0.25 * epsilon * epsilon;
      constexpr double pi2 = kPi * kPi;

      Objective objective = [=](const Eigen::Vector2d& g, Eigen::Vector2d* grad) {
        const double det = c2 - q * g.squaredNorm();
        const double coupling =
            epsilon * (g(0) * cross.real() - g(1) * cross.imag());
        const double quad = c * sabs - coupling;
        const double ll = -std::log(pi2 * det) - quad / det;
        if (grad) {
          const Eigen::Vector2d ddet(-2.0 * q * g(0), -2.0 * q * g(1));
          const Eigen::Vector2d dquad(-epsilon * cross.real(),
                                      epsilon * cross.imag());
          *grad = -ddet / det - dquad / det + quad * ddet / (det * det);
        }
        return ll;
      };
      if (epsilon == 0.0)
        return degenerate_result(objective(Eigen::Vector2d::Zero(), nullptr));
      return maximize_over_disk(objective);
    }

    case Scheme::homodyne: {
      struct QuadStats {
        double n = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      };
      std::map<double, QuadStats> groups;
      for (std::size_t i = 0; i < shots; ++i) {
        QuadStats& g = groups[record.delta[i]];
        g.n += 1.0;
        g.sxx += record.x[i] * record.x[i];
        g.syy += record.y[i] * record.y[i];
        g.sxy += record.x[i] * record.y[i];
      }
      const double v = 0.5 * (1.0 + epsilon);

      Objective objective = [=, &groups](const Eigen::Vector2d& g,
                                         Eigen::Vector2d* grad) {
        double ll = 0.0;
        Eigen::Vector2d gr = Eigen::Vector2d::Zero();
        for (const auto& [delta, st] : groups) {
          const double cd = std::cos(delta), sd = std::sin(delta);
          const double c = 0.5 * epsilon * (g(0) * cd + g(1) * sd);
          const double det = v * v - c * c;
          const double trace_term = v * (st.sxx + st.syy) - 2.0 * c * st.sxy;
          ll += -st.n * std::log(2.0 * kPi) - 0.5 * st.n * std::log(det) -
                0.5 * trace_term / det;
          const double dldc = st.n * c / det + st.sxy / det -
                              c * trace_term / (det * det);
          gr(0) += dldc * 0.5 * epsilon * cd;
          gr(1) += dldc * 0.5 * epsilon * sd;
        }
        if (grad) *grad = gr / m;
        return ll / m;
      };
      if (epsilon == 0.0)
        return degenerate_result(objective(Eigen::Vector2d::Zero(), nullptr));
      return maximize_over_disk(objective);
    }
  }
  throw std::logic_error("mle_estimate: unknown scheme");
}

std::pair<long, long> semiclassical_direct_counts(const GaussianFieldSampler& fields,
                                                  double delta,
                                                  rng::Stream& stream) {
  const FieldSample f = fields.draw(stream);
  const Complex ph = std::exp(Complex(0.0, delta));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex u = (f.alpha + ph * f.beta) * inv_sqrt2;
  const Complex v = (f.alpha - ph * f.beta) * inv_sqrt2;
  return {stream.poisson(std::norm(u)), stream.poisson(std::norm(v))};
}

std::pair<long, long> semiclassical_direct_counts(const Matrix2c& gamma,
                                                  double delta,
                                                  rng::Stream& stream) {
  return semiclassical_direct_counts(GaussianFieldSampler(gamma), delta, stream);
}

SnrEstimate empirical_heterodyne_snr(const CoherenceParams& params,
                                     std::size_t shots, rng::Stream& stream) {
  MeasurementRecord rec =
      sample_record(params, Scheme::heterodyne, {}, shots, stream);
  return empirical_snr(rec);
}

SnrEstimate empirical_direct_snr(const CoherenceParams& params, double delta1,
                                 std::size_t shots_per_delta,
                                 rng::Stream& stream) {
  const GaussianFieldSampler fields(build_coherence_matrix(params));
  SnrEstimate est;
  double sig_var = 0.0, noi_var = 0.0;
  for (double delta : {delta1, delta1 + 0.5 * kPi}) {
    std::vector<double> diff(shots_per_delta);
    for (std::size_t i = 0; i < shots_per_delta; ++i) {
      const auto [n, m] = semiclassical_direct_counts(fields, delta, stream);
      diff[i] = static_cast<double>(n - m);
    }
    double s, s_se, n, n_se;
    difference_count_stats(diff, s, s_se, n, n_se);
    est.signal += 0.5 * s;
    est.noise += 0.5 * n;
    sig_var += 0.25 * s_se * s_se;
    noi_var += 0.25 * n_se * n_se;
  }
  est.signal_se = std::sqrt(sig_var);
  est.noise_se = std::sqrt(noi_var);
  finish_ratio(est);
  return est;
}

SnrEstimate empirical_snr(const MeasurementRecord& record) {
  if (record.scheme == Scheme::heterodyne) {
    const std::size_t n = record.mu.size();
    if (n < 2) throw std::domain_error("empirical_snr: need at least 2 shots");
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i)
      z[i] = record.mu[i] * std::conj(record.nu[i]);
    Complex mean{0.0, 0.0};
    for (const Complex& zi : z) mean += zi;
    mean /= static_cast<double>(n);
    double crr = 0.0, cii = 0.0, cri = 0.0, m2 = 0.0, m4 = 0.0;
    for (const Complex& zi : z) {
      const double dr = zi.real() - mean.real();
      const double di = zi.imag() - mean.imag();
      crr += dr * dr;
      cii += di * di;
      cri += dr * di;
      const double a = std::norm(zi);
      m2 += a;
      m4 += a * a;
    }
    const double nn = static_cast<double>(n);
    crr /= nn * (nn - 1.0);  // covariance of the mean vector
    cii /= nn * (nn - 1.0);
    cri /= nn * (nn - 1.0);
    m2 /= nn;
    m4 /= nn;

    SnrEstimate est;
    const double bias = crr + cii;  // E|mean|^2 excess over |E mean|^2
    est.signal = std::norm(mean) - bias;
    est.signal_se = std::sqrt(
        4.0 * (mean.real() * (crr * mean.real() + cri * mean.imag()) +
               mean.imag() * (cri * mean.real() + cii * mean.imag())) +
        2.0 * (crr * crr + 2.0 * cri * cri + cii * cii));
    const double m2_se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / nn);
    est.noise = m2 - est.signal;
    est.noise_se = std::sqrt(m2_se * m2_se + est.signal_se * est.signal_se);
    finish_ratio(est);
    return est;
  }

  if (record.scheme == Scheme::direct) {
    std::map<double, std::vector<double>> groups;
    for (std::size_t i = 0; i < record.outcome.size(); ++i) {
      const int o = record.outcome[i];
      const double diff = o == 1 ? 1.0 : (o == 2 ? -1.0 : 0.0);
      groups[record.delta[i]].push_back(diff);
    }
    if (groups.empty())
      throw std::domain_error("empirical_snr: empty record");
    SnrEstimate est;
    double sig_var = 0.0, noi_var = 0.0;
    const double k = static_cast<double>(groups.size());
    for (const auto& [delta, diffs] : groups) {
      double s, s_se, n, n_se;
      difference_count_stats(diffs, s, s_se, n, n_se);
      est.signal += s / k;
      est.noise += n / k;
      sig_var += s_se * s_se / (k * k);
      noi_var += n_se * n_se / (k * k);
    }
    est.signal_se = std::sqrt(sig_var);
    est.noise_se = std::sqrt(noi_var);
    finish_ratio(est);
    return est;
  }

  throw std::domain_error("empirical_snr: unsupported scheme for records");
}

EnsembleSummary run_trials(const CoherenceParams& params, Scheme scheme,
                           std::span<const double> schedule, std::size_t shots,
                           std::size_t trials, std::uint64_t master_seed) {
  EnsembleSummary summary;
  summary.trials = trials;
  summary.results.reserve(trials);
  summary.trial_streams.reserve(trials);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (std::size_t t = 0; t < trials; ++t) {
    rng::Stream stream(master_seed, t);
    const MeasurementRecord rec =
        sample_record(params, scheme, schedule, shots, stream);
    const EstimationResult res = mle_estimate(rec, params.epsilon);
    summary.results.push_back(res);
    summary.trial_streams.push_back(t);
    summary.converged_count += res.converged ? 1 : 0;
    summary.degenerate_count += res.degenerate ? 1 : 0;
    mean += Eigen::Vector2d(res.g_hat.real(), res.g_hat.imag());
  }
  if (trials > 0) mean /= static_cast<double>(trials);
  summary.mean_g = Complex(mean(0), mean(1));
  if (trials > 1) {
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const EstimationResult& res : summary.results) {
      const Eigen::Vector2d d(res.g_hat.real() - mean(0),
                              res.g_hat.imag() - mean(1));
      cov += d * d.transpose();
    }
    summary.empirical_cov = cov / static_cast<double>(trials - 1);
  }
  return summary;
}

FisherMatrix schedule_average_fisher(const CoherenceParams& params, Scheme scheme,
                                     std::span<const double> schedule,
                                     std::size_t shots) {
  if (scheme == Scheme::heterodyne)
    return fisher_heterodyne_analytic(params.epsilon);
  if (schedule.empty() || shots == 0)
    throw std::domain_error("schedule_average_fisher: empty schedule");
  const std::size_t k = schedule.size();
  FisherMatrix avg = FisherMatrix::Zero();
  for (std::size_t slot = 0; slot < std::min(k, shots); ++slot) {
    // occurrences of this slot when cycling the schedule over `shots`
    const std::size_t count = shots / k + (slot < shots % k ? 1 : 0);
    FisherMatrix f;
    switch (scheme) {
      case Scheme::direct:
        f = fisher_direct_analytic(params.epsilon, params.g, schedule[slot]);
        break;
      case Scheme::entangled:
        f = fisher_shared_entanglement_analytic(params.epsilon, params.g,
                                                schedule[slot]);
        break;
      case Scheme::homodyne:
        f = fisher_homodyne_analytic(params.epsilon, schedule[slot]);
        break;
      default:
        throw std::logic_error("schedule_average_fisher: unexpected scheme");
    }
    avg += static_cast<double>(count) * f;
  }
  return avg / static_cast<double>(shots);
}

}  // namespace tli
