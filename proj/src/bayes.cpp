#include "spinbayes/bayes.hpp"

#include "spinbayes/error.hpp"
#include "spinbayes/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spinbayes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGuard = 0.5 * kPi - 1e-3;

// Maps t into (-pi/2, pi/2] modulo pi; tan^2 and cos^2 are pi-periodic.
double fold_half_turn(double t) {
  double r = std::remainder(t, kPi);
  if (r <= -0.5 * kPi) r += kPi;
  return r;
}

}  // namespace

std::string to_string(QpnForm f) {
  return f == QpnForm::small_angle ? "small_angle" : "phase_dependent";
}

QpnForm qpn_form_from_string(const std::string& s) {
  if (s == "small_angle") return QpnForm::small_angle;
  if (s == "phase_dependent") return QpnForm::phase_dependent;
  throw DomainError("unknown QPN form '" + s + "' (small_angle | phase_dependent)");
}

double LikelihoodModel::floor() const {
  if (sigma_floor > 0.0) return sigma_floor;
  return ideal_sigma() / 10.0;
}

double LikelihoodModel::contrast_factor() const { return 1.0 - expected_depolarization(p_d); }

double LikelihoodModel::ideal_sigma() const {
  return state.amplitude * state.xi / std::sqrt(static_cast<double>(state.n));
}

void validate(const LikelihoodModel& m) {
  validate(m.state);
  if (!(m.sigma_n >= 0.0) || !std::isfinite(m.sigma_n)) throw DomainError("sigma_n must be >= 0");
  if (!(m.p_d >= 0.0)) throw DomainError("p_d must be >= 0");
  if (std::isnan(m.sigma_floor)) throw DomainError("sigma_floor must be a number");
}

double outcome_mean(const LikelihoodModel& model, double phi, double aux, double p_tilde,
                    double phase_draw) {
  return (1.0 - p_tilde) * model.state.amplitude * model.state.contrast *
         std::sin(phi - aux + phase_draw);
}

double reshaped_sigma(const LikelihoodModel& model, double phi_tilde) {
  const SqueezedStateModel& s = model.state;
  double dphi = s.working_point_uncertainty();
  if (model.qpn == QpnForm::phase_dependent) {
    const double t = std::clamp(fold_half_turn(phi_tilde), -kGuard, kGuard);
    dphi = s.phase_uncertainty(t) / s.contrast;
  }
  const double slope = std::abs(s.amplitude * s.contrast * std::cos(phi_tilde));
  return std::max(std::hypot(dphi, model.sigma_n) * slope, model.floor());
}

double likelihood_sigma(const LikelihoodModel& model, double phi_tilde) {
  return model.reshaped ? reshaped_sigma(model, phi_tilde) : model.ideal_sigma();
}

double log_likelihood(const LikelihoodModel& model, double m_z, double phi_tilde) {
  return LikelihoodKernel(model).log_density(m_z, phi_tilde, model.sigma_n);
}

LikelihoodKernel::LikelihoodKernel(const LikelihoodModel& model)
    : model_(model),
      mean_scale_(model.contrast_factor() * model.state.amplitude * model.state.contrast),
      ideal_sigma_(model.ideal_sigma()),
      log_ideal_sigma_(std::log(model.ideal_sigma())) {}

double LikelihoodKernel::log_density(double m_z, double phi_tilde, double sigma_n) const {
  constexpr double kLogRoot2Pi = 0.91893853320467274178;
  const double mean = mean_scale_ * std::sin(phi_tilde);
  if (!model_.reshaped) {
    const double z = (m_z - mean) / ideal_sigma_;
    return -0.5 * z * z - log_ideal_sigma_ - kLogRoot2Pi;
  }
  LikelihoodModel m = model_;
  m.sigma_n = sigma_n;
  const double sigma = reshaped_sigma(m, phi_tilde);
  const double z = (m_z - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - kLogRoot2Pi;
}

std::vector<double> likelihood_curve(const LikelihoodModel& model, double m_z, double aux,
                                     std::span<const double> grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = std::exp(log_likelihood(model, m_z, grid[i] - aux));
  }
  return out;
}

Posterior::Posterior(double lo, double hi, std::vector<double> density, bool periodic)
    : lo_(lo), hi_(hi), density_(std::move(density)), periodic_(periodic) {}

Posterior Posterior::uniform(double lo, double hi, std::size_t nodes, bool periodic) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("posterior domain must satisfy lo < hi");
  }
  if (nodes < 2) throw DomainError("posterior grid needs at least 2 nodes");
  return Posterior(lo, hi, std::vector<double>(nodes, 1.0 / (hi - lo)), periodic);
}

Posterior Posterior::from_log(double lo, double hi, std::span<const double> log_density,
                              bool periodic) {
  Posterior p = uniform(lo, hi, log_density.size(), periodic);
  const double peak = *std::max_element(log_density.begin(), log_density.end());
  if (!std::isfinite(peak)) throw DegeneratePosterior("log density has no finite maximum");
  for (std::size_t i = 0; i < log_density.size(); ++i) {
    p.density_[i] = std::exp(log_density[i] - peak);
  }
  p.normalize();
  return p;
}

std::vector<double> Posterior::grid() const {
  std::vector<double> g(density_.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = node(i);
  return g;
}

double Posterior::integral() const {
  const double h = spacing();
  double sum = 0.0;
  for (double d : density_) sum += d;
  return sum * h;
}

void Posterior::normalize() {
  const double total = integral();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegeneratePosterior("posterior mass vanished on every grid node");
  }
  for (double& d : density_) d /= total;
}

void Posterior::update(std::span<const double> weights) {
  if (weights.size() != density_.size()) {
    throw DomainError("likelihood weights do not match the posterior grid");
  }
  std::vector<double> next(density_.size());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = density_[i] * weights[i];
  std::swap(next, density_);
  try {
    normalize();
  } catch (const DegeneratePosterior&) {
    std::swap(next, density_);
    throw;
  }
}

Posterior bayes_update(const Posterior& prior, std::span<const double> weights) {
  Posterior next = prior;
  next.update(weights);
  return next;
}

PosteriorStats posterior_stats(const Posterior& p) {
  const double h = p.spacing();
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += p.node(i) * p.density()[i] * h;
  double var = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.node(i) - mean;
    var += d * d * p.density()[i] * h;
  }
  const double period = p.hi() - p.lo();
  // One radian of the wrapped coordinate.
  if (!p.periodic() || std::sqrt(var) <= period / (2.0 * kPi)) {
    return {mean, std::sqrt(std::max(var, 0.0))};
  }

  const double k = 2.0 * kPi / period;
  double c = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    c += std::cos(k * p.node(i)) * p.density()[i];
    s += std::sin(k * p.node(i)) * p.density()[i];
  }
  double cmean = std::atan2(s, c) / k;
  while (cmean < p.lo()) cmean += period;
  while (cmean >= p.hi()) cmean -= period;
  var = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::remainder(p.node(i) - cmean, period);
    var += d * d * p.density()[i] * h;
  }
  return {cmean, std::sqrt(var)};
}

double analytic_posterior_std(double xi, int n, int l) {
  if (l < 1) throw DomainError("iteration count must be >= 1");
  if (n < 1 || !(xi > 0.0)) throw DomainError("need N >= 1 and xi > 0");
  return xi / (std::sqrt(static_cast<double>(n)) * std::sqrt(static_cast<double>(l)));
}

PosteriorStats gaussian_product(PosteriorStats a, PosteriorStats b) {
  const double wa = 1.0 / (a.std * a.std);
  const double wb = 1.0 / (b.std * b.std);
  return {(a.mean * wa + b.mean * wb) / (wa + wb), 1.0 / std::sqrt(wa + wb)};
}

}  // namespace spinbayes
