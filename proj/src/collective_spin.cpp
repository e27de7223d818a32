#include "spinbayes/collective_spin.hpp"

#include "spinbayes/error.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace spinbayes {

namespace {

constexpr double kPi = std::numbers::pi;

struct TwistTerms {
  double a;
  double b;
  double delta;
};

// A, B and the tilt delta of the OAT noise ellipse.
TwistTerms twist_terms(int n, double chi_t) {
  const double a = 1.0 - cos_power(2.0 * chi_t, n - 2);
  const double b = 4.0 * std::sin(chi_t) * cos_power(chi_t, n - 2);
  const double delta = (a == 0.0 && b == 0.0) ? 0.0 : 0.5 * std::atan2(b, a);
  return {a, b, delta};
}

void require_particles(int n) {
  if (n < 2) throw DomainError("particle number must be >= 2, got " + std::to_string(n));
}

}  // namespace

void validate(const OatParams& p) {
  require_particles(p.n);
  if (!(p.chi_t >= 0.0)) throw DomainError("twisting angle chi_t must be >= 0");
  if (!std::isfinite(p.alpha)) throw DomainError("rotation angle must be finite");
}

double cos_power(double x, int k) {
  const double c = std::cos(x);
  if (k == 0) return 1.0;
  if (c > 0.0) return std::exp(k * std::log(c));
  return std::pow(c, k);
}

double squeezing_parameter(const OatParams& p) {
  validate(p);
  if (p.chi_t == 0.0) return 1.0;
  const auto [a, b, delta] = twist_terms(p.n, p.chi_t);
  const double radial = std::hypot(a, b);
  const double variance = 1.0 + 0.25 * (p.n - 1) * (a + radial * std::cos(2.0 * (p.alpha + delta)));
  return std::sqrt(variance) / cos_power(p.chi_t, p.n - 1);
}

double optimal_twist_time(int n, double chi) {
  require_particles(n);
  if (!(chi > 0.0)) throw DomainError("twisting strength chi must be > 0");
  return std::cbrt(3.0) * std::pow(static_cast<double>(n), -2.0 / 3.0) / chi;
}

double optimal_rotation_angle(int n, double chi_t) {
  require_particles(n);
  if (!(chi_t > 0.0)) {
    throw DomainError("optimal rotation angle undefined for chi_t <= 0 (all angles are equivalent)");
  }
  const double delta = twist_terms(n, chi_t).delta;
  double alpha = 0.5 * kPi - delta;
  if (alpha > 0.5 * kPi) alpha -= kPi;
  return alpha;
}

double optimal_squeezing(int n, double chi_t) {
  validate(OatParams{n, chi_t, 0.0});
  if (chi_t == 0.0) return 1.0;
  const auto [a, b, delta] = twist_terms(n, chi_t);
  (void)delta;
  const double variance = 1.0 + 0.25 * (n - 1) * (a - std::hypot(a, b));
  return std::sqrt(variance) / cos_power(chi_t, n - 1);
}

double mean_jz(const OatParams& p, double phi) {
  validate(p);
  return -0.5 * p.n * std::sin(phi) * cos_power(p.chi_t, p.n - 1);
}

double mean_jz2(const OatParams& p, double phi) {
  validate(p);
  const double n = p.n;
  const double c2 = cos_power(2.0 * p.chi_t, p.n - 2);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const double ct = std::cos(p.alpha);
  const double st = std::sin(p.alpha);
  return sp * sp * n / 8.0 * (n + 1.0 + (n - 1.0) * c2)
       + (ct * cp) * (ct * cp) * n / 8.0 * (n + 1.0 - (n - 1.0) * c2)
       + (st * cp) * (st * cp) * n / 4.0
       - ct * st * cp * cp * n * (n - 1.0) / 2.0 * cos_power(p.chi_t, p.n - 2) * std::sin(p.chi_t);
}

double tan2_coefficient(int n, double chi_t) {
  validate(OatParams{n, chi_t, 0.0});
  const double num = n + 1.0 + (n - 1.0) * cos_power(2.0 * chi_t, n - 2);
  const double den = 2.0 * n * cos_power(chi_t, 2 * (n - 1));
  return num / den - 1.0;
}

double phase_uncertainty(const OatParams& p, double phi) {
  if (!(std::abs(phi) < 0.5 * kPi)) {
    throw DomainError("phase uncertainty diverges for |phi| >= pi/2");
  }
  const double xi = squeezing_parameter(p);
  const double t = std::tan(phi);
  return std::sqrt(tan2_coefficient(p.n, p.chi_t) * t * t + xi * xi / p.n);
}

double SqueezedStateModel::phase_uncertainty(double t) const {
  const double tn = std::tan(t);
  return std::sqrt(tan2_coeff * tn * tn + xi * xi / n);
}

double SqueezedStateModel::outcome_spread(double t) const {
  const double s = std::sin(t);
  const double c = std::cos(t);
  return amplitude * std::sqrt(tan2_coeff * s * s + xi * xi / n * c * c);
}

double SqueezedStateModel::working_point_uncertainty() const {
  return xi / (contrast * std::sqrt(static_cast<double>(n)));
}

void validate(const SqueezedStateModel& m) {
  require_particles(m.n);
  if (!(m.xi > 0.0)) throw DomainError("squeezing parameter xi must be > 0");
  if (!(m.amplitude > 0.0)) throw DomainError("fringe amplitude must be > 0");
  if (!(m.contrast > 0.0 && m.contrast <= 1.0)) throw DomainError("contrast must lie in (0, 1]");
  if (!(m.tan2_coeff >= 0.0)) throw DomainError("tan^2 coefficient must be >= 0");
}

SqueezedStateModel coherent_state(int n, double contrast) {
  SqueezedStateModel m{n, 1.0, 0.5 * n, contrast, 0.0};
  validate(m);
  return m;
}

SqueezedStateModel oat_model(const OatParams& p, double contrast) {
  validate(p);
  SqueezedStateModel m;
  m.n = p.n;
  m.xi = squeezing_parameter(p);
  m.amplitude = 0.5 * p.n * cos_power(p.chi_t, p.n - 1);
  m.contrast = contrast;
  m.tan2_coeff = std::max(0.0, tan2_coefficient(p.n, p.chi_t));
  validate(m);
  return m;
}

namespace {

// <Jx^2>/<Jx>^2 - 1 for the state sum_n exp(-n^2/(s^2 N)) |n>_y, with x the transverse axis
// along which the mean spin points.
double ansatz_tan2(int particles, double s) {
  const double j = 0.5 * particles;
  const double jj = j * (j + 1.0);
  const int dim = particles + 1;
  std::vector<double> c(dim);
  double norm = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double m = -j + k;
    c[k] = std::exp(-m * m / (s * s * particles));
    norm += c[k] * c[k];
  }
  norm = std::sqrt(norm);
  for (double& v : c) v /= norm;

  double first = 0.0;
  double second = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double m = -j + k;
    second += 0.5 * c[k] * c[k] * (jj - m * m);
    if (k + 1 < dim) first += c[k] * c[k + 1] * std::sqrt(jj - m * (m + 1.0));
    if (k + 2 < dim) {
      second += 0.5 * c[k] * c[k + 2] * std::sqrt(jj - m * (m + 1.0)) *
                std::sqrt(jj - (m + 1.0) * (m + 2.0));
    }
  }
  return std::max(0.0, second / (first * first) - 1.0);
}

}  // namespace

SqueezedStateModel ansatz_to_model(const GaussianAnsatz& a, double contrast) {
  require_particles(a.n);
  if (!(a.s > 0.0 && a.s < 1.0)) throw DomainError("ansatz width s must lie in (0, 1)");
  const double s2n = a.s * a.s * a.n;
  if (!(s2n > 1.0)) {
    throw DomainError("ansatz requires s^2 N > 1 for the amplitude approximation, got " +
                      std::to_string(s2n));
  }
  SqueezedStateModel m;
  m.n = a.n;
  m.xi = a.s * std::exp(1.0 / (2.0 * s2n));
  m.amplitude = 0.5 * a.n * std::exp(-1.0 / (2.0 * s2n));
  m.contrast = contrast;
  m.tan2_coeff = ansatz_tan2(a.n, a.s);
  validate(m);
  return m;
}

GaussianAnsatz ansatz_for_xi(int n, double xi) {
  require_particles(n);
  const double lo = 1.0 / std::sqrt(static_cast<double>(n));
  const auto xi_of = [n](double s) { return s * std::exp(1.0 / (2.0 * s * s * n)); };
  const double xi_lo = xi_of(lo);
  const double xi_hi = xi_of(1.0);
  if (!(xi > xi_lo && xi < xi_hi)) {
    throw DomainError("xi = " + std::to_string(xi) + " not reachable by the Gaussian ansatz at N = " +
                      std::to_string(n));
  }
  boost::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(
      [&](double s) { return xi_of(s) - xi; }, lo, 1.0, xi_lo - xi, xi_hi - xi,
      boost::math::tools::eps_tolerance<double>(52), iterations);
  return {n, 0.5 * (root.first + root.second)};
}

OatParams oat_for_xi(int n, double xi) {
  require_particles(n);
  if (xi == 1.0) return {n, 0.0, 0.0};
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("OAT squeezing parameter must lie in (0, 1]");
  const double upper = std::min(4.0 * optimal_twist_time(n, 1.0), 0.25 * kPi);
  const auto best = boost::math::tools::brent_find_minima(
      [n](double c) { return optimal_squeezing(n, c); }, 0.0, upper, 52);
  const double chi_star = best.first;
  if (xi < best.second) {
    throw DomainError("xi = " + std::to_string(xi) + " is below the OAT minimum " +
                      std::to_string(best.second) + " at N = " + std::to_string(n));
  }
  boost::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(
      [&](double c) { return optimal_squeezing(n, c) - xi; }, 0.0, chi_star, 1.0 - xi,
      best.second - xi, boost::math::tools::eps_tolerance<double>(52), iterations);
  const double chi_t = 0.5 * (root.first + root.second);
  return {n, chi_t, optimal_rotation_angle(n, chi_t)};
}

SqueezedStateModel model_from_xi(int n, double xi, double contrast, StateFamily family) {
  if (xi == 1.0) return coherent_state(n, contrast);
  SqueezedStateModel m;
  switch (family) {
    case StateFamily::coherent:
      throw DomainError("a coherent state has xi = 1");
    case StateFamily::ansatz:
      m = ansatz_to_model(ansatz_for_xi(n, xi), contrast);
      break;
    case StateFamily::oat:
      m = oat_model(oat_for_xi(n, xi), contrast);
      break;
  }
  m.xi = xi;
  return m;
}

double xi_from_db(double xi2_db) { return std::pow(10.0, xi2_db / 20.0); }

}  // namespace spinbayes
