#pragma once

#include "spinbayes/collective_spin.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spinbayes {

/// Phase uncertainty entering the reshaped likelihood.
enum class QpnForm {
  small_angle,      ///< xi / (C sqrt N) at every working point
  phase_dependent,  ///< full sqrt(tan2 tan^2 t + xi^2/N) / C, evaluated away from pi/2
};

std::string to_string(QpnForm f);
QpnForm qpn_form_from_string(const std::string& s);

/// Gaussian outcome model of one Ramsey measurement of the half-population difference.
struct LikelihoodModel {
  SqueezedStateModel state;
  double sigma_n = 0.0;      ///< phase-noise strength absorbed by reshaping (rad)
  bool reshaped = false;
  double sigma_floor = 0.0;  ///< <= 0 selects amplitude * xi / (10 sqrt N)
  double p_d = 0.0;          ///< depolarisation strength the estimator anticipates
  QpnForm qpn = QpnForm::phase_dependent;

  double floor() const;
  /// 1 - E[p_tilde]: the contrast loss folded into the mean.
  double contrast_factor() const;
  /// Outcome std of the ideal likelihood, amplitude * xi / sqrt N.
  double ideal_sigma() const;
};

void validate(const LikelihoodModel& m);

/// Mean outcome for true phase phi and auxiliary phase aux, given the per-shot draws.
double outcome_mean(const LikelihoodModel& model, double phi, double aux, double p_tilde = 0.0,
                    double phase_draw = 0.0);

/// sqrt(dphi^2 + sigma_n^2) |amplitude C cos t|, never below the floor.
double reshaped_sigma(const LikelihoodModel& model, double phi_tilde);

/// Outcome std used by the estimator at working phase t.
double likelihood_sigma(const LikelihoodModel& model, double phi_tilde);

/// log of the Gaussian density of outcome m_z at working phase t (normalisation included).
double log_likelihood(const LikelihoodModel& model, double m_z, double phi_tilde);

/// Gaussian density of m_z for every grid phase, working phase = grid - aux. Not normalised.
std::vector<double> likelihood_curve(const LikelihoodModel& model, double m_z, double aux,
                                     std::span<const double> grid);

/// Precomputed form of a LikelihoodModel for repeated evaluation; sigma_n may vary per call.
class LikelihoodKernel {
public:
  explicit LikelihoodKernel(const LikelihoodModel& model);
  double log_density(double m_z, double phi_tilde, double sigma_n) const;

private:
  LikelihoodModel model_;
  double mean_scale_;
  double ideal_sigma_;
  double log_ideal_sigma_;
};

struct PosteriorStats {
  double mean = 0.0;
  double std = 0.0;
};

/// Density on a uniform grid x_i = lo + i h, h = (hi - lo) / n. With periodic = true the
/// domain wraps and the trapezoid rule reduces to sum(density) h.
class Posterior {
public:
  static Posterior uniform(double lo, double hi, std::size_t nodes, bool periodic);
  /// Builds a normalised density from unnormalised log values on [lo, hi).
  static Posterior from_log(double lo, double hi, std::span<const double> log_density, bool periodic);

  std::size_t size() const { return density_.size(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double spacing() const { return (hi_ - lo_) / static_cast<double>(density_.size()); }
  bool periodic() const { return periodic_; }
  double node(std::size_t i) const { return lo_ + spacing() * static_cast<double>(i); }
  std::vector<double> grid() const;
  const std::vector<double>& density() const { return density_; }

  /// Integral of the density over the domain.
  double integral() const;
  /// Pointwise product with weights, renormalised. DegeneratePosterior if every product is 0.
  void update(std::span<const double> weights);

private:
  Posterior(double lo, double hi, std::vector<double> density, bool periodic);
  void normalize();

  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<double> density_;
  bool periodic_ = false;
};

Posterior bayes_update(const Posterior& prior, std::span<const double> weights);

/// Mean and std. On a periodic domain whose linear std exceeds one radian of the wrapped
/// coordinate (span / 2 pi) the circular mean is used and
/// the std is taken over wrapped deviations from it.
PosteriorStats posterior_stats(const Posterior& p);

/// xi / (sqrt N sqrt l).
double analytic_posterior_std(double xi, int n, int l);

/// Product of two Gaussians: mean and std of the normalised result.
PosteriorStats gaussian_product(PosteriorStats a, PosteriorStats b);

}  // namespace spinbayes
