#pragma once

// Moments and squeezing of one-axis-twisted (OAT) spin states, the Gaussian ansatz state,
// and the metrological state description consumed by the estimators.
//
// Angle conventions: the rotation angle `alpha` is measured from the readout quadrature,
// i.e. alpha = 0 means the twisted state is read out along J_y without any extra turn.
// With that origin the closed-form squeezing parameter, the second moment <J_z^2> and the
// exact state-vector oracle all agree for the same alpha.

namespace spinbayes {

/// Parameters of an OAT state preparation: twist exp(-i chi_t Jz^2) of the x-polarised
/// coherent state, followed by a turn exp(-i alpha Jx).
struct OatParams {
  int n = 2;          ///< particle number, >= 2
  double chi_t = 0;   ///< accumulated twisting angle, >= 0
  double alpha = 0;   ///< rotation angle about x (radians)
};

/// Throws DomainError when n < 2 or chi_t < 0.
void validate(const OatParams& p);

/// cos(x)^k evaluated in log space when cos(x) > 0 (large k must not underflow early).
double cos_power(double x, int k);

/// Wineland squeezing parameter xi(chi_t, alpha); exactly 1 at chi_t = 0.
double squeezing_parameter(const OatParams& p);

/// 3^(1/3) N^(-2/3) / chi.
double optimal_twist_time(int n, double chi);

/// Rotation angle in (-pi/2, pi/2] minimising squeezing_parameter at fixed chi_t.
double optimal_rotation_angle(int n, double chi_t);

/// Smallest xi reachable at this twist, i.e. squeezing_parameter at the optimal angle.
double optimal_squeezing(int n, double chi_t);

/// <J_z> after phase accumulation phi and the recombination pulse.
double mean_jz(const OatParams& p, double phi);

/// <J_z^2> after phase accumulation phi; the rotation angle of the second-moment formula is
/// p.alpha.
double mean_jz2(const OatParams& p, double phi);

/// Coefficient of tan^2(phi) in the phase uncertainty, (<Jx^2>/<Jx>^2 - 1) of the twisted state.
double tan2_coefficient(int n, double chi_t);

/// sqrt(tan2_coefficient * tan^2 phi + xi^2 / N); DomainError for |phi| >= pi/2.
double phase_uncertainty(const OatParams& p, double phi);

/// Gaussian-in-J_y ansatz state with width parameter s (0 < s < 1).
struct GaussianAnsatz {
  int n = 2;
  double s = 0.5;
};

/// Which analytic family a directly specified xi is mapped onto.
enum class StateFamily { coherent, ansatz, oat };

/// Metrological description of a probe state.
///
/// `amplitude` is the fringe amplitude in half-population units without contrast, so the
/// mean outcome is amplitude * contrast * sin(phase). `tan2_coeff` carries the phase
/// dependence of the projection noise: the outcome variance at total phase t is
/// amplitude^2 * (tan2_coeff * sin^2 t + xi^2/N * cos^2 t).
struct SqueezedStateModel {
  int n = 2;
  double xi = 1.0;
  double amplitude = 1.0;
  double contrast = 1.0;
  double tan2_coeff = 0.0;

  /// Projection-noise phase uncertainty at total phase t (no contrast correction).
  double phase_uncertainty(double t) const;
  /// Standard deviation of the half-population difference at total phase t.
  double outcome_spread(double t) const;
  /// Effective phase uncertainty of the ideal likelihood, xi / (contrast sqrt N).
  double working_point_uncertainty() const;
};

/// Throws DomainError on n < 2, xi <= 0, amplitude <= 0, contrast outside (0, 1].
void validate(const SqueezedStateModel& m);

SqueezedStateModel coherent_state(int n, double contrast = 1.0);
SqueezedStateModel oat_model(const OatParams& p, double contrast = 1.0);

/// xi = s e^(1/(2 s^2 N)), amplitude = (N/2) e^(-1/(2 s^2 N)); requires s^2 N > 1.
SqueezedStateModel ansatz_to_model(const GaussianAnsatz& a, double contrast = 1.0);

/// Ansatz width giving the requested xi (branch with s^2 N > 1).
GaussianAnsatz ansatz_for_xi(int n, double xi);

/// OAT preparation (twist on the squeezing branch, optimal angle) reaching the requested xi.
OatParams oat_for_xi(int n, double xi);

/// Builds a model with the requested xi from the chosen family (xi = 1 gives the coherent state).
SqueezedStateModel model_from_xi(int n, double xi, double contrast, StateFamily family);

/// xi from a squeezing level quoted in dB of xi^2.
double xi_from_db(double xi2_db);

}  // namespace spinbayes
