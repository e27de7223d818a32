#pragma once

#include "spinbayes/collective_spin.hpp"

namespace spinbayes::oracle {

/// Largest particle number accepted by the dense state-vector oracle.
inline constexpr int kMaxParticles = 14;

/// Expectation values from an explicit (N+1)-dimensional Dicke-basis state vector.
struct ExactMoments {
  double mean_jz = 0;         ///< <Jz> after phase phi and recombination
  double mean_jz2 = 0;        ///< <Jz^2> after phase phi and recombination
  double dmean_jz_dphi = 0;   ///< d<Jz>/dphi, from the commutator i[Jz, O]
  double xi = 0;              ///< sqrt(N) Delta Jy / <Jx> of the prepared state
};

/// Prepares exp(-i alpha Jx) exp(-i chi_t Jz^2) |x-polarised>, accumulates exp(-i phi Jz),
/// recombines with exp(+i pi/2 Jx) and evaluates the moments. DomainError for N > 14.
ExactMoments exact_oat_moments(const OatParams& p, double phi);

/// Delta Jz / |d<Jz>/dphi| from the exact moments.
double exact_phase_uncertainty(const OatParams& p, double phi);

}  // namespace spinbayes::oracle
