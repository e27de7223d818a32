#include "spinbayes/exact_oracle.hpp"

#include "spinbayes/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace spinbayes::oracle {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using cd = std::complex<double>;

struct SpinOperators {
  Matrix jx, jy, jz;
};

// Basis ordered m = j, j-1, ..., -j.
SpinOperators spin_operators(int n) {
  const int dim = n + 1;
  const double j = 0.5 * n;
  Matrix raise = Matrix::Zero(dim, dim);
  Matrix jz = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    if (k > 0) raise(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Matrix lower = raise.adjoint();
  return {0.5 * (raise + lower), (raise - lower) / cd(0.0, 2.0), jz};
}

// exp(-i angle H) for Hermitian H.
Matrix unitary(const Matrix& h, double angle) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(cd(0.0, -angle * w(k)));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

double expect(const Matrix& op, const Vector& psi) { return psi.dot(op * psi).real(); }

}  // namespace

ExactMoments exact_oat_moments(const OatParams& p, double phi) {
  validate(p);
  if (p.n > kMaxParticles) throw DomainError("exact oracle is limited to N <= 14");
  const auto ops = spin_operators(p.n);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(ops.jx);
  Vector psi = eig.eigenvectors().col(p.n);  // largest Jx eigenvalue: x-polarised

  psi = unitary(ops.jz * ops.jz, p.chi_t) * psi;
  psi = unitary(ops.jx, p.alpha) * psi;

  ExactMoments out;
  const double mx = expect(ops.jx, psi);
  const double my = expect(ops.jy, psi);
  const double vy = expect(ops.jy * ops.jy, psi) - my * my;
  out.xi = std::sqrt(p.n * vy) / mx;

  const Matrix readout_rotation = unitary(ops.jx, -0.5 * std::numbers::pi);
  const Matrix observable = readout_rotation.adjoint() * ops.jz * readout_rotation;
  const Vector after_phase = unitary(ops.jz, phi) * psi;
  out.mean_jz = expect(observable, after_phase);
  out.mean_jz2 = expect(observable * observable, after_phase);
  const Matrix derivative = cd(0.0, 1.0) * (ops.jz * observable - observable * ops.jz);
  out.dmean_jz_dphi = expect(derivative, after_phase);
  return out;
}

double exact_phase_uncertainty(const OatParams& p, double phi) {
  const auto m = exact_oat_moments(p, phi);
  return std::sqrt(m.mean_jz2 - m.mean_jz * m.mean_jz) / std::abs(m.dmean_jz_dphi);
}

}  // namespace spinbayes::oracle
