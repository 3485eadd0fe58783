#include "mblsim/free_fermion.hpp"

#include <cmath>
#include <complex>

#include "mblsim/errors.hpp"
#include "mblsim/spectrum.hpp"

namespace mblsim {

namespace {

using Complex = std::complex<double>;

// Nambu ordering (c_1..c_N, c_1^dag..c_N^dag). The 2N x 2N matrix of
// M_ab = <Psi_a Psi_b^dag> has blocks [[I - g^T, f], [-conj(f), g]].
Eigen::MatrixXcd nambu_correlations(const CovarianceState& s) {
  const int n = s.n();
  Eigen::MatrixXcd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) =
      Eigen::MatrixXcd::Identity(n, n) - s.g.transpose();
  m.topRightCorner(n, n) = s.f;
  m.bottomLeftCorner(n, n) = -s.f.conjugate();
  m.bottomRightCorner(n, n) = s.g;
  return m;
}

// <Psi_a Psi_b Psi_c Psi_d> from pair contractions; <Psi_x Psi_y> = M(x, y+N mod 2N).
Complex wick4(const Eigen::MatrixXcd& m, int a, int b, int c, int d) {
  const int n2 = static_cast<int>(m.rows());
  auto pair = [&](int x, int y) { return m(x, (y + n2 / 2) % n2); };
  return pair(a, b) * pair(c, d) - pair(a, c) * pair(b, d) + pair(a, d) * pair(b, c);
}

}  // namespace

void BdgHamiltonian::validate() const {
  const int m = n();
  if (pairing.rows() != m || pairing.cols() != m || hopping.cols() != m) {
    throw ConfigError("BdG blocks must be square and sized alike");
  }
  if ((hopping - hopping.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + hopping.cwiseAbs().maxCoeff())) {
    throw ConfigError("hopping block must be symmetric");
  }
  if ((pairing + pairing.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + pairing.cwiseAbs().maxCoeff())) {
    throw ConfigError("pairing block must be antisymmetric");
  }
}

BdgHamiltonian build_bdg(const ModelSpec& spec, const InitialPattern& pattern) {
  spec.validate();
  pattern.validate();
  const int n = spec.n();
  if (pattern.n() != n) throw ConfigError("pattern length does not match the model");

  // theta_j = pi * (occupied sites left of j); occupied means spin down.
  Eigen::VectorXi signs(n);
  int occupied_left = 0;
  for (int j = 0; j < n; ++j) {
    signs(j) = (occupied_left % 2 == 0) ? +1 : -1;
    if (pattern.signs[j] < 0) ++occupied_left;
  }

  BdgHamiltonian bdg;
  bdg.phase_signs = signs;
  bdg.hopping = Eigen::MatrixXd::Zero(n, n);
  bdg.pairing = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    bdg.hopping(i, i) = -(spec.field_b + spec.disorder.values[i]);
    for (int j = i + 1; j < n; ++j) {
      const double amp = spec.couplings.values()(i, j) * signs(i) * signs(j);
      bdg.hopping(i, j) = amp;
      bdg.hopping(j, i) = amp;
      bdg.pairing(i, j) = amp;
      bdg.pairing(j, i) = -amp;
    }
  }
  return bdg;
}

double CovarianceState::physicality_error() const {
  const Eigen::MatrixXcd m = nambu_correlations(*this);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return std::max({0.0, -lo, hi - 1.0});
}

CovarianceState init_covariance(const InitialPattern& pattern) {
  pattern.validate();
  const int n = pattern.n();
  CovarianceState s;
  s.g = Eigen::MatrixXcd::Zero(n, n);
  s.f = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    s.g(i, i) = pattern.signs[i] < 0 ? 1.0 : 0.0;  // spin up = empty
  }
  return s;
}

BdgPropagator::BdgPropagator(const BdgHamiltonian& bdg)
    : n_(bdg.n()), a_(bdg.hopping), b_(bdg.pairing) {
  bdg.validate();
  Eigen::MatrixXd h(2 * n_, 2 * n_);
  h.topLeftCorner(n_, n_) = a_;
  h.topRightCorner(n_, n_) = b_;
  h.bottomLeftCorner(n_, n_) = -b_;
  h.bottomRightCorner(n_, n_) = -a_;
  SymEig eig = sym_eig(h);
  modes_ = eig.eigenvectors.cast<Complex>();
  omega_ = std::move(eig.eigenvalues);
}

CovarianceState BdgPropagator::evolve(const CovarianceState& initial, double t) const {
  if (initial.n() != n_) throw ConfigError("covariance size does not match the propagator");
  if (t == 0.0) return initial;
  const Eigen::MatrixXcd m0 = nambu_correlations(initial);
  Eigen::VectorXcd phases(2 * n_);
  for (int k = 0; k < 2 * n_; ++k) phases(k) = std::polar(1.0, -omega_(k) * t);
  const Eigen::MatrixXcd u = (modes_ * phases.asDiagonal()) * modes_.transpose();
  const Eigen::MatrixXcd m = u * m0 * u.adjoint();

  CovarianceState out;
  out.g = m.bottomRightCorner(n_, n_);
  out.f = m.topRightCorner(n_, n_);
  return out;
}

double BdgPropagator::energy(const CovarianceState& state) const {
  const double hopping_part = (a_.array() * state.g.real().array()).sum();
  const double pairing_part = (b_.array() * state.f.real().array()).sum();
  return hopping_part - pairing_part;
}

CovarianceState evolve_covariance(const CovarianceState& state, const BdgHamiltonian& bdg,
                                  double t) {
  return BdgPropagator(bdg).evolve(state, t);
}

FreeFermionObservables ff_observables(const CovarianceState& state) {
  const int n = state.n();
  const Eigen::MatrixXcd m = nambu_correlations(state);

  FreeFermionObservables obs;
  obs.sz.resize(n);
  for (int i = 0; i < n; ++i) obs.sz(i) = 1.0 - 2.0 * std::real(state.g(i, i));

  obs.zz = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    const double ni = std::real(state.g(i, i));
    for (int j = i + 1; j < n; ++j) {
      const double nj = std::real(state.g(j, j));
      const double ninj = std::real(wick4(m, n + i, i, n + j, j));
      const double v = 1.0 - 2.0 * ni - 2.0 * nj + 4.0 * ninj;
      obs.zz(i, j) = v;
      obs.zz(j, i) = v;
    }
  }
  obs.f_q = qfi_from_correlations(obs.sz, obs.zz);
  return obs;
}

}  // namespace mblsim
