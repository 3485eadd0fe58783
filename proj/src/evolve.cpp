#include "mblsim/evolve.hpp"

#include <cmath>
#include <complex>

#include "mblsim/errors.hpp"
#include "mblsim/spectrum.hpp"

namespace mblsim {

namespace {

using Complex = std::complex<double>;

Amplitudes spectral_propagate(const SpectralDecomposition& sd, const Amplitudes& psi,
                              double t) {
  const auto& u = sd.eigenvectors;
  const Eigen::VectorXcd y =
      (u.transpose() * psi.real()).cast<Complex>() +
      Complex(0, 1) * (u.transpose() * psi.imag()).cast<Complex>();
  Eigen::VectorXcd w(y.size());
  for (long k = 0; k < y.size(); ++k) {
    w(k) = std::polar(1.0, -sd.eigenvalues(k) * t) * y(k);
  }
  return (u * w.real()).cast<Complex>() + Complex(0, 1) * (u * w.imag()).cast<Complex>();
}

struct LanczosResult {
  Eigen::MatrixXcd basis;     // orthonormal Krylov vectors
  Eigen::VectorXd alpha;      // tridiagonal diagonal
  Eigen::VectorXd beta;       // tridiagonal off-diagonal, beta(j) couples j and j+1
  double next_beta = 0.0;     // norm of the first discarded vector
  int m = 0;
  bool breakdown = false;     // Krylov space is exactly invariant
};

LanczosResult lanczos(const HamiltonianOperator& h, const Amplitudes& v0, int max_dim) {
  const long dim = v0.size();
  const int m_cap = static_cast<int>(std::min<long>(max_dim, dim));
  LanczosResult r;
  r.basis.resize(dim, m_cap);
  r.alpha.resize(m_cap);
  r.beta = Eigen::VectorXd::Zero(m_cap);

  r.basis.col(0) = v0;
  Amplitudes w(dim);
  for (int j = 0; j < m_cap; ++j) {
    h.apply(r.basis.col(j), w);
    if (j > 0) w -= r.beta(j - 1) * r.basis.col(j - 1);
    r.alpha(j) = std::real(r.basis.col(j).dot(w));
    w -= r.alpha(j) * r.basis.col(j);
    // Full reorthogonalization; the subspace is small.
    for (int k = 0; k <= j; ++k) w -= r.basis.col(k).dot(w) * r.basis.col(k);
    const double b = w.norm();
    r.m = j + 1;
    if (b < 1e-13) {
      r.breakdown = true;
      r.next_beta = 0.0;
      return r;
    }
    if (j + 1 < m_cap) {
      r.beta(j) = b;
      r.basis.col(j + 1) = w / b;
    } else {
      r.next_beta = b;
    }
  }
  return r;
}

// exp(-i tau T) e_1 for the small tridiagonal matrix.
Eigen::VectorXcd small_exp_e1(const LanczosResult& lz, double tau) {
  const int m = lz.m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    t(j, j) = lz.alpha(j);
    if (j + 1 < m) {
      t(j, j + 1) = lz.beta(j);
      t(j + 1, j) = lz.beta(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXcd phases(m);
  for (int k = 0; k < m; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * tau);
  const Eigen::VectorXd first_row = es.eigenvectors().row(0);
  return es.eigenvectors() * phases.cwiseProduct(first_row.cast<Complex>());
}

Amplitudes krylov_propagate(const HamiltonianOperator& h, Amplitudes psi, double t,
                            const KrylovOptions& opts) {
  if (t == 0.0) return psi;
  const double direction = t > 0 ? 1.0 : -1.0;
  const double total = std::abs(t);
  double done = 0.0;
  double dt = total;
  int halvings = 0;

  LanczosResult lz = lanczos(h, psi, opts.max_dim);
  while (done < total) {
    dt = std::min(dt, total - done);
    const Eigen::VectorXcd w = small_exp_e1(lz, direction * dt);
    const double budget = opts.tolerance * (dt / total);
    const double err = lz.breakdown ? 0.0 : lz.next_beta * std::abs(w(lz.m - 1)) * dt;
    if (err <= budget || lz.breakdown) {
      psi = lz.basis.leftCols(lz.m) * w;
      done += dt;
      dt *= 1.5;
      halvings = 0;
      if (done < total) lz = lanczos(h, psi, opts.max_dim);
    } else {
      dt *= 0.5;
      if (++halvings > opts.max_step_halvings) {
        throw ConvergenceError("Krylov step size underflow at t offset " +
                               std::to_string(done) + "; local error " + std::to_string(err));
      }
    }
  }
  return psi;
}

}  // namespace

StateVector evolve(const StateVector& psi0, const HamiltonianOperator& h, double t,
                   EvolutionMethod method, const KrylovOptions& opts) {
  if (psi0.dim() != h.dim()) throw ConfigError("state dimension does not match");
  const bool spectral = method == EvolutionMethod::Spectral ||
                        (method == EvolutionMethod::Auto && h.n() <= kSpectralKrylovSwitch);
  StateVector out{psi0.n, {}};
  out.amplitudes = spectral ? spectral_propagate(h.spectrum(), psi0.amplitudes, t)
                            : krylov_propagate(h, psi0.amplitudes, t, opts);
  return out;
}

void evolve_grid(const StateVector& psi0, const HamiltonianOperator& h,
                 const std::vector<double>& times,
                 const std::function<void(int, const StateVector&)>& visit,
                 EvolutionMethod method, const KrylovOptions& opts) {
  if (psi0.dim() != h.dim()) throw ConfigError("state dimension does not match");
  for (size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw ConfigError("time grid must be strictly increasing");
  }
  const bool spectral = method == EvolutionMethod::Spectral ||
                        (method == EvolutionMethod::Auto && h.n() <= kSpectralKrylovSwitch);
  StateVector psi{psi0.n, {}};
  if (spectral) {
    const SpectralDecomposition& sd = h.spectrum();
    for (size_t k = 0; k < times.size(); ++k) {
      psi.amplitudes = spectral_propagate(sd, psi0.amplitudes, times[k]);
      visit(static_cast<int>(k), psi);
    }
  } else {
    psi = psi0;
    double t_prev = 0.0;
    for (size_t k = 0; k < times.size(); ++k) {
      psi.amplitudes = krylov_propagate(h, std::move(psi.amplitudes), times[k] - t_prev, opts);
      t_prev = times[k];
      visit(static_cast<int>(k), psi);
    }
  }
}

std::vector<double> default_time_grid() {
  std::vector<double> times;
  times.reserve(51);
  times.push_back(0.0);
  const double lo = std::log10(0.01);
  const double hi = std::log10(10.0);
  for (int k = 0; k < 50; ++k) {
    times.push_back(std::pow(10.0, lo + (hi - lo) * k / 49.0));
  }
  return times;
}

}  // namespace mblsim
