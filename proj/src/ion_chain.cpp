#include "mblsim/ion_chain.hpp"

#include <cmath>
#include <string>

#include "mblsim/errors.hpp"
#include "mblsim/spectrum.hpp"

namespace mblsim {

namespace {

// Gradient of sum u_i^2/2 + sum_{i<j} 1/|u_i - u_j| for ordered positions.
Eigen::VectorXd chain_force(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd g = u;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = u(i) - u(j);
      g(i) -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  }
  return g;
}

Eigen::MatrixXd chain_hessian(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = std::abs(u(i) - u(j));
      const double c = 2.0 / (d * d * d);
      h(i, i) += c;
      h(i, j) -= c;
    }
  }
  return h;
}

}  // namespace

Eigen::VectorXd equilibrium_positions(int n) {
  if (n < 1) throw ConfigError("ion count must be at least 1");
  if (n == 1) return Eigen::VectorXd::Zero(1);

  // Uniform-spacing ansatz; the length scale only needs to be roughly right
  // for the damped Newton iteration to contract.
  const double spacing = 2.0 * std::pow(n, -0.56) * 1.75;
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = spacing * (i - 0.5 * (n - 1));

  const int max_iter = 500;
  double residual = chain_force(u).cwiseAbs().maxCoeff();
  for (int iter = 0; iter < max_iter; ++iter) {
    if (residual < 1e-12) {
      return u;
    }
    const Eigen::VectorXd g = chain_force(u);
    const Eigen::VectorXd step = chain_hessian(u).ldlt().solve(g);
    double damping = 1.0;
    for (int k = 0; k < 60; ++k) {
      Eigen::VectorXd trial = u - damping * step;
      // Reject steps that reorder ions; the potential diverges at crossings.
      bool ordered = true;
      for (int i = 0; i + 1 < n; ++i) {
        if (trial(i) >= trial(i + 1)) {
          ordered = false;
          break;
        }
      }
      if (ordered) {
        const double trial_residual = chain_force(trial).cwiseAbs().maxCoeff();
        if (trial_residual < residual || damping < 1e-6) {
          u = trial;
          residual = trial_residual;
          break;
        }
      }
      damping *= 0.5;
    }
  }
  if (residual < 1e-12) return u;
  throw ConvergenceError("equilibrium positions did not converge after 500 iterations; "
                         "final residual " + std::to_string(residual));
}

NormalModes transverse_modes(const Eigen::VectorXd& positions, double anisotropy) {
  const int n = static_cast<int>(positions.size());
  if (n < 1) throw ConfigError("need at least one ion");
  if (anisotropy <= 0.0) throw ConfigError("anisotropy must be positive");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const double a2 = anisotropy * anisotropy;
  for (int i = 0; i < n; ++i) {
    a(i, i) = a2;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = std::abs(positions(i) - positions(j));
      const double c = 1.0 / (d * d * d);
      a(i, i) -= c;
      a(i, j) = c;
    }
  }

  SymEig eig = sym_eig(a);
  for (int m = 0; m < n; ++m) {
    if (eig.eigenvalues(m) <= 0.0) {
      throw ZigZagInstabilityError(
          "transverse mode " + std::to_string(m + 1) + " of " + std::to_string(n) +
          " has nonpositive stiffness " + std::to_string(eig.eigenvalues(m)) +
          "; increase the trap anisotropy");
    }
    // Fix the eigenvector sign so the mode matrix is reproducible.
    int imax = 0;
    eig.eigenvectors.col(m).cwiseAbs().maxCoeff(&imax);
    if (eig.eigenvectors(imax, m) < 0) eig.eigenvectors.col(m) *= -1.0;
  }

  NormalModes modes;
  modes.positions = positions;
  modes.mode_matrix = eig.eigenvectors;
  modes.frequencies = eig.eigenvalues.cwiseSqrt();
  return modes;
}

}  // namespace mblsim
