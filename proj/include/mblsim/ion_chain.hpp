#pragma once

#include <Eigen/Dense>

namespace mblsim {

// Trap parameters expressed in units of the axial frequency omega_z: the
// anisotropy is omega_x/omega_z and transverse mode frequencies come out in
// the same units. Rabi, recoil and beatnote values must share one consistent
// unit system with the mode frequencies.
struct TrapSpec {
  int ion_count = 2;
  double anisotropy = 10.0;        // omega_x / omega_z
  double rabi_frequency = 1.0;     // Omega
  double recoil_frequency = 1.0;   // omega_R
  double beatnote_detuning = 0.0;  // mu
  double resonance_margin = 1e-3;  // reject |mu - omega_m| <= margin * omega_m

  void validate() const;  // throws ConfigError / ZigZagInstabilityError / ResonanceError
};

struct NormalModes {
  Eigen::VectorXd positions;    // dimensionless equilibrium coordinates, ascending
  Eigen::MatrixXd mode_matrix;  // b(i, m), orthonormal columns, modes ascending in frequency
  Eigen::VectorXd frequencies;  // omega_m in units of omega_z

  int n() const { return static_cast<int>(positions.size()); }
};

// Stationary point of the dimensionless chain potential
//   sum_i u_i^2 / 2 + sum_{i<j} 1/|u_i - u_j|,
// found by damped Newton iteration from a uniformly spaced start.
// Residual force per ion < 1e-12 or ConvergenceError.
Eigen::VectorXd equilibrium_positions(int n);

// Eigendecomposition of the transverse Hessian: diagonal entries
// (omega_x/omega_z)^2 - sum_{j!=i} 1/|u_i-u_j|^3, off-diagonal +1/|u_i-u_j|^3.
// Frequencies are omega_z * sqrt(eigenvalue); any eigenvalue <= 0 means the
// linear chain is unstable and throws ZigZagInstabilityError.
NormalModes transverse_modes(const Eigen::VectorXd& positions, double anisotropy);

}  // namespace mblsim
