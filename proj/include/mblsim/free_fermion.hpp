#pragma once

#include <Eigen/Dense>

#include "mblsim/model.hpp"
#include "mblsim/observables.hpp"

namespace mblsim {

// Non-interacting control: the string phases of the fermionized spin model
// are frozen at their initial-state values, which turns the couplings into
// quadratic long-range hopping and pairing. Occupation convention:
// spin up = empty mode, n_j = (1 - sigma_j^z)/2, so the frozen phases are
// theta_j = pi * (number of occupied sites left of j in the initial state)
// and every sign factor e^{i theta} is +-1.
struct BdgHamiltonian {
  Eigen::MatrixXd hopping;      // symmetric, diagonal -(B + D_i)
  Eigen::MatrixXd pairing;      // antisymmetric
  Eigen::VectorXi phase_signs;  // e^{i theta_j} per site

  int n() const { return static_cast<int>(hopping.rows()); }
  void validate() const;
};

BdgHamiltonian build_bdg(const ModelSpec& spec, const InitialPattern& pattern);

// Two-point functions g = <c_i^dag c_j>, f = <c_i c_j>.
struct CovarianceState {
  Eigen::MatrixXcd g;
  Eigen::MatrixXcd f;

  int n() const { return static_cast<int>(g.rows()); }
  // Largest excursion of the 2N x 2N correlation spectrum outside [0, 1].
  double physicality_error() const;
};

// Product state along z: g diagonal with n_i = (1 - s_i)/2, f = 0.
CovarianceState init_covariance(const InitialPattern& pattern);

// Heisenberg evolution of (g, f) by the 2N x 2N propagator, diagonalized
// once and evaluated at arbitrary t.
class BdgPropagator {
 public:
  explicit BdgPropagator(const BdgHamiltonian& bdg);

  CovarianceState evolve(const CovarianceState& initial, double t) const;
  double energy(const CovarianceState& state) const;

 private:
  int n_;
  Eigen::MatrixXd a_;        // hopping block
  Eigen::MatrixXd b_;        // pairing block
  Eigen::MatrixXcd modes_;   // orthogonal eigenvectors of the 2N x 2N matrix
  Eigen::VectorXd omega_;
};

CovarianceState evolve_covariance(const CovarianceState& state, const BdgHamiltonian& bdg,
                                  double t);

struct FreeFermionObservables {
  Eigen::VectorXd sz;  // 1 - 2 <n_i>
  Eigen::MatrixXd zz;  // Wick-factorized <sz_i sz_j>, unit diagonal
  double f_q = 0.0;
};

FreeFermionObservables ff_observables(const CovarianceState& state);

}  // namespace mblsim
