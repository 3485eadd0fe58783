#pragma once

#include <Eigen/Dense>

namespace mblsim {

// Dense real-symmetric eigensolver behind a single switch point: LAPACKE
// dsyevd when available, Eigen's SelfAdjointEigenSolver otherwise. BLAS is
// pinned to one thread; parallelism lives at the realization level.

struct SymEig {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns
};

SymEig sym_eig(const Eigen::MatrixXd& a);
Eigen::VectorXd sym_eigvals(const Eigen::MatrixXd& a);

}  // namespace mblsim
