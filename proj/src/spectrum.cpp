#include "mblsim/spectrum.hpp"

#include <stdexcept>

#ifdef MBLSIM_HAVE_LAPACKE
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace {
// Parallelism lives at the realization level; a threaded BLAS underneath
// would oversubscribe and break bitwise reproducibility across worker counts.
struct BlasSingleThread {
  BlasSingleThread() {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  }
} blas_single_thread_init;
}  // namespace
#endif

namespace mblsim {

SymEig sym_eig(const Eigen::MatrixXd& a) {
  SymEig out;
#ifdef MBLSIM_HAVE_LAPACKE
  const lapack_int n = static_cast<lapack_int>(a.rows());
  out.eigenvectors = a;
  out.eigenvalues.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         out.eigenvectors.data(), n, out.eigenvalues.data());
  if (info != 0) throw std::runtime_error("dsyevd failed with info " + std::to_string(info));
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
#endif
  return out;
}

Eigen::VectorXd sym_eigvals(const Eigen::MatrixXd& a) {
#ifdef MBLSIM_HAVE_LAPACKE
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0) throw std::runtime_error("dsyevd failed with info " + std::to_string(info));
  return w;
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return es.eigenvalues();
#endif
}

}  // namespace mblsim
