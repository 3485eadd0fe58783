#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "mblsim/model.hpp"
#include "mblsim/state.hpp"

namespace mblsim {

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthogonal, columns ordered with eigenvalues
};

// H = sum_{i<j} J_ij sx_i sx_j + (B/2) sum_i sz_i + sum_i (D_i/2) sz_i.
// Real symmetric in the z product basis: the coupling terms flip two bits
// with a real amplitude and the field terms are diagonal. The dense matrix
// and the full spectrum are materialized lazily and cached; the matrix-free
// apply is always available.
class HamiltonianOperator {
 public:
  explicit HamiltonianOperator(ModelSpec spec, int capacity = default_capacity());

  static int default_capacity() { return 14; }

  int n() const { return spec_.n(); }
  long dim() const { return 1L << n(); }
  const ModelSpec& spec() const { return spec_; }
  const Eigen::VectorXd& diagonal() const { return diag_; }

  void apply(const Amplitudes& x, Amplitudes& y) const;
  Amplitudes apply(const Amplitudes& x) const;

  const Eigen::MatrixXd& dense() const;
  const SpectralDecomposition& spectrum() const;
  Eigen::VectorXd eigenvalues_only() const;  // not cached, no eigenvectors

  double expectation(const StateVector& psi) const;

 private:
  struct PairTerm {
    long mask;
    double j;
  };

  ModelSpec spec_;
  Eigen::VectorXd diag_;
  std::vector<PairTerm> pairs_;

  mutable std::once_flag dense_once_, spectrum_once_;
  mutable std::optional<Eigen::MatrixXd> dense_;
  mutable std::optional<SpectralDecomposition> spectrum_;
};

// Throws CapacityError above the cap (default 14 sites) pointing at the
// free-fermion module for larger chains.
HamiltonianOperator build_hamiltonian(ModelSpec spec,
                                      int capacity = HamiltonianOperator::default_capacity());

// Full Hermitian eigendecomposition, eigenvalues ascending.
const SpectralDecomposition& full_spectrum(const HamiltonianOperator& h);

}  // namespace mblsim
