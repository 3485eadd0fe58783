#include "mblsim/hamiltonian.hpp"

#include <string>

#include "mblsim/errors.hpp"
#include "mblsim/spectrum.hpp"

namespace mblsim {

HamiltonianOperator::HamiltonianOperator(ModelSpec spec, int capacity)
    : spec_(std::move(spec)) {
  spec_.validate();
  const int n = spec_.n();
  if (n < 1) throw ConfigError("empty model");
  if (n > capacity) {
    throw CapacityError("chain of " + std::to_string(n) + " sites exceeds the dense cap of " +
                        std::to_string(capacity) +
                        "; use the free-fermion module for larger chains");
  }

  const long dim = 1L << n;
  diag_.resize(dim);
  const auto& d = spec_.disorder.values;
  const double b = spec_.field_b;
  for (long s = 0; s < dim; ++s) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double h = 0.5 * (b + d[i]);
      e += ((s >> i) & 1) ? h : -h;
    }
    diag_(s) = e;
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double jij = spec_.couplings.values()(i, j);
      if (jij != 0.0) pairs_.push_back({(1L << i) | (1L << j), jij});
    }
  }
}

void HamiltonianOperator::apply(const Amplitudes& x, Amplitudes& y) const {
  const long dim = this->dim();
  if (x.size() != dim) throw ConfigError("state dimension does not match the Hamiltonian");
  y.resize(dim);
  for (long s = 0; s < dim; ++s) y(s) = diag_(s) * x(s);
  for (const PairTerm& p : pairs_) {
    for (long s = 0; s < dim; ++s) y(s) += p.j * x(s ^ p.mask);
  }
}

Amplitudes HamiltonianOperator::apply(const Amplitudes& x) const {
  Amplitudes y;
  apply(x, y);
  return y;
}

const Eigen::MatrixXd& HamiltonianOperator::dense() const {
  std::call_once(dense_once_, [this] {
    const long dim = this->dim();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    h.diagonal() = diag_;
    for (const PairTerm& p : pairs_) {
      for (long s = 0; s < dim; ++s) h(s ^ p.mask, s) += p.j;
    }
    dense_ = std::move(h);
  });
  return *dense_;
}

const SpectralDecomposition& HamiltonianOperator::spectrum() const {
  std::call_once(spectrum_once_, [this] {
    SymEig eig = sym_eig(dense());
    spectrum_ = SpectralDecomposition{std::move(eig.eigenvalues), std::move(eig.eigenvectors)};
  });
  return *spectrum_;
}

Eigen::VectorXd HamiltonianOperator::eigenvalues_only() const {
  if (spectrum_) return spectrum_->eigenvalues;
  return sym_eigvals(dense());
}

double HamiltonianOperator::expectation(const StateVector& psi) const {
  return std::real(psi.amplitudes.dot(apply(psi.amplitudes)));
}

HamiltonianOperator build_hamiltonian(ModelSpec spec, int capacity) {
  return HamiltonianOperator(std::move(spec), capacity);
}

const SpectralDecomposition& full_spectrum(const HamiltonianOperator& h) {
  return h.spectrum();
}

}  // namespace mblsim
