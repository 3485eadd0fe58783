#pragma once

#include <Eigen/Dense>
#include <variant>

#include "mblsim/ion_chain.hpp"

namespace mblsim {

struct PowerLawRecipe {
  double j_max = 1.0;
  double alpha = 1.13;
};

struct KacPowerLawRecipe {
  double j = 1.0;
  double alpha = 1.13;
};

struct NormalModeRecipe {
  TrapSpec trap;
  double scale = 1.0;  // user-supplied conversion to physical units
};

// Raw matrix without a generating recipe.
struct InlineCouplings {
  Eigen::MatrixXd values;
};

using CouplingProvenance =
    std::variant<PowerLawRecipe, KacPowerLawRecipe, NormalModeRecipe, InlineCouplings>;

// Symmetric spin-spin couplings with zero diagonal. Symmetry and the zero
// diagonal are asserted on construction.
class CouplingMatrix {
 public:
  CouplingMatrix(Eigen::MatrixXd values, CouplingProvenance provenance);

  int n() const { return static_cast<int>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }
  const CouplingProvenance& provenance() const { return provenance_; }
  double j(int i, int j) const { return values_(i - 1, j - 1); }  // 1-based sites
  double max_abs() const;

 private:
  Eigen::MatrixXd values_;
  CouplingProvenance provenance_;
};

// J_ij = j_max / |i-j|^alpha.
CouplingMatrix power_law_couplings(int n, double j_max, double alpha);

// Mean-interaction normalization factor (N-1)^{-1} sum_{i<j} |i-j|^{-alpha}.
double kac_norm(int n, double alpha);

// J_ij = j * kac_norm(n, alpha)^{-1} * |i-j|^{-alpha}.
CouplingMatrix kac_normalized_couplings(int n, double j, double alpha);

// J_ij = Omega^2 omega_R sum_m b_im b_jm / (mu^2 - omega_m^2).
CouplingMatrix coupling_from_modes(const TrapSpec& trap);
CouplingMatrix coupling_from_modes(const TrapSpec& trap, const NormalModes& modes);

CouplingMatrix coupling_from_matrix(Eigen::MatrixXd values);

// Rebuild a matrix from its recipe; inline recipes must match n.
CouplingMatrix build_couplings(const CouplingProvenance& provenance, int n);

struct AlphaFit {
  double j_max = 0.0;
  double alpha = 0.0;
};

// Least-squares fit of log J vs log distance, averaging couplings over
// equal-distance pairs first and weighting each distance equally.
// drop_edge_ions repeats the fit with the first and last ion removed.
AlphaFit fit_alpha(const CouplingMatrix& couplings, bool drop_edge_ions = false);

}  // namespace mblsim
