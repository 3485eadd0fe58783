#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mblsim/hamiltonian.hpp"

namespace mblsim {

// Consecutive differences E_{n+1} - E_n of an ascending spectrum.
std::vector<double> level_spacings(const Eigen::VectorXd& eigenvalues);

struct RStatistic {
  std::vector<double> r_values;  // each in [0, 1]
  double mean = 0.0;
  int skipped = 0;  // pairs with max gap below 1e-12 * spectral width
};

// Adjacent-gap ratio r_n = min(d_n, d_{n-1}) / max(d_n, d_{n-1}).
// Poisson spectra give <r> = 2 ln 2 - 1 ~ 0.386; the orthogonal random-matrix
// class gives <r> ~ 0.53. Needs at least 3 levels.
RStatistic r_statistic(const Eigen::VectorXd& eigenvalues);

// Spacings pooled across realizations, each spectrum rescaled by its own mean
// spacing before pooling; r values are collected alongside.
struct SpacingEnsemble {
  std::vector<double> spacings;  // s = delta / <delta>, pooled
  std::vector<double> r_values;
  std::vector<double> per_realization_mean_r;
  int realization_count = 0;
  int skipped = 0;

  void add_spectrum(const Eigen::VectorXd& eigenvalues);
  double mean_r() const;          // over pooled r values
  double stderr_mean_r() const;   // over per-realization means
};

struct SpacingHistogram {
  std::vector<double> edges;              // size bins + 1
  std::vector<double> density;            // normalized to unit mass over all spacings
  std::vector<double> poisson_reference;  // exp(-s) at bin centers
  std::vector<long> counts;
  long total = 0;  // includes overflow beyond the last edge
};

SpacingHistogram spacing_histogram(const SpacingEnsemble& ensemble, int bins,
                                   double s_max = 5.0);

struct GofTest {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

// Chi-squared goodness of fit of the pooled spacings against exp(-s),
// with the overflow tail folded into a final open bin.
GofTest poisson_spacing_gof(const SpacingHistogram& histogram);

// Solves Tr[H e^{-beta H}] / Tr[e^{-beta H}] = E0 for beta by bisection;
// the thermal energy is strictly decreasing in beta. E0 at or outside the
// spectral edges has no finite solution (ConfigError).
double eth_beta(const Eigen::VectorXd& eigenvalues, double energy_e0);
double eth_beta(const HamiltonianOperator& h, double energy_e0);

struct ThermalPrediction {
  double beta = 0.0;
  Eigen::Matrix2cd rdm;
};

// Single-site reduced density matrix of the Gibbs operator,
// Tr_B[e^{-beta H}] / Tr[e^{-beta H}], computed from the cached spectrum.
ThermalPrediction eth_rdm(const HamiltonianOperator& h, double beta, int site);

}  // namespace mblsim
