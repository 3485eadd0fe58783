#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mblsim {

// Basis convention, fixed project-wide: site i (1-based) maps to bit i-1 of
// the basis index, and bit value 1 means sigma_z = +1 (spin up). All site
// arguments in the public API are 1-based.
using Amplitudes = Eigen::VectorXcd;

struct StateVector {
  int n = 0;
  Amplitudes amplitudes;

  long dim() const { return amplitudes.size(); }
};

enum class Axis { X, Z };

struct SiteSpec {
  Axis axis = Axis::Z;
  int sign = +1;  // +1 / -1 eigenstate of the chosen Pauli
};

StateVector product_state(const std::vector<SiteSpec>& pattern);

// |up down up down ...> along z, site 1 up.
StateVector neel_state(int n);

// z-basis product state from a vector of signs (+1 up, -1 down).
StateVector z_product_state(const std::vector<int>& signs);

double expectation_pauli(const StateVector& psi, int site, char axis);  // 'x','y','z'

// <sigma_i^z sigma_j^z>; i == j returns 1.
double zz_correlator(const StateVector& psi, int i, int j);

Eigen::VectorXd all_sz(const StateVector& psi);

// Full <sigma_i^z sigma_j^z> matrix with unit diagonal.
Eigen::MatrixXd all_zz(const StateVector& psi);

// Partial trace over all sites but one. Row/column 0 is spin up.
Eigen::Matrix2cd reduced_density_matrix(const StateVector& psi, int site);

double trace_distance(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);

}  // namespace mblsim
