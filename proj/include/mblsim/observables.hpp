#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mblsim/state.hpp"

namespace mblsim {

// z-basis signature s_i of the initial product state.
struct InitialPattern {
  std::vector<int> signs;  // entries +1 / -1

  static InitialPattern neel(int n);
  int n() const { return static_cast<int>(signs.size()); }
  void validate() const;
};

struct TimeSeries {
  std::vector<double> times;  // strictly increasing
  Eigen::MatrixXd values;     // row per time, one column per component
  std::string label;

  int components() const { return static_cast<int>(values.cols()); }
  void validate() const;
};

// Normalized Hamming distance 1/2 - (1/2N) sum_i s_i <sigma_i^z(t)>. For a
// z-product initial state this equals the two-time correlator form because
// sigma_i^z(0) acts on |psi0> as the scalar s_i.
double hamming_distance(const StateVector& psi_t, const InitialPattern& pattern);
double hamming_from_sz(const Eigen::VectorXd& sz, const InitialPattern& pattern);

// QFI of the staggered magnetization for a pure state, normalized per spin:
// f_Q = F_Q / N with
// F_Q = sum_{ij} (-1)^{i+j} <sz_i sz_j> - [sum_i (-1)^i <sz_i>]^2.
// f_Q > 1 witnesses multipartite entanglement.
double qfi_staggered(const StateVector& psi);
double qfi_from_correlations(const Eigen::VectorXd& sz, const Eigen::MatrixXd& zz);

struct TimeAverage {
  Eigen::VectorXd mean;     // per component
  Eigen::VectorXd stderr_;  // standard error across grid points
  int points = 0;
};

// Arithmetic mean over grid points with t in [t_min, t_max].
TimeAverage time_average(const TimeSeries& series, double t_min, double t_max);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_half_width = 0.0;  // 95% confidence half-width on the slope
  int points = 0;

  double ci_low() const { return slope - ci_half_width; }
  double ci_high() const { return slope + ci_half_width; }
};

// Least-squares slope of value vs ln(t) over the window; needs >= 5 points.
SlopeFit log_time_slope(const TimeSeries& series, double t_lo, double t_hi,
                        int component = 0);

}  // namespace mblsim
