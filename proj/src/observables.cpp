#include "mblsim/observables.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "mblsim/errors.hpp"

namespace mblsim {

InitialPattern InitialPattern::neel(int n) {
  InitialPattern p;
  p.signs.resize(n);
  for (int i = 0; i < n; ++i) p.signs[i] = (i % 2 == 0) ? +1 : -1;
  return p;
}

void InitialPattern::validate() const {
  if (signs.empty()) throw ConfigError("empty initial pattern");
  for (int s : signs) {
    if (s != 1 && s != -1) throw ConfigError("pattern signs must be +1 or -1");
  }
}

void TimeSeries::validate() const {
  if (static_cast<long>(times.size()) != values.rows()) {
    throw ConfigError("time series values do not match the grid");
  }
  for (size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw ConfigError("times must be strictly increasing");
  }
}

double hamming_from_sz(const Eigen::VectorXd& sz, const InitialPattern& pattern) {
  pattern.validate();
  const int n = pattern.n();
  if (sz.size() != n) throw ConfigError("pattern length does not match the state");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += pattern.signs[i] * sz(i);
  return 0.5 - acc / (2.0 * n);
}

double hamming_distance(const StateVector& psi_t, const InitialPattern& pattern) {
  return hamming_from_sz(all_sz(psi_t), pattern);
}

double qfi_from_correlations(const Eigen::VectorXd& sz, const Eigen::MatrixXd& zz) {
  const int n = static_cast<int>(sz.size());
  if (zz.rows() != n || zz.cols() != n) throw ConfigError("correlation matrix size mismatch");
  // Staggered sign for 1-based site i is (-1)^i.
  double corr = 0.0;
  double mag = 0.0;
  for (int i = 0; i < n; ++i) {
    const double si = (i % 2 == 0) ? -1.0 : 1.0;
    mag += si * sz(i);
    for (int j = 0; j < n; ++j) {
      const double sj = (j % 2 == 0) ? -1.0 : 1.0;
      corr += si * sj * zz(i, j);
    }
  }
  const double f_q_total = corr - mag * mag;
  return f_q_total / n;
}

double qfi_staggered(const StateVector& psi) {
  return qfi_from_correlations(all_sz(psi), all_zz(psi));
}

TimeAverage time_average(const TimeSeries& series, double t_min, double t_max) {
  series.validate();
  if (t_max < t_min) throw ConfigError("time window is empty");
  const int cols = series.components();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(cols);
  int count = 0;
  for (size_t k = 0; k < series.times.size(); ++k) {
    if (series.times[k] < t_min || series.times[k] > t_max) continue;
    sum += series.values.row(k).transpose();
    sumsq += series.values.row(k).transpose().cwiseAbs2();
    ++count;
  }
  if (count == 0) throw ConfigError("time window contains no grid points");
  TimeAverage avg;
  avg.points = count;
  avg.mean = sum / count;
  avg.stderr_ = Eigen::VectorXd::Zero(cols);
  if (count > 1) {
    for (int c = 0; c < cols; ++c) {
      const double var =
          std::max(0.0, (sumsq(c) - sum(c) * sum(c) / count) / (count - 1));
      avg.stderr_(c) = std::sqrt(var / count);
    }
  }
  return avg;
}

SlopeFit log_time_slope(const TimeSeries& series, double t_lo, double t_hi, int component) {
  series.validate();
  if (component < 0 || component >= series.components()) {
    throw ConfigError("component index out of range");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k];
    if (t < t_lo || t > t_hi || t <= 0.0) continue;
    const double x = std::log(t);
    const double y = series.values(k, component);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 5) throw ConfigError("slope fit window needs at least 5 grid points");

  const double denom = m * sxx - sx * sx;
  SlopeFit fit;
  fit.points = m;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;

  double ss_res = 0.0;
  for (size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k];
    if (t < t_lo || t > t_hi || t <= 0.0) continue;
    const double r = series.values(k, component) - (fit.intercept + fit.slope * std::log(t));
    ss_res += r * r;
  }
  const double var_slope = (ss_res / (m - 2)) * m / denom;
  const boost::math::students_t dist(m - 2);
  fit.ci_half_width = boost::math::quantile(dist, 0.975) * std::sqrt(std::max(0.0, var_slope));
  return fit;
}

}  // namespace mblsim
