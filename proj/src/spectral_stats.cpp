#include "mblsim/spectral_stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "mblsim/errors.hpp"

namespace mblsim {

std::vector<double> level_spacings(const Eigen::VectorXd& eigenvalues) {
  const long n = eigenvalues.size();
  if (n < 2) throw ConfigError("need at least 2 levels for spacings");
  std::vector<double> d(n - 1);
  for (long k = 0; k + 1 < n; ++k) {
    d[k] = eigenvalues(k + 1) - eigenvalues(k);
    if (d[k] < 0) throw ConfigError("eigenvalues must be sorted ascending");
  }
  return d;
}

RStatistic r_statistic(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() < 3) throw ConfigError("need at least 3 levels for the gap ratio");
  const std::vector<double> d = level_spacings(eigenvalues);
  const double width = eigenvalues(eigenvalues.size() - 1) - eigenvalues(0);
  const double floor = 1e-12 * width;

  RStatistic rs;
  rs.r_values.reserve(d.size() - 1);
  double sum = 0.0;
  for (size_t k = 0; k + 1 < d.size(); ++k) {
    const double hi = std::max(d[k], d[k + 1]);
    if (hi < floor) {
      ++rs.skipped;
      continue;
    }
    const double r = std::min(d[k], d[k + 1]) / hi;
    rs.r_values.push_back(r);
    sum += r;
  }
  rs.mean = rs.r_values.empty() ? 0.0 : sum / rs.r_values.size();
  return rs;
}

void SpacingEnsemble::add_spectrum(const Eigen::VectorXd& eigenvalues) {
  const std::vector<double> d = level_spacings(eigenvalues);
  double mean_spacing = 0.0;
  for (double v : d) mean_spacing += v;
  mean_spacing /= d.size();
  for (double v : d) spacings.push_back(v / mean_spacing);

  const RStatistic rs = r_statistic(eigenvalues);
  r_values.insert(r_values.end(), rs.r_values.begin(), rs.r_values.end());
  per_realization_mean_r.push_back(rs.mean);
  skipped += rs.skipped;
  ++realization_count;
}

double SpacingEnsemble::mean_r() const {
  if (r_values.empty()) return 0.0;
  double s = 0.0;
  for (double r : r_values) s += r;
  return s / r_values.size();
}

double SpacingEnsemble::stderr_mean_r() const {
  const size_t m = per_realization_mean_r.size();
  if (m < 2) return 0.0;
  double mean = 0.0;
  for (double r : per_realization_mean_r) mean += r;
  mean /= m;
  double var = 0.0;
  for (double r : per_realization_mean_r) var += (r - mean) * (r - mean);
  var /= (m - 1);
  return std::sqrt(var / m);
}

SpacingHistogram spacing_histogram(const SpacingEnsemble& ensemble, int bins, double s_max) {
  if (bins < 2) throw ConfigError("need at least 2 histogram bins");
  if (s_max <= 0) throw ConfigError("histogram range must be positive");
  SpacingHistogram h;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = s_max * b / bins;
  h.counts.assign(bins, 0);
  h.total = static_cast<long>(ensemble.spacings.size());
  const double bin_width = s_max / bins;
  for (double s : ensemble.spacings) {
    const int b = static_cast<int>(s / bin_width);
    if (b >= 0 && b < bins) ++h.counts[b];
    // Overflow stays in the total so the density normalization is global.
  }
  h.density.resize(bins);
  h.poisson_reference.resize(bins);
  for (int b = 0; b < bins; ++b) {
    h.density[b] = h.total > 0 ? h.counts[b] / (h.total * bin_width) : 0.0;
    h.poisson_reference[b] = std::exp(-0.5 * (h.edges[b] + h.edges[b + 1]));
  }
  return h;
}

GofTest poisson_spacing_gof(const SpacingHistogram& histogram) {
  const int bins = static_cast<int>(histogram.counts.size());
  GofTest gof;
  long overflow = histogram.total;
  for (long c : histogram.counts) overflow -= c;

  // Expected multinomial counts under density exp(-s), with the region past
  // the last edge folded into one open tail cell.
  double chi2 = 0.0;
  int cells = 0;
  for (int b = 0; b < bins; ++b) {
    const double p = std::exp(-histogram.edges[b]) - std::exp(-histogram.edges[b + 1]);
    const double expected = histogram.total * p;
    if (expected < 1e-12) continue;
    const double diff = histogram.counts[b] - expected;
    chi2 += diff * diff / expected;
    ++cells;
  }
  const double p_tail = std::exp(-histogram.edges[bins]);
  const double expected_tail = histogram.total * p_tail;
  if (expected_tail > 1e-12) {
    const double diff = overflow - expected_tail;
    chi2 += diff * diff / expected_tail;
    ++cells;
  }
  gof.chi2 = chi2;
  gof.dof = std::max(1, cells - 1);
  const boost::math::chi_squared dist(gof.dof);
  gof.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  return gof;
}

namespace {

// Thermal energy sum E e^{-beta E} / sum e^{-beta E}, shifted for stability.
double thermal_energy(const Eigen::VectorXd& ev, double beta) {
  const double shift = beta >= 0 ? ev(0) : ev(ev.size() - 1);
  double z = 0.0, ez = 0.0;
  for (long k = 0; k < ev.size(); ++k) {
    const double w = std::exp(-beta * (ev(k) - shift));
    z += w;
    ez += ev(k) * w;
  }
  return ez / z;
}

}  // namespace

double eth_beta(const Eigen::VectorXd& eigenvalues, double energy_e0) {
  const long dim = eigenvalues.size();
  if (dim < 2) throw ConfigError("need at least 2 levels");
  const double e_min = eigenvalues(0);
  const double e_max = eigenvalues(dim - 1);
  const double width = e_max - e_min;
  if (width <= 0) throw ConfigError("degenerate spectrum has no temperature scale");
  if (energy_e0 <= e_min || energy_e0 >= e_max) {
    throw ConfigError("target energy at or outside the spectral edges has no finite beta");
  }

  const double tolerance = 1e-10 * width;
  const double e_at_zero = thermal_energy(eigenvalues, 0.0);
  if (std::abs(energy_e0 - e_at_zero) <= tolerance) return 0.0;

  // The thermal energy is strictly decreasing in beta; check on a coarse grid
  // before trusting the bisection bracket.
  double prev = thermal_energy(eigenvalues, -64.0 / width);
  for (double b = -48.0; b <= 64.5; b += 16.0) {
    const double cur = thermal_energy(eigenvalues, b / width);
    if (cur > prev + tolerance) throw ConvergenceError("thermal energy is not decreasing");
    prev = cur;
  }

  double lo = 0.0, hi = 0.0;  // E(lo) > e0 > E(hi)
  if (energy_e0 < e_at_zero) {
    lo = 0.0;
    hi = 1.0 / width;
    while (thermal_energy(eigenvalues, hi) > energy_e0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12 / width) throw ConvergenceError("beta bracket expansion failed");
    }
  } else {
    hi = 0.0;
    lo = -1.0 / width;
    while (thermal_energy(eigenvalues, lo) < energy_e0) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e12 / width) throw ConvergenceError("beta bracket expansion failed");
    }
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double e_mid = thermal_energy(eigenvalues, mid);
    if (std::abs(e_mid - energy_e0) < tolerance) return mid;
    if (e_mid > energy_e0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("beta bisection did not reach the energy tolerance");
}

double eth_beta(const HamiltonianOperator& h, double energy_e0) {
  return eth_beta(h.spectrum().eigenvalues, energy_e0);
}

ThermalPrediction eth_rdm(const HamiltonianOperator& h, double beta, int site) {
  if (site < 1 || site > h.n()) throw ConfigError("site index out of range");
  if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
  ThermalPrediction out;
  out.beta = beta;
  if (beta == 0.0) {
    // Tr_B of the identity: exactly the maximally mixed state.
    out.rdm = 0.5 * Eigen::Matrix2cd::Identity();
    return out;
  }

  const SpectralDecomposition& sd = h.spectrum();
  const long dim = h.dim();
  const double shift = beta > 0 ? sd.eigenvalues(0) : sd.eigenvalues(dim - 1);
  Eigen::VectorXd half_weights(dim);
  double z = 0.0;
  for (long k = 0; k < dim; ++k) {
    const double w = std::exp(-beta * (sd.eigenvalues(k) - shift));
    z += w;
    half_weights(k) = std::sqrt(w);
  }
  // rho_A = V V^T restricted to the site block, V = U e^{-beta Lambda / 2}.
  const Eigen::MatrixXd v = sd.eigenvectors * half_weights.asDiagonal();
  const long mask = 1L << (site - 1);
  Eigen::Matrix2d rho = Eigen::Matrix2d::Zero();
  for (long s = 0; s < dim; ++s) {
    if (s & mask) continue;
    const auto row_dn = v.row(s);
    const auto row_up = v.row(s | mask);
    rho(0, 0) += row_up.dot(row_up);
    rho(0, 1) += row_up.dot(row_dn);
    rho(1, 1) += row_dn.dot(row_dn);
  }
  rho(1, 0) = rho(0, 1);
  out.rdm = (rho / z).cast<std::complex<double>>();
  return out;
}

}  // namespace mblsim
