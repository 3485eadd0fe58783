#include "mblsim/state.hpp"

#include <cmath>

#include "mblsim/errors.hpp"

namespace mblsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_site(const StateVector& psi, int site) {
  if (site < 1 || site > psi.n) throw ConfigError("site index out of range");
}

}  // namespace

StateVector product_state(const std::vector<SiteSpec>& pattern) {
  const int n = static_cast<int>(pattern.size());
  if (n < 1) throw ConfigError("empty product-state pattern");
  if (n > 30) throw ConfigError("state too large to materialize");
  for (const SiteSpec& s : pattern) {
    if (s.sign != 1 && s.sign != -1) throw ConfigError("pattern signs must be +1 or -1");
  }
  const long dim = 1L << n;
  StateVector psi{n, Amplitudes::Zero(dim)};
  // amp[b=1] and amp[b=0] per site; z states are basis vectors, x states
  // are (|up> +- |down>)/sqrt(2) with <sx> = sign.
  for (long s = 0; s < dim; ++s) {
    double a = 1.0;
    for (int i = 0; i < n; ++i) {
      const int bit = static_cast<int>((s >> i) & 1);
      const SiteSpec& p = pattern[i];
      if (p.axis == Axis::Z) {
        const int want = p.sign > 0 ? 1 : 0;
        if (bit != want) {
          a = 0.0;
          break;
        }
      } else {
        a *= (bit == 1) ? kInvSqrt2 : p.sign * kInvSqrt2;
      }
    }
    psi.amplitudes(s) = a;
  }
  return psi;
}

StateVector neel_state(int n) {
  std::vector<int> signs(n);
  for (int i = 0; i < n; ++i) signs[i] = (i % 2 == 0) ? +1 : -1;
  return z_product_state(signs);
}

StateVector z_product_state(const std::vector<int>& signs) {
  std::vector<SiteSpec> pattern(signs.size());
  for (size_t i = 0; i < signs.size(); ++i) pattern[i] = SiteSpec{Axis::Z, signs[i]};
  return product_state(pattern);
}

double expectation_pauli(const StateVector& psi, int site, char axis) {
  check_site(psi, site);
  const long mask = 1L << (site - 1);
  const long dim = psi.dim();
  double acc = 0.0;
  switch (axis) {
    case 'z':
      for (long s = 0; s < dim; ++s) {
        const double p = std::norm(psi.amplitudes(s));
        acc += (s & mask) ? p : -p;
      }
      return acc;
    case 'x':
      for (long s = 0; s < dim; ++s) {
        acc += std::real(std::conj(psi.amplitudes(s)) * psi.amplitudes(s ^ mask));
      }
      return acc;
    case 'y':
      // sy|down> = i|up>, sy|up> = -i|down>.
      for (long s = 0; s < dim; ++s) {
        if (s & mask) continue;
        acc += 2.0 * std::imag(std::conj(psi.amplitudes(s ^ mask)) * psi.amplitudes(s));
      }
      return acc;
    default:
      throw ConfigError("axis must be one of 'x', 'y', 'z'");
  }
}

double zz_correlator(const StateVector& psi, int i, int j) {
  check_site(psi, i);
  check_site(psi, j);
  if (i == j) return 1.0;
  const long mi = 1L << (i - 1);
  const long mj = 1L << (j - 1);
  double acc = 0.0;
  for (long s = 0; s < psi.dim(); ++s) {
    const double p = std::norm(psi.amplitudes(s));
    const int zi = (s & mi) ? 1 : -1;
    const int zj = (s & mj) ? 1 : -1;
    acc += zi * zj * p;
  }
  return acc;
}

Eigen::VectorXd all_sz(const StateVector& psi) {
  Eigen::VectorXd sz = Eigen::VectorXd::Zero(psi.n);
  for (long s = 0; s < psi.dim(); ++s) {
    const double p = std::norm(psi.amplitudes(s));
    for (int i = 0; i < psi.n; ++i) {
      sz(i) += ((s >> i) & 1) ? p : -p;
    }
  }
  return sz;
}

Eigen::MatrixXd all_zz(const StateVector& psi) {
  const int n = psi.n;
  Eigen::MatrixXd zz = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd signs(n);
  for (long s = 0; s < psi.dim(); ++s) {
    const double p = std::norm(psi.amplitudes(s));
    if (p == 0.0) continue;
    for (int i = 0; i < n; ++i) signs(i) = ((s >> i) & 1) ? 1.0 : -1.0;
    zz.selfadjointView<Eigen::Lower>().rankUpdate(signs, p);
  }
  zz = zz.selfadjointView<Eigen::Lower>();
  zz.diagonal().setOnes();
  return zz;
}

Eigen::Matrix2cd reduced_density_matrix(const StateVector& psi, int site) {
  check_site(psi, site);
  const long mask = 1L << (site - 1);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (long s = 0; s < psi.dim(); ++s) {
    if (s & mask) continue;  // enumerate environment states via the bit-cleared index
    const std::complex<double> a_dn = psi.amplitudes(s);
    const std::complex<double> a_up = psi.amplitudes(s | mask);
    rho(0, 0) += a_up * std::conj(a_up);
    rho(0, 1) += a_up * std::conj(a_dn);
    rho(1, 0) += a_dn * std::conj(a_up);
    rho(1, 1) += a_dn * std::conj(a_dn);
  }
  return rho;
}

double trace_distance(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  const Eigen::Matrix2cd d = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(d);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace mblsim
