#include <cmath>

#include "doctest.h"
#include "mblsim/errors.hpp"
#include "mblsim/ion_chain.hpp"

using namespace mblsim;

namespace {

double chain_potential(const Eigen::VectorXd& u) {
  double v = 0.5 * u.squaredNorm();
  for (int i = 0; i < u.size(); ++i) {
    for (int j = i + 1; j < u.size(); ++j) v += 1.0 / std::abs(u(i) - u(j));
  }
  return v;
}

// Independent check: coordinate-descent line minimization from the Newton
// solution must not move it.
double coordinate_descent_shift(Eigen::VectorXd u) {
  double shift = 0.0;
  for (int sweep = 0; sweep < 30; ++sweep) {
    for (int i = 0; i < u.size(); ++i) {
      double step = 1e-3;
      while (step > 1e-11) {
        const double here = chain_potential(u);
        Eigen::VectorXd up = u, dn = u;
        up(i) += step;
        dn(i) -= step;
        if (chain_potential(up) < here) {
          u = up;
          shift += step;
        } else if (chain_potential(dn) < here) {
          u = dn;
          shift += step;
        } else {
          step *= 0.5;
        }
      }
    }
  }
  return shift;
}

}  // namespace

TEST_CASE("single ion sits at the trap center") {
  const Eigen::VectorXd u = equilibrium_positions(1);
  REQUIRE(u.size() == 1);
  CHECK(u(0) == 0.0);
}

TEST_CASE("two ions at the closed-form positions") {
  const Eigen::VectorXd u = equilibrium_positions(2);
  const double expected = std::cbrt(0.25);
  CHECK(u(0) == doctest::Approx(-expected).epsilon(1e-10));
  CHECK(u(1) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("three ions at the closed-form positions") {
  const Eigen::VectorXd u = equilibrium_positions(3);
  const double expected = std::cbrt(1.25);
  CHECK(u(0) == doctest::Approx(-expected).epsilon(1e-10));
  CHECK(std::abs(u(1)) < 1e-12);
  CHECK(u(2) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("independent minimization confirms the stationary point") {
  for (int n : {2, 3, 5}) {
    const Eigen::VectorXd u = equilibrium_positions(n);
    CHECK(coordinate_descent_shift(u) < 1e-6);
  }
}

TEST_CASE("positions are sorted, centered and converged for larger chains") {
  for (int n : {4, 7, 10, 16, 30}) {
    const Eigen::VectorXd u = equilibrium_positions(n);
    REQUIRE(u.size() == n);
    CHECK(std::abs(u.sum()) < 1e-10);
    for (int i = 0; i + 1 < n; ++i) CHECK(u(i) < u(i + 1));
    // Residual force per ion.
    for (int i = 0; i < n; ++i) {
      double f = u(i);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = u(i) - u(j);
        f -= (d > 0 ? 1.0 : -1.0) / (d * d);
      }
      CHECK(std::abs(f) < 1e-12);
    }
  }
}

TEST_CASE("highest mode is center-of-mass at the transverse frequency") {
  for (int n : {2, 5, 10}) {
    const double anisotropy = 12.0;
    const NormalModes modes = transverse_modes(equilibrium_positions(n), anisotropy);
    const int top = n - 1;
    CHECK(modes.frequencies(top) == doctest::Approx(anisotropy).epsilon(1e-10));
    const double expected_component = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
      CHECK(modes.mode_matrix(i, top) == doctest::Approx(expected_component).epsilon(1e-10));
    }
  }
}

TEST_CASE("two-ion rocking mode from the explicit 2x2 eigenproblem") {
  const Eigen::VectorXd u = equilibrium_positions(2);
  const NormalModes modes = transverse_modes(u, 10.0);
  const double d3 = std::pow(2.0 * std::cbrt(0.25), 3);
  // Hessian [[100 - 1/d^3, 1/d^3], [1/d^3, 100 - 1/d^3]]: rocking eigenvalue
  // is 100 - 2/d^3, center-of-mass eigenvalue is 100.
  CHECK(modes.frequencies(0) == doctest::Approx(std::sqrt(100.0 - 2.0 / d3)).epsilon(1e-12));
  CHECK(modes.frequencies(1) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("mode matrix is orthonormal") {
  const NormalModes modes = transverse_modes(equilibrium_positions(8), 9.0);
  const Eigen::MatrixXd gram =
      modes.mode_matrix.transpose() * modes.mode_matrix - Eigen::MatrixXd::Identity(8, 8);
  CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("modes satisfy the eigenproblem against a rebuilt Hessian") {
  const int n = 10;
  const double anisotropy = 8.0;
  const Eigen::VectorXd u = equilibrium_positions(n);
  const NormalModes modes = transverse_modes(u, anisotropy);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = anisotropy * anisotropy;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double inv_d3 = 1.0 / std::pow(std::abs(u(i) - u(j)), 3);
      a(i, i) -= inv_d3;
      a(i, j) = inv_d3;
    }
  }
  for (int m = 0; m < n; ++m) {
    const double lambda = modes.frequencies(m) * modes.frequencies(m);
    const Eigen::VectorXd residual = a * modes.mode_matrix.col(m) - lambda * modes.mode_matrix.col(m);
    CHECK(residual.norm() < 1e-9);
  }
}

TEST_CASE("weak transverse confinement triggers the zig-zag error") {
  // 10 ions at anisotropy 3 is well below the linear-chain threshold.
  CHECK_THROWS_AS(transverse_modes(equilibrium_positions(10), 3.0), ZigZagInstabilityError);
}
