#include <cmath>
#include <functional>

#include "doctest.h"
#include "mblsim/errors.hpp"
#include "mblsim/evolve.hpp"
#include "mblsim/observables.hpp"
#include "oracles.hpp"

using namespace mblsim;

namespace {

StateVector ghz_state(int n) {
  StateVector psi{n, Amplitudes::Zero(1L << n)};
  long neel = 0, anti = 0;
  for (int i = 0; i < n; i += 2) neel |= (1L << i);
  for (int i = 1; i < n; i += 2) anti |= (1L << i);
  psi.amplitudes(neel) = 1.0 / std::sqrt(2.0);
  psi.amplitudes(anti) = 1.0 / std::sqrt(2.0);
  return psi;
}

TimeSeries series_from(const std::vector<double>& ts,
                       const std::function<double(double)>& f) {
  TimeSeries s;
  s.times = ts;
  s.values.resize(static_cast<long>(ts.size()), 1);
  for (size_t k = 0; k < ts.size(); ++k) s.values(k, 0) = f(ts[k]);
  s.label = "test";
  return s;
}

}  // namespace

TEST_CASE("Hamming distance is zero at the initial state") {
  const InitialPattern p = InitialPattern::neel(7);
  CHECK(hamming_distance(neel_state(7), p) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("fully flipped state has Hamming distance one") {
  InitialPattern p = InitialPattern::neel(6);
  std::vector<int> flipped = p.signs;
  for (int& s : flipped) s = -s;
  CHECK(hamming_from_sz(all_sz(z_product_state(flipped)), p) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Hamming distance stays inside [0, 1]") {
  const HamiltonianOperator h(
      make_model(power_law_couplings(6, 1.0, 1.13), 4.0, 6.0, 77));
  const InitialPattern p = InitialPattern::neel(6);
  evolve_grid(neel_state(6), h, default_time_grid(), [&](int, const StateVector& psi) {
    const double d = hamming_distance(psi, p);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  });
}

TEST_CASE("pattern length mismatch is rejected") {
  CHECK_THROWS_AS(hamming_distance(neel_state(4), InitialPattern::neel(5)), ConfigError);
}

TEST_CASE("two-time correlator form agrees with the signed-magnetization form") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const int n = 5;
    const HamiltonianOperator h(
        make_model(power_law_couplings(n, 1.0, 1.3), 3.0, 5.0, seed));
    std::vector<int> signs(n);
    for (int i = 0; i < n; ++i) signs[i] = ((seed + i) % 3 == 0) ? -1 : 1;
    const InitialPattern p{signs};
    const StateVector psi0 = z_product_state(signs);
    for (double t : {0.8, 4.0}) {
      const double literal =
          oracles::hamming_by_two_time_correlator(psi0, h, t, EvolutionMethod::Spectral);
      const double reduced = hamming_distance(evolve(psi0, h, t), p);
      CHECK(literal == doctest::Approx(reduced).epsilon(1e-10));
    }
  }
}

TEST_CASE("z-product states carry zero QFI") {
  CHECK(qfi_staggered(neel_state(6)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(qfi_staggered(z_product_state({1, 1, -1, 1})) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("GHZ state saturates the staggered QFI at f_Q = N") {
  for (int n : {4, 7, 10}) {
    CHECK(qfi_staggered(ghz_state(n)) == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  }
}

TEST_CASE("explicit-operator variance agrees with the correlator form") {
  for (int n : {3, 4, 6}) {
    for (unsigned seed : {11u, 12u}) {
      const StateVector psi = oracles::random_state(n, seed);
      CHECK(qfi_staggered(psi) ==
            doctest::Approx(oracles::qfi_by_explicit_operator(psi)).epsilon(1e-10));
    }
  }
}

TEST_CASE("QFI is insensitive to the global staggering sign") {
  // Flipping (-1)^i -> (-1)^{i+1} negates the staggered operator, leaving
  // both terms unchanged; equivalent to evaluating on the shifted chain.
  const StateVector psi = oracles::random_state(5, 21);
  const Eigen::VectorXd sz = all_sz(psi);
  const Eigen::MatrixXd zz = all_zz(psi);
  Eigen::VectorXd sz_flipped = -sz;
  // zz is built from products of two signs, so it is invariant.
  CHECK(qfi_from_correlations(sz, zz) ==
        doctest::Approx(qfi_from_correlations(sz_flipped, zz)).epsilon(1e-12));
}

TEST_CASE("QFI bounded by N^2 in total") {
  for (unsigned seed : {5u, 6u, 7u}) {
    const int n = 6;
    const StateVector psi = oracles::random_state(n, seed);
    CHECK(qfi_staggered(psi) <= n + 1e-9);  // f_Q <= N equals F_Q <= N^2
    CHECK(qfi_staggered(psi) >= 0.0);
  }
}

TEST_CASE("time average of a constant series is itself with zero error") {
  const std::vector<double> ts{1, 2, 3, 4, 5};
  const TimeSeries s = series_from(ts, [](double) { return 0.75; });
  const TimeAverage avg = time_average(s, 1.0, 5.0);
  CHECK(avg.mean(0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(avg.stderr_(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(avg.points == 5);
}

TEST_CASE("window outside the grid is an error") {
  const TimeSeries s = series_from({1, 2, 3}, [](double t) { return t; });
  CHECK_THROWS_AS(time_average(s, 10.0, 20.0), ConfigError);
}

TEST_CASE("window restricts the averaged points") {
  const TimeSeries s = series_from({1, 2, 3, 4, 5, 6}, [](double t) { return t; });
  const TimeAverage avg = time_average(s, 5.0, 6.0);
  CHECK(avg.mean(0) == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(avg.points == 2);
}

TEST_CASE("log-time slope recovers an exact logarithmic law") {
  const std::vector<double> ts{0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const TimeSeries s = series_from(ts, [](double t) { return 0.3 + 0.8 * std::log(t); });
  const SlopeFit fit = log_time_slope(s, 0.5, 32.0);
  CHECK(fit.slope == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(fit.ci_half_width < 1e-9);
}

TEST_CASE("constant series has zero slope with CI containing zero") {
  const std::vector<double> ts{1, 2, 3, 4, 5, 6, 7};
  const TimeSeries s = series_from(ts, [](double) { return 2.0; });
  const SlopeFit fit = log_time_slope(s, 1.0, 7.0);
  CHECK(std::abs(fit.slope) < 1e-12);
  CHECK(fit.ci_low() <= 0.0);
  CHECK(fit.ci_high() >= 0.0);
}

TEST_CASE("slope fit needs five points in the window") {
  const TimeSeries s = series_from({1, 2, 3, 4}, [](double t) { return t; });
  CHECK_THROWS_AS(log_time_slope(s, 1.0, 4.0), ConfigError);
}

TEST_CASE("noisy slope confidence interval covers the truth") {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> ts;
  for (int k = 1; k <= 40; ++k) ts.push_back(0.25 * k);
  const TimeSeries s = series_from(ts, [&](double t) { return 1.0 + 0.5 * std::log(t) + noise(rng); });
  const SlopeFit fit = log_time_slope(s, 0.25, 10.0);
  CHECK(fit.ci_low() < 0.5);
  CHECK(fit.ci_high() > 0.5);
  CHECK(fit.ci_half_width > 0.0);
}
