// Acceptance suite: each numbered criterion prints one PASS/FAIL line (plus
// the measured numbers) and the process exits nonzero on any failure.
// Run a single criterion with `acceptance <k>`, or all of them with no args.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "mblsim/ensemble.hpp"
#include "mblsim/free_fermion.hpp"
#include "mblsim/serialize.hpp"
#include "mblsim/spectrum.hpp"
#include "oracles.hpp"

using namespace mblsim;

namespace {

int failures = 0;

void check(int criterion, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.coupling = PowerLawRecipe{1.0, 1.13};
  cfg.field_b = 4.0;
  cfg.disorder_w = 8.0;
  cfg.grid = TimeGridSpec{"log", 0.01, 10.0, 50, true};
  cfg.observables = {"sz", "hamming", "qfi"};
  cfg.realizations = 30;
  cfg.master_seed = 20240817;
  cfg.workers = 0;
  return cfg;
}

// --- criterion 1: Poisson level statistics of the disordered model ---------

void criterion_1() {
  ExperimentConfig cfg = base_config();
  cfg.realizations = 500;
  const LevelStatsResult stats = run_levelstats(cfg, 25);
  const double mean_r = stats.ensemble.mean_r();
  check(1, mean_r >= 0.37 && mean_r <= 0.41,
        "ensemble <r> = " + fmt(mean_r) + " in [0.37, 0.41] (Poisson reference 0.386)");
  check(1, stats.gof.p_value > 0.01,
        "spacing histogram consistent with exp(-s): chi2 = " + fmt(stats.gof.chi2) +
            " (dof " + std::to_string(stats.gof.dof) + "), p = " + fmt(stats.gof.p_value));
}

// --- criterion 2: estimator calibration -------------------------------------

void criterion_2() {
  {
    std::mt19937_64 rng(7);
    std::exponential_distribution<double> gap(1.0);
    Eigen::VectorXd ev(100000);
    double e = 0.0;
    for (long k = 0; k < ev.size(); ++k) {
      e += gap(rng);
      ev(k) = e;
    }
    const double mean_r = r_statistic(ev).mean;
    check(2, std::abs(mean_r - 0.386) <= 0.005,
          "synthetic Poisson spacings: <r> = " + fmt(mean_r) + " within 0.386 +- 0.005");
  }
  {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpacingEnsemble ensemble;
    for (int sample = 0; sample < 100; ++sample) {
      Eigen::MatrixXd m(1024, 1024);
      for (int i = 0; i < 1024; ++i) {
        for (int j = 0; j < 1024; ++j) m(i, j) = gauss(rng);
      }
      const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
      ensemble.add_spectrum(sym_eigvals(sym));
    }
    const double mean_r = ensemble.mean_r();
    check(2, std::abs(mean_r - 0.53) <= 0.01,
          "random real-symmetric ensemble: <r> = " + fmt(mean_r) + " within 0.53 +- 0.01");
  }
}

// --- criterion 3: thermalization without disorder ---------------------------

void criterion_3() {
  const int n = 10;
  const ModelSpec spec = make_model(power_law_couplings(n, 1.0, 1.13), 4.0, 0.0, 1);
  const HamiltonianOperator h(spec);
  const InitialPattern neel = InitialPattern::neel(n);
  const StateVector psi0 = z_product_state(neel.signs);
  const std::vector<double> grid = TimeGridSpec{"log", 0.01, 10.0, 50, true}.times();

  Eigen::VectorXd signed_sz_sum = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Matrix2cd> rdm_sum(n, Eigen::Matrix2cd::Zero());
  double hamming_sum = 0.0;
  int window_points = 0;
  evolve_grid(psi0, h, grid, [&](int k, const StateVector& psi) {
    if (grid[k] < 5.0 || grid[k] > 10.0) return;
    ++window_points;
    const Eigen::VectorXd sz = all_sz(psi);
    for (int i = 0; i < n; ++i) {
      signed_sz_sum(i) += neel.signs[i] * sz(i);
      rdm_sum[i] += reduced_density_matrix(psi, i + 1);
    }
    hamming_sum += hamming_from_sz(sz, neel);
  });

  double worst_moment = 0.0;
  double worst_distance = 0.0;
  const Eigen::Matrix2cd mixed = 0.5 * Eigen::Matrix2cd::Identity();
  for (int i = 0; i < n; ++i) {
    worst_moment = std::max(worst_moment, std::abs(signed_sz_sum(i) / window_points));
    worst_distance =
        std::max(worst_distance, trace_distance(rdm_sum[i] / window_points, mixed));
  }
  const double hd = hamming_sum / window_points;

  check(3, worst_moment < 0.15,
        "largest time-averaged |s_i <sz_i>| = " + fmt(worst_moment) + " < 0.15");
  check(3, worst_distance < 0.1,
        "largest trace distance of the steady RDM to I/2 = " + fmt(worst_distance) + " < 0.1");
  check(3, std::abs(hd - 0.5) <= 0.05,
        "steady-state Hamming distance = " + fmt(hd) + " within 0.5 +- 0.05");
}

// --- criterion 4: localization crossover in W -------------------------------

void criterion_4() {
  ExperimentConfig cfg = base_config();
  cfg.observables = {"sz", "hamming"};
  const std::vector<double> w_values{0.0, 2.0, 4.0, 6.0, 8.0};
  const std::vector<EnsembleResult> results = run_sweep(cfg, SweepSpec{"W", w_values});

  bool monotone = true;
  std::string trail;
  for (size_t k = 0; k + 1 < results.size(); ++k) {
    const DerivedScalar& a = *results[k].steady_hamming;
    const DerivedScalar& b = *results[k + 1].steady_hamming;
    const double slack = 2.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    if (b.value > a.value + slack) monotone = false;
  }
  for (const EnsembleResult& r : results) trail += " " + fmt(r.steady_hamming->value);
  check(4, monotone, "steady-state HD nonincreasing in W within 2 stderr:" + trail);

  const double hd0 = results.front().steady_hamming->value;
  const double hd8 = results.back().steady_hamming->value;
  check(4, hd8 <= hd0 - 0.1,
        "HD(W=8) = " + fmt(hd8) + " at least 0.1 below HD(W=0) = " + fmt(hd0));

  double min_signed = 1.0;
  for (const DerivedScalar& d : results.back().signed_sz_steady) {
    min_signed = std::min(min_signed, d.value);
  }
  check(4, min_signed > 0.0,
        "every site keeps its initial sign at W=8: min s_i <sz_i> = " + fmt(min_signed));
}

// --- criterion 5: interaction-range trend in alpha ---------------------------

void criterion_5() {
  ExperimentConfig cfg = base_config();
  cfg.observables = {"hamming"};
  const std::vector<double> alphas{0.95, 1.13, 1.5, 1.81};
  const std::vector<EnsembleResult> results = run_sweep(cfg, SweepSpec{"alpha", alphas});

  bool decreasing = true;
  std::string trail;
  for (size_t k = 0; k + 1 < results.size(); ++k) {
    const DerivedScalar& a = *results[k].steady_hamming;
    const DerivedScalar& b = *results[k + 1].steady_hamming;
    const double slack = 2.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    if (!(b.value < a.value + slack)) decreasing = false;
  }
  if (!(results.back().steady_hamming->value < results.front().steady_hamming->value)) {
    decreasing = false;
  }
  for (const EnsembleResult& r : results) trail += " " + fmt(r.steady_hamming->value);
  check(5, decreasing, "steady-state HD decreasing in alpha within 2 stderr:" + trail);
}

// --- criterion 6: QFI entanglement growth ------------------------------------

void criterion_6() {
  {
    ExperimentConfig cfg = base_config();
    cfg.disorder_w = 0.0;
    cfg.realizations = 1;
    cfg.observables = {"qfi"};
    const EnsembleResult r = run_ensemble(cfg);
    const SlopeFit& fit = *r.qfi_slope;
    check(6, fit.ci_low() <= 0.0 && fit.ci_high() >= 0.0,
          "W=0: QFI log-slope CI [" + fmt(fit.ci_low()) + ", " + fmt(fit.ci_high()) +
              "] contains 0");
  }
  for (double w : {6.0, 8.0}) {
    ExperimentConfig cfg = base_config();
    cfg.disorder_w = w;
    cfg.observables = {"qfi"};
    const EnsembleResult r = run_ensemble(cfg);
    const SlopeFit& fit = *r.qfi_slope;
    check(6, fit.slope > 0.0 && fit.ci_low() > 0.0,
          "W=" + fmt(w) + ": positive QFI log-slope " + fmt(fit.slope) + " with CI [" +
              fmt(fit.ci_low()) + ", " + fmt(fit.ci_high()) + "] excluding 0");
  }
  {
    // Short-range regime: Kac-normalized alpha = 3 in the window dominated by
    // next-nearest-neighbor interactions, 2^3 < tJ < 3^3.
    ExperimentConfig cfg = base_config();
    cfg.n = 8;
    cfg.coupling = KacPowerLawRecipe{1.0, 3.0};
    cfg.disorder_w = 3.0;
    cfg.realizations = 300;
    cfg.observables = {"qfi"};
    cfg.grid = TimeGridSpec{"log", 0.01, 30.0, 60, true};
    cfg.qfi_window_min = 8.0;
    cfg.qfi_window_max = 27.0;
    const EnsembleResult r = run_ensemble(cfg);
    const SlopeFit& fit = *r.qfi_slope;
    check(6, fit.slope > 0.0 && fit.ci_low() > 0.0,
          "alpha=3 Kac, W/J=3, N=8: log growth inside 8 < tJ < 27, slope " + fmt(fit.slope) +
              " CI [" + fmt(fit.ci_low()) + ", " + fmt(fit.ci_high()) + "]");
  }
}

// --- criterion 7: free-fermion control ---------------------------------------

void criterion_7() {
  for (const auto& [n, r_count] : std::vector<std::pair<int, int>>{{14, 1000}, {100, 100}}) {
    ExperimentConfig cfg = base_config();
    cfg.engine = Engine::FreeFermion;
    cfg.n = n;
    cfg.coupling = KacPowerLawRecipe{1.0, 3.0};
    cfg.disorder_w = 3.0;
    cfg.realizations = r_count;
    cfg.observables = {"qfi"};
    cfg.grid = TimeGridSpec{"log", 0.01, 30.0, 60, true};
    cfg.qfi_window_min = 8.0;
    cfg.qfi_window_max = 27.0;
    cfg.steady_window_min = 8.0;
    const EnsembleResult r = run_ensemble(cfg);

    const EnsembleSeries* qfi = r.find_series("qfi");
    double late_max = 0.0;
    for (long k = 0; k < qfi->mean.rows(); ++k) {
      if (qfi->times[k] >= 1.0) late_max = std::max(late_max, qfi->mean(k, 0));
    }
    const SlopeFit& fit = *r.qfi_slope;
    const bool no_growth = fit.slope <= 0.0 || fit.ci_low() <= 0.0;
    check(7, late_max < 1.0,
          "free fermions N=" + std::to_string(n) + ": f_Q saturates at " + fmt(late_max) +
              " < 1");
    check(7, no_growth,
          "free fermions N=" + std::to_string(n) + ": no positive long-time slope (slope " +
              fmt(fit.slope) + ", CI low " + fmt(fit.ci_low()) + ")");
  }
}

// --- criterion 8: oracles ----------------------------------------------------

void criterion_8() {
  {
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
      const HamiltonianOperator h(
          make_model(power_law_couplings(n, 1.0, 1.13), 4.0, 6.0, 100 + n));
      const StateVector psi0 = neel_state(n);
      for (double t : {0.5, 3.0, 10.0}) {
        const StateVector exact = oracles::evolve_by_expm(psi0, h, t);
        for (EvolutionMethod m : {EvolutionMethod::Spectral, EvolutionMethod::Krylov}) {
          worst = std::max(worst, (evolve(psi0, h, t, m).amplitudes - exact.amplitudes).norm());
        }
      }
    }
    check(8, worst < 1e-9,
          "N<=4 evolution vs dense-exponential oracle: worst state distance " + fmt(worst));
  }
  {
    const int n = 6;
    Eigen::MatrixXd nn = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) nn(i, i + 1) = nn(i + 1, i) = 1.0;
    const ModelSpec spec = make_model(coupling_from_matrix(nn), 4.0, 2.0, 4242);
    const InitialPattern neel = InitialPattern::neel(n);
    const BdgPropagator prop(build_bdg(spec, neel));
    const CovarianceState cov0 = init_covariance(neel);
    const HamiltonianOperator h(spec);
    const std::vector<double> grid = TimeGridSpec{"log", 0.01, 10.0, 50, true}.times();
    double worst = 0.0;
    evolve_grid(z_product_state(neel.signs), h, grid, [&](int k, const StateVector& psi) {
      const FreeFermionObservables ff = ff_observables(prop.evolve(cov0, grid[k]));
      worst = std::max(worst, (ff.sz - all_sz(psi)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (ff.zz - all_zz(psi)).cwiseAbs().maxCoeff());
    });
    check(8, worst < 1e-8,
          "N=6 nearest-neighbor model: free fermions match ED on <sz> and <sz sz> to " +
              fmt(worst));
  }
  {
    double worst = 0.0;
    for (int n = 3; n <= 6; ++n) {
      for (unsigned seed = 0; seed < 4; ++seed) {
        const StateVector psi = oracles::random_state(n, 1000 * n + seed);
        worst = std::max(
            worst, std::abs(qfi_staggered(psi) - oracles::qfi_by_explicit_operator(psi)));
      }
    }
    check(8, worst < 1e-10,
          "variance form vs correlator form of the staggered QFI agree to " + fmt(worst));
  }
  {
    double worst = 0.0;
    for (int n = 4; n <= 6; ++n) {
      const HamiltonianOperator h(
          make_model(power_law_couplings(n, 1.0, 1.3), 3.0, 5.0, 17 * n));
      std::vector<int> signs(n);
      for (int i = 0; i < n; ++i) signs[i] = (i % 3 == 1) ? -1 : 1;
      const InitialPattern p{signs};
      const StateVector psi0 = z_product_state(signs);
      for (double t : {0.7, 4.2}) {
        const double literal =
            oracles::hamming_by_two_time_correlator(psi0, h, t, EvolutionMethod::Spectral);
        const double reduced = hamming_distance(evolve(psi0, h, t), p);
        worst = std::max(worst, std::abs(literal - reduced));
      }
    }
    check(8, worst < 1e-10,
          "two-time correlator vs signed-magnetization Hamming distance agree to " + fmt(worst));
  }
}

// --- criterion 9: ETH machinery ----------------------------------------------

void criterion_9() {
  const HamiltonianOperator h(make_model(power_law_couplings(8, 1.0, 1.13), 4.0, 4.0, 9));
  check(9, eth_beta(h, 0.0) == 0.0, "zero energy of the traceless Hamiltonian gives beta = 0");

  const Eigen::Matrix2cd rdm = eth_rdm(h, 0.0, 3).rdm;
  check(9, (rdm - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0,
        "infinite-temperature reduced density matrix is exactly I/2");

  const Eigen::VectorXd ev = h.spectrum().eigenvalues;
  const auto energy_at = [&](double beta) {
    double z = 0, ez = 0;
    for (long k = 0; k < ev.size(); ++k) {
      const double w = std::exp(-beta * (ev(k) - ev(0)));
      z += w;
      ez += ev(k) * w;
    }
    return ez / z;
  };
  double worst = 0.0;
  for (double beta_true : {0.25, 1.5, -0.6}) {
    worst = std::max(worst, std::abs(eth_beta(ev, energy_at(beta_true)) - beta_true));
  }
  check(9, worst < 1e-8, "beta round-trip residual " + fmt(worst) + " < 1e-8");
}

// --- criterion 10: ion-physics layer ------------------------------------------

void criterion_10() {
  const Eigen::VectorXd u2 = equilibrium_positions(2);
  const Eigen::VectorXd u3 = equilibrium_positions(3);
  const double worst2 = std::max(std::abs(u2(0) + std::cbrt(0.25)), std::abs(u2(1) - std::cbrt(0.25)));
  const double worst3 = std::max({std::abs(u3(0) + std::cbrt(1.25)), std::abs(u3(1)),
                                  std::abs(u3(2) - std::cbrt(1.25))});
  check(10, worst2 < 1e-10 && worst3 < 1e-10,
        "two- and three-ion equilibrium positions match closed forms (" + fmt(worst2) + ", " +
            fmt(worst3) + ")");

  const int n = 10;
  const double anisotropy = 9.0;
  const NormalModes modes = transverse_modes(equilibrium_positions(n), anisotropy);
  double com_err = std::abs(modes.frequencies(n - 1) - anisotropy);
  for (int i = 0; i < n; ++i) {
    com_err = std::max(com_err, std::abs(modes.mode_matrix(i, n - 1) - 1.0 / std::sqrt(n)));
  }
  check(10, com_err < 1e-10,
        "center-of-mass mode at the transverse frequency with a uniform vector, residual " +
            fmt(com_err));

  double fit_err = 0.0;
  for (double alpha : {0.5, 1.13, 3.0}) {
    const AlphaFit fit = fit_alpha(power_law_couplings(10, 2.0, alpha));
    fit_err = std::max({fit_err, std::abs(fit.alpha - alpha), std::abs(fit.j_max - 2.0)});
  }
  check(10, fit_err < 1e-10, "power-law fit recovers (j_max, alpha) exactly, residual " + fmt(fit_err));
}

// --- criterion 11: determinism across worker counts ----------------------------

void criterion_11() {
  ExperimentConfig cfg = base_config();
  cfg.n = 8;
  cfg.disorder_w = 6.0;
  cfg.realizations = 12;
  cfg.workers = 1;
  const EnsembleResult serial = run_ensemble(cfg);
  cfg.workers = 8;
  const EnsembleResult parallel = run_ensemble(cfg);
  check(11, serial.content_hash == parallel.content_hash &&
                dump_json(result_hash_document(serial)) ==
                    dump_json(result_hash_document(parallel)),
        "worker counts 1 and 8 give byte-identical results, hash " + serial.content_hash);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> criteria;
  if (argc > 1) {
    criteria.push_back(std::atoi(argv[1]));
  } else {
    for (int k = 1; k <= 11; ++k) criteria.push_back(k);
  }
  for (int k : criteria) {
    switch (k) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
      case 7: criterion_7(); break;
      case 8: criterion_8(); break;
      case 9: criterion_9(); break;
      case 10: criterion_10(); break;
      case 11: criterion_11(); break;
      default:
        std::fprintf(stderr, "unknown criterion %d\n", k);
        return 2;
    }
  }
  return failures == 0 ? 0 : 1;
}
