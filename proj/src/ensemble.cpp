#include "mblsim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "mblsim/errors.hpp"
#include "mblsim/free_fermion.hpp"
#include "mblsim/rng.hpp"
#include "mblsim/serialize.hpp"

namespace mblsim {

namespace {

// Compensated accumulator so the aggregate is independent of how realizations
// were scheduled across workers (summation happens in index order anyway, but
// it also keeps long ensembles accurate).
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

int count_window_points(const std::vector<double>& times, double lo, double hi) {
  int c = 0;
  for (double t : times) {
    if (t >= lo && t <= hi) ++c;
  }
  return c;
}

double window_mean(const std::vector<double>& times, const Eigen::VectorXd& values,
                   double lo, double hi) {
  double sum = 0.0;
  int c = 0;
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] < lo || times[k] > hi) continue;
    sum += values(static_cast<long>(k));
    ++c;
  }
  return sum / c;
}

DerivedScalar mean_and_stderr(const std::vector<double>& values) {
  const size_t r = values.size();
  KahanSum sum;
  for (double v : values) sum.add(v);
  const double mean = sum.sum / r;
  DerivedScalar out{mean, 0.0};
  if (r > 1) {
    KahanSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    out.stderr_ = std::sqrt(sq.sum / (r - 1) / r);
  }
  return out;
}

}  // namespace

std::vector<double> TimeGridSpec::times() const {
  validate();
  std::vector<double> t;
  t.reserve(points + 1);
  if (include_zero && t_min > 0.0) t.push_back(0.0);
  if (points == 1) {
    t.push_back(t_min);
    return t;
  }
  for (int k = 0; k < points; ++k) {
    const double frac = static_cast<double>(k) / (points - 1);
    if (kind == "log") {
      t.push_back(std::pow(10.0, std::log10(t_min) + frac * (std::log10(t_max) - std::log10(t_min))));
    } else {
      t.push_back(t_min + frac * (t_max - t_min));
    }
  }
  return t;
}

void TimeGridSpec::validate() const {
  if (kind != "log" && kind != "linear") throw ConfigError("grid kind must be log or linear");
  if (points < 1) throw ConfigError("grid needs at least one point");
  if (points > 1 && !(t_max > t_min)) throw ConfigError("grid needs t_max > t_min");
  if (kind == "log" && t_min <= 0) throw ConfigError("log grid needs t_min > 0");
  if (t_min < 0) throw ConfigError("grid times must be nonnegative");
}

InitialPattern ExperimentConfig::pattern() const {
  if (initial_signs.empty()) return InitialPattern::neel(n);
  InitialPattern p{initial_signs};
  p.validate();
  if (p.n() != n) throw ConfigError("initial pattern length does not match n");
  return p;
}

double ExperimentConfig::steady_max() const {
  return steady_window_max.value_or(grid.t_max);
}
double ExperimentConfig::qfi_min() const { return qfi_window_min.value_or(1.0); }
double ExperimentConfig::qfi_max() const { return qfi_window_max.value_or(grid.t_max); }

void ExperimentConfig::validate() const {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (realizations < 1) throw ConfigError("need at least one realization");
  if (workers < 0) throw ConfigError("workers must be nonnegative");
  if (disorder_w < 0) throw ConfigError("disorder half-width must be nonnegative");
  grid.validate();
  pattern();  // length/sign check
  for (const std::string& obs : observables) {
    if (obs != "sz" && obs != "hamming" && obs != "qfi") {
      throw ConfigError("unknown observable '" + obs + "'");
    }
  }
  if (engine == Engine::ED) {
    if (n > ed_capacity) {
      throw CapacityError("chain of " + std::to_string(n) +
                          " sites exceeds the dense cap of " + std::to_string(ed_capacity) +
                          "; use the free-fermion engine for larger chains");
    }
    if (ed_capacity > 24) throw ConfigError("dense cap beyond 24 sites is not supported");
  } else if (n > 1024) {
    throw CapacityError("free-fermion engine capped at 1024 sites");
  }
  if (!(steady_max() >= steady_window_min)) throw ConfigError("empty steady-state window");
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep needs at least one value");
    apply_axis(*this, sweep->axis, sweep->values.front());  // axis name check
  }
}

void parallel_for_indexed(int count, int workers, const std::function<void(int)>& task) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

RealizationData compute_realization(const ExperimentConfig& cfg, std::uint64_t seed) {
  const CouplingMatrix couplings = build_couplings(cfg.coupling, cfg.n);
  const ModelSpec model =
      make_model(couplings, cfg.field_b, sample_disorder(cfg.disorder_w, seed, cfg.n));
  const InitialPattern pattern = cfg.pattern();
  const std::vector<double> times = cfg.grid.times();
  const long t_count = static_cast<long>(times.size());

  const bool want_sz = contains(cfg.observables, "sz");
  const bool want_hamming = contains(cfg.observables, "hamming");
  const bool want_qfi = contains(cfg.observables, "qfi");

  Eigen::MatrixXd sz_rows(t_count, cfg.n);
  Eigen::MatrixXd hamming_rows(t_count, 1);
  Eigen::MatrixXd qfi_rows(t_count, 1);

  auto record = [&](int k, const Eigen::VectorXd& sz, const Eigen::MatrixXd* zz) {
    sz_rows.row(k) = sz.transpose();
    if (want_hamming) hamming_rows(k, 0) = hamming_from_sz(sz, pattern);
    if (want_qfi) qfi_rows(k, 0) = qfi_from_correlations(sz, *zz);
  };

  if (cfg.engine == Engine::ED) {
    const HamiltonianOperator h = build_hamiltonian(model, cfg.ed_capacity);
    const StateVector psi0 = z_product_state(pattern.signs);
    Eigen::MatrixXd zz;
    evolve_grid(psi0, h, times,
                [&](int k, const StateVector& psi) {
                  const Eigen::VectorXd sz = all_sz(psi);
                  if (want_qfi) zz = all_zz(psi);
                  record(k, sz, &zz);
                },
                cfg.evolution);
  } else {
    const BdgHamiltonian bdg = build_bdg(model, pattern);
    const BdgPropagator propagator(bdg);
    const CovarianceState initial = init_covariance(pattern);
    for (long k = 0; k < t_count; ++k) {
      const CovarianceState cov = propagator.evolve(initial, times[k]);
      const FreeFermionObservables obs = ff_observables(cov);
      sz_rows.row(k) = obs.sz.transpose();
      if (want_hamming) hamming_rows(k, 0) = hamming_from_sz(obs.sz, pattern);
      if (want_qfi) qfi_rows(k, 0) = obs.f_q;
    }
  }

  RealizationData data;
  data.times = times;
  for (const std::string& obs : cfg.observables) {
    if (obs == "sz") data.series.emplace_back("sz", sz_rows);
    if (obs == "hamming") data.series.emplace_back("hamming", hamming_rows);
    if (obs == "qfi") data.series.emplace_back("qfi", qfi_rows);
  }
  return data;
}

const EnsembleSeries* EnsembleResult::find_series(const std::string& name) const {
  for (const auto& [key, value] : series) {
    if (key == name) return &value;
  }
  return nullptr;
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  const int r_count = cfg.realizations;

  EnsembleResult result;
  result.config = cfg;
  result.realization_seeds.resize(r_count);
  for (int r = 0; r < r_count; ++r) {
    result.realization_seeds[r] = realization_seed(cfg.master_seed, r);
  }

  std::vector<RealizationData> raw(r_count);
  parallel_for_indexed(r_count, cfg.workers,
                       [&](int r) { raw[r] = compute_realization(cfg, result.realization_seeds[r]); });

  const std::vector<double> times = cfg.grid.times();
  const InitialPattern pattern = cfg.pattern();

  // Aggregate each observable in fixed realization order.
  for (size_t s = 0; s < raw[0].series.size(); ++s) {
    const std::string& name = raw[0].series[s].first;
    const long rows = raw[0].series[s].second.rows();
    const long cols = raw[0].series[s].second.cols();

    EnsembleSeries agg;
    agg.times = times;
    agg.mean.resize(rows, cols);
    agg.stderr_.resize(rows, cols);
    for (long i = 0; i < rows; ++i) {
      for (long j = 0; j < cols; ++j) {
        KahanSum sum;
        for (int r = 0; r < r_count; ++r) sum.add(raw[r].series[s].second(i, j));
        const double mean = sum.sum / r_count;
        agg.mean(i, j) = mean;
        double se = 0.0;
        if (r_count > 1) {
          KahanSum sq;
          for (int r = 0; r < r_count; ++r) {
            const double d = raw[r].series[s].second(i, j) - mean;
            sq.add(d * d);
          }
          se = std::sqrt(sq.sum / (r_count - 1) / r_count);
        }
        agg.stderr_(i, j) = se;
      }
    }
    if (name == "sz") {
      for (int i = 1; i <= cfg.n; ++i) agg.component_names.push_back("sz" + std::to_string(i));
    } else {
      agg.component_names.push_back(name);
    }
    result.series.emplace_back(name, std::move(agg));
  }

  // Derived steady-state scalars use per-realization window averages.
  const double w_lo = cfg.steady_window_min;
  const double w_hi = cfg.steady_max();
  const bool window_ok = count_window_points(times, w_lo, w_hi) >= 1;

  auto raw_series = [&](int r, const std::string& name) -> const Eigen::MatrixXd* {
    for (const auto& [key, value] : raw[r].series) {
      if (key == name) return &value;
    }
    return nullptr;
  };

  if (window_ok && contains(cfg.observables, "hamming")) {
    std::vector<double> per_r(r_count);
    for (int r = 0; r < r_count; ++r) {
      per_r[r] = window_mean(times, raw_series(r, "hamming")->col(0), w_lo, w_hi);
    }
    result.steady_hamming = mean_and_stderr(per_r);
  }
  if (window_ok && contains(cfg.observables, "sz")) {
    result.signed_sz_steady.resize(cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
      std::vector<double> per_r(r_count);
      for (int r = 0; r < r_count; ++r) {
        per_r[r] = pattern.signs[i] *
                   window_mean(times, raw_series(r, "sz")->col(i), w_lo, w_hi);
      }
      result.signed_sz_steady[i] = mean_and_stderr(per_r);
    }
  }
  if (contains(cfg.observables, "qfi")) {
    const EnsembleSeries* qfi = result.find_series("qfi");
    int usable = 0;
    for (double t : times) {
      if (t >= cfg.qfi_min() && t <= cfg.qfi_max() && t > 0) ++usable;
    }
    if (usable >= 5) {
      TimeSeries mean_series{times, qfi->mean, "qfi"};
      result.qfi_slope = log_time_slope(mean_series, cfg.qfi_min(), cfg.qfi_max());
    }
  }

  result.content_hash = content_hash_hex(result_hash_document(result));
  return result;
}

ExperimentConfig apply_axis(const ExperimentConfig& cfg, const std::string& axis,
                            double value) {
  ExperimentConfig out = cfg;
  out.sweep.reset();
  if (axis == "W") {
    if (value < 0) throw ConfigError("disorder half-width must be nonnegative");
    out.disorder_w = value;
  } else if (axis == "B") {
    out.field_b = value;
  } else if (axis == "alpha") {
    if (auto* p = std::get_if<PowerLawRecipe>(&out.coupling)) {
      p->alpha = value;
    } else if (auto* k = std::get_if<KacPowerLawRecipe>(&out.coupling)) {
      k->alpha = value;
    } else {
      throw ConfigError("alpha sweep requires a power-law coupling recipe");
    }
  } else if (axis == "N") {
    const int n = static_cast<int>(std::lround(value));
    if (n < 1 || std::abs(value - n) > 1e-9) throw ConfigError("N sweep values must be integers");
    out.n = n;
    if (auto* nm = std::get_if<NormalModeRecipe>(&out.coupling)) nm->trap.ion_count = n;
    if (std::holds_alternative<InlineCouplings>(out.coupling)) {
      throw ConfigError("N sweep cannot resize inline couplings");
    }
    if (!out.initial_signs.empty()) out.initial_signs.clear();  // fall back to Neel
  } else {
    throw ConfigError("sweep axis must be one of W, alpha, B, N");
  }
  return out;
}

std::vector<EnsembleResult> run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep) {
  if (sweep.values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<EnsembleResult> results;
  results.reserve(sweep.values.size());
  for (double v : sweep.values) {
    results.push_back(run_ensemble(apply_axis(cfg, sweep.axis, v)));
  }
  return results;
}

RealizationData replay(const EnsembleResult& result, int realization_index) {
  if (realization_index < 0 ||
      realization_index >= static_cast<int>(result.realization_seeds.size())) {
    throw ConfigError("realization index out of range");
  }
  return compute_realization(result.config, result.realization_seeds[realization_index]);
}

LevelStatsResult run_levelstats(const ExperimentConfig& cfg, int bins) {
  cfg.validate();
  if (cfg.engine != Engine::ED) {
    throw ConfigError("level statistics require the exact-diagonalization engine");
  }
  const int r_count = cfg.realizations;
  std::vector<Eigen::VectorXd> spectra(r_count);
  parallel_for_indexed(r_count, cfg.workers, [&](int r) {
    const CouplingMatrix couplings = build_couplings(cfg.coupling, cfg.n);
    const ModelSpec model = make_model(
        couplings, cfg.field_b,
        sample_disorder(cfg.disorder_w, realization_seed(cfg.master_seed, r), cfg.n));
    spectra[r] = build_hamiltonian(model, cfg.ed_capacity).eigenvalues_only();
  });

  LevelStatsResult out;
  out.config = cfg;
  for (int r = 0; r < r_count; ++r) out.ensemble.add_spectrum(spectra[r]);
  out.histogram = spacing_histogram(out.ensemble, bins);
  out.gof = poisson_spacing_gof(out.histogram);
  out.content_hash = content_hash_hex(levelstats_to_json(out));
  return out;
}

}  // namespace mblsim
