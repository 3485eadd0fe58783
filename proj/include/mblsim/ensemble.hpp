#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mblsim/couplings.hpp"
#include "mblsim/evolve.hpp"
#include "mblsim/observables.hpp"
#include "mblsim/spectral_stats.hpp"

namespace mblsim {

struct TimeGridSpec {
  std::string kind = "log";  // "log" | "linear"
  double t_min = 0.01;
  double t_max = 10.0;
  int points = 50;
  bool include_zero = true;

  std::vector<double> times() const;
  void validate() const;
};

enum class Engine { ED, FreeFermion };

struct SweepSpec {
  std::string axis;  // "W" | "alpha" | "B" | "N"
  std::vector<double> values;
};

// One ensemble: couplings held fixed, disorder resampled per realization.
struct ExperimentConfig {
  int n = 10;
  CouplingProvenance coupling = PowerLawRecipe{};
  double field_b = 4.0;
  double disorder_w = 0.0;
  std::vector<int> initial_signs;  // empty = Neel
  TimeGridSpec grid;
  Engine engine = Engine::ED;
  EvolutionMethod evolution = EvolutionMethod::Auto;
  std::vector<std::string> observables = {"sz", "hamming", "qfi"};
  int realizations = 30;
  std::uint64_t master_seed = 1;
  int workers = 1;
  double steady_window_min = 5.0;            // steady-state window lower edge
  std::optional<double> steady_window_max;   // default: grid max
  std::optional<double> qfi_window_min;      // default: 1.0
  std::optional<double> qfi_window_max;      // default: grid max
  int ed_capacity = 14;
  std::optional<SweepSpec> sweep;

  InitialPattern pattern() const;
  void validate() const;
  double steady_max() const;
  double qfi_min() const;
  double qfi_max() const;
};

struct EnsembleSeries {
  std::vector<double> times;
  Eigen::MatrixXd mean;     // rows = times, cols = components
  Eigen::MatrixXd stderr_;  // standard error over realizations
  std::vector<std::string> component_names;
};

struct DerivedScalar {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct EnsembleResult {
  ExperimentConfig config;
  std::vector<std::uint64_t> realization_seeds;
  std::vector<std::pair<std::string, EnsembleSeries>> series;  // config order

  // Window statistics over the steady-state window, realization-resolved.
  std::optional<DerivedScalar> steady_hamming;
  std::vector<DerivedScalar> signed_sz_steady;  // per-site s_i <sz_i> window mean
  std::optional<SlopeFit> qfi_slope;            // fit on the ensemble-mean series
  std::string content_hash;

  const EnsembleSeries* find_series(const std::string& name) const;
};

// Raw single-realization series, keyed like the ensemble series.
struct RealizationData {
  std::vector<double> times;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> series;
};

RealizationData compute_realization(const ExperimentConfig& cfg, std::uint64_t seed);

// R independent realizations on the shared grid, averaged in fixed
// realization order with compensated summation; the result is a pure
// function of the config regardless of worker count.
EnsembleResult run_ensemble(const ExperimentConfig& cfg);

ExperimentConfig apply_axis(const ExperimentConfig& cfg, const std::string& axis,
                            double value);
std::vector<EnsembleResult> run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep);

// Regenerates one realization from its recorded seed.
RealizationData replay(const EnsembleResult& result, int realization_index);

struct LevelStatsResult {
  ExperimentConfig config;
  SpacingEnsemble ensemble;
  SpacingHistogram histogram;
  GofTest gof;
  std::string content_hash;
};

LevelStatsResult run_levelstats(const ExperimentConfig& cfg, int bins = 20);

// Bounded worker pool over [0, count); exceptions propagate to the caller.
void parallel_for_indexed(int count, int workers, const std::function<void(int)>& task);

}  // namespace mblsim
