#include "mblsim/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mblsim/errors.hpp"

namespace mblsim {

namespace {

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  const long rows = static_cast<long>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const long cols = static_cast<long>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (static_cast<long>(j.at(i).size()) != cols) throw ConfigError("ragged matrix in JSON");
    for (long c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

Json derived_to_json(const DerivedScalar& d) {
  return Json{{"value", d.value}, {"stderr", d.stderr_}};
}

DerivedScalar derived_from_json(const Json& j) {
  return DerivedScalar{j.at("value").get<double>(), j.at("stderr").get<double>()};
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json trap_to_json(const TrapSpec& trap) {
  return Json{{"ion_count", trap.ion_count},
              {"anisotropy", trap.anisotropy},
              {"rabi_frequency", trap.rabi_frequency},
              {"recoil_frequency", trap.recoil_frequency},
              {"beatnote_detuning", trap.beatnote_detuning},
              {"resonance_margin", trap.resonance_margin}};
}

TrapSpec trap_from_json(const Json& j) {
  TrapSpec trap;
  trap.ion_count = j.at("ion_count").get<int>();
  trap.anisotropy = j.at("anisotropy").get<double>();
  trap.rabi_frequency = j.at("rabi_frequency").get<double>();
  trap.recoil_frequency = j.at("recoil_frequency").get<double>();
  trap.beatnote_detuning = j.at("beatnote_detuning").get<double>();
  if (j.contains("resonance_margin")) {
    trap.resonance_margin = j.at("resonance_margin").get<double>();
  }
  return trap;
}

Json provenance_to_json(const CouplingProvenance& p) {
  return std::visit(
      [](const auto& recipe) -> Json {
        using T = std::decay_t<decltype(recipe)>;
        if constexpr (std::is_same_v<T, PowerLawRecipe>) {
          return Json{{"type", "power_law"}, {"j_max", recipe.j_max}, {"alpha", recipe.alpha}};
        } else if constexpr (std::is_same_v<T, KacPowerLawRecipe>) {
          return Json{{"type", "kac"}, {"j", recipe.j}, {"alpha", recipe.alpha}};
        } else if constexpr (std::is_same_v<T, NormalModeRecipe>) {
          return Json{{"type", "normal_mode"},
                      {"trap", trap_to_json(recipe.trap)},
                      {"scale", recipe.scale}};
        } else {
          return Json{{"type", "inline"}, {"values", matrix_to_json(recipe.values)}};
        }
      },
      p);
}

CouplingProvenance provenance_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "power_law") {
    return PowerLawRecipe{j.at("j_max").get<double>(), j.at("alpha").get<double>()};
  }
  if (type == "kac") {
    return KacPowerLawRecipe{j.at("j").get<double>(), j.at("alpha").get<double>()};
  }
  if (type == "normal_mode") {
    return NormalModeRecipe{trap_from_json(j.at("trap")),
                            j.value("scale", 1.0)};
  }
  if (type == "inline") {
    return InlineCouplings{matrix_from_json(j.at("values"))};
  }
  throw ConfigError("unknown coupling type '" + type + "'");
}

Json model_to_json(const ModelSpec& model) {
  return Json{{"n", model.n()},
              {"coupling", provenance_to_json(model.couplings.provenance())},
              {"field_b", model.field_b},
              {"disorder", Json{{"w", model.disorder.w}, {"seed", model.disorder.seed}}}};
}

ModelSpec model_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  CouplingMatrix couplings = build_couplings(provenance_from_json(j.at("coupling")), n);
  const double w = j.at("disorder").at("w").get<double>();
  const std::uint64_t seed = j.at("disorder").at("seed").get<std::uint64_t>();
  return make_model(std::move(couplings), j.at("field_b").get<double>(), w, seed);
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["n"] = cfg.n;
  j["coupling"] = provenance_to_json(cfg.coupling);
  j["field_b"] = cfg.field_b;
  j["disorder_w"] = cfg.disorder_w;
  if (cfg.initial_signs.empty()) {
    j["initial_state"] = "neel";
  } else {
    j["initial_state"] = cfg.initial_signs;
  }
  j["time_grid"] = Json{{"kind", cfg.grid.kind},
                        {"t_min", cfg.grid.t_min},
                        {"t_max", cfg.grid.t_max},
                        {"points", cfg.grid.points},
                        {"include_zero", cfg.grid.include_zero}};
  j["engine"] = cfg.engine == Engine::ED ? "ed" : "free_fermion";
  j["evolution"] = cfg.evolution == EvolutionMethod::Auto
                       ? "auto"
                       : (cfg.evolution == EvolutionMethod::Spectral ? "spectral" : "krylov");
  j["observables"] = cfg.observables;
  j["realizations"] = cfg.realizations;
  j["master_seed"] = cfg.master_seed;
  j["workers"] = cfg.workers;
  j["steady_window_min"] = cfg.steady_window_min;
  if (cfg.steady_window_max) j["steady_window_max"] = *cfg.steady_window_max;
  if (cfg.qfi_window_min) j["qfi_window_min"] = *cfg.qfi_window_min;
  if (cfg.qfi_window_max) j["qfi_window_max"] = *cfg.qfi_window_max;
  j["ed_capacity"] = cfg.ed_capacity;
  if (cfg.sweep) {
    j["sweep"] = Json{{"axis", cfg.sweep->axis}, {"values", cfg.sweep->values}};
  }
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  cfg.n = j.at("n").get<int>();
  if (j.contains("coupling")) cfg.coupling = provenance_from_json(j.at("coupling"));
  cfg.field_b = j.value("field_b", 4.0);
  cfg.disorder_w = j.value("disorder_w", 0.0);
  if (j.contains("initial_state") && j.at("initial_state").is_array()) {
    cfg.initial_signs = j.at("initial_state").get<std::vector<int>>();
  }
  if (j.contains("time_grid")) {
    const Json& g = j.at("time_grid");
    cfg.grid.kind = g.value("kind", std::string("log"));
    cfg.grid.t_min = g.value("t_min", 0.01);
    cfg.grid.t_max = g.value("t_max", 10.0);
    cfg.grid.points = g.value("points", 50);
    cfg.grid.include_zero = g.value("include_zero", true);
  }
  const std::string engine = j.value("engine", std::string("ed"));
  if (engine == "ed") {
    cfg.engine = Engine::ED;
  } else if (engine == "free_fermion") {
    cfg.engine = Engine::FreeFermion;
  } else {
    throw ConfigError("unknown engine '" + engine + "'");
  }
  const std::string evolution = j.value("evolution", std::string("auto"));
  if (evolution == "auto") {
    cfg.evolution = EvolutionMethod::Auto;
  } else if (evolution == "spectral") {
    cfg.evolution = EvolutionMethod::Spectral;
  } else if (evolution == "krylov") {
    cfg.evolution = EvolutionMethod::Krylov;
  } else {
    throw ConfigError("unknown evolution method '" + evolution + "'");
  }
  if (j.contains("observables")) {
    cfg.observables = j.at("observables").get<std::vector<std::string>>();
  }
  cfg.realizations = j.value("realizations", 30);
  cfg.master_seed = j.value("master_seed", std::uint64_t{1});
  cfg.workers = j.value("workers", 1);
  cfg.steady_window_min = j.value("steady_window_min", 5.0);
  if (j.contains("steady_window_max")) {
    cfg.steady_window_max = j.at("steady_window_max").get<double>();
  }
  if (j.contains("qfi_window_min")) cfg.qfi_window_min = j.at("qfi_window_min").get<double>();
  if (j.contains("qfi_window_max")) cfg.qfi_window_max = j.at("qfi_window_max").get<double>();
  cfg.ed_capacity = j.value("ed_capacity", HamiltonianOperator::default_capacity());
  if (j.contains("sweep")) {
    cfg.sweep = SweepSpec{j.at("sweep").at("axis").get<std::string>(),
                          j.at("sweep").at("values").get<std::vector<double>>()};
  }
  return cfg;
}

namespace {

Json series_to_json(const EnsembleSeries& s) {
  return Json{{"times", s.times},
              {"components", s.component_names},
              {"mean", matrix_to_json(s.mean)},
              {"stderr", matrix_to_json(s.stderr_)}};
}

EnsembleSeries series_from_json(const Json& j) {
  EnsembleSeries s;
  s.times = j.at("times").get<std::vector<double>>();
  s.component_names = j.at("components").get<std::vector<std::string>>();
  s.mean = matrix_from_json(j.at("mean"));
  s.stderr_ = matrix_from_json(j.at("stderr"));
  return s;
}

Json slope_to_json(const SlopeFit& f, double lo, double hi) {
  return Json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"ci_half_width", f.ci_half_width},
              {"points", f.points},
              {"window", Json::array({lo, hi})}};
}

Json result_body_json(const EnsembleResult& r) {
  Json j;
  j["config"] = config_to_json(r.config);
  j["realization_seeds"] = r.realization_seeds;
  Json series = Json::object();
  for (const auto& [name, s] : r.series) series[name] = series_to_json(s);
  j["series"] = std::move(series);
  Json derived = Json::object();
  if (r.steady_hamming) {
    derived["steady_hamming"] = derived_to_json(*r.steady_hamming);
    derived["steady_hamming"]["window"] =
        Json::array({r.config.steady_window_min, r.config.steady_max()});
  }
  if (!r.signed_sz_steady.empty()) {
    Json arr = Json::array();
    for (const DerivedScalar& d : r.signed_sz_steady) arr.push_back(derived_to_json(d));
    derived["signed_sz_steady"] = std::move(arr);
  }
  if (r.qfi_slope) {
    derived["qfi_slope"] = slope_to_json(*r.qfi_slope, r.config.qfi_min(), r.config.qfi_max());
  }
  j["derived"] = std::move(derived);
  return j;
}

}  // namespace

Json result_hash_document(const EnsembleResult& result) {
  Json j = result_body_json(result);
  // Worker count and pending sweep axes do not alter the numbers.
  j["config"].erase("workers");
  j["config"].erase("sweep");
  return j;
}

Json result_to_json(const EnsembleResult& result) {
  Json j = result_body_json(result);
  j["content_hash"] = result.content_hash;
  return j;
}

EnsembleResult result_from_json(const Json& j) {
  EnsembleResult r;
  r.config = config_from_json(j.at("config"));
  r.realization_seeds = j.at("realization_seeds").get<std::vector<std::uint64_t>>();
  for (const std::string& name : r.config.observables) {
    if (j.at("series").contains(name)) {
      r.series.emplace_back(name, series_from_json(j.at("series").at(name)));
    }
  }
  const Json& derived = j.at("derived");
  if (derived.contains("steady_hamming")) {
    r.steady_hamming = derived_from_json(derived.at("steady_hamming"));
  }
  if (derived.contains("signed_sz_steady")) {
    for (const Json& d : derived.at("signed_sz_steady")) {
      r.signed_sz_steady.push_back(derived_from_json(d));
    }
  }
  if (derived.contains("qfi_slope")) {
    const Json& f = derived.at("qfi_slope");
    SlopeFit fit;
    fit.slope = f.at("slope").get<double>();
    fit.intercept = f.at("intercept").get<double>();
    fit.ci_half_width = f.at("ci_half_width").get<double>();
    fit.points = f.at("points").get<int>();
    r.qfi_slope = fit;
  }
  r.content_hash = j.value("content_hash", std::string());
  return r;
}

Json levelstats_to_json(const LevelStatsResult& result) {
  Json j;
  Json cfg = config_to_json(result.config);
  cfg.erase("workers");
  j["config"] = std::move(cfg);
  j["realization_count"] = result.ensemble.realization_count;
  j["skipped_pairs"] = result.ensemble.skipped;
  j["mean_r"] = result.ensemble.mean_r();
  j["stderr_mean_r"] = result.ensemble.stderr_mean_r();
  j["r_value_count"] = result.ensemble.r_values.size();
  j["spacing_count"] = result.ensemble.spacings.size();
  j["histogram"] = Json{{"edges", result.histogram.edges},
                        {"density", result.histogram.density},
                        {"poisson_reference", result.histogram.poisson_reference},
                        {"counts", result.histogram.counts},
                        {"total", result.histogram.total}};
  j["gof"] = Json{{"chi2", result.gof.chi2}, {"dof", result.gof.dof}, {"p_value", result.gof.p_value}};
  return j;
}

std::string content_hash_hex(const Json& j) {
  const std::uint64_t h = fnv1a64(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string series_csv(const EnsembleResult& result) {
  std::ostringstream out;
  out << "t";
  for (const auto& [name, s] : result.series) {
    for (const std::string& comp : s.component_names) {
      out << "," << comp << "_mean," << comp << "_stderr";
    }
  }
  out << "\n";
  const std::vector<double> times = result.config.grid.times();
  for (size_t k = 0; k < times.size(); ++k) {
    out << format_g17(times[k]);
    for (const auto& [name, s] : result.series) {
      for (long c = 0; c < s.mean.cols(); ++c) {
        out << "," << format_g17(s.mean(k, c)) << "," << format_g17(s.stderr_(k, c));
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string realization_csv(const RealizationData& data) {
  std::ostringstream out;
  out << "t";
  for (const auto& [name, values] : data.series) {
    if (values.cols() == 1) {
      out << "," << name;
    } else {
      for (long c = 0; c < values.cols(); ++c) out << "," << name << (c + 1);
    }
  }
  out << "\n";
  for (size_t k = 0; k < data.times.size(); ++k) {
    out << format_g17(data.times[k]);
    for (const auto& [name, values] : data.series) {
      for (long c = 0; c < values.cols(); ++c) out << "," << format_g17(values(k, c));
    }
    out << "\n";
  }
  return out.str();
}

std::string couplings_csv(const CouplingMatrix& couplings) {
  std::ostringstream out;
  const Eigen::MatrixXd& j = couplings.values();
  for (long i = 0; i < j.rows(); ++i) {
    for (long c = 0; c < j.cols(); ++c) {
      if (c) out << ",";
      out << format_g17(j(i, c));
    }
    out << "\n";
  }
  return out.str();
}

CouplingMatrix couplings_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("empty coupling CSV");
  const long n = static_cast<long>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (long i = 0; i < n; ++i) {
    if (static_cast<long>(rows[i].size()) != n) throw ConfigError("coupling CSV must be square");
    for (long c = 0; c < n; ++c) m(i, c) = rows[i][c];
  }
  return coupling_from_matrix(std::move(m));
}

std::string histogram_csv(const SpacingHistogram& histogram) {
  std::ostringstream out;
  out << "s_lo,s_hi,density,poisson_reference,count\n";
  for (size_t b = 0; b < histogram.counts.size(); ++b) {
    out << format_g17(histogram.edges[b]) << "," << format_g17(histogram.edges[b + 1]) << ","
        << format_g17(histogram.density[b]) << "," << format_g17(histogram.poisson_reference[b])
        << "," << histogram.counts[b] << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit_result(const EnsembleResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/result.json", dump_json(result_to_json(result)));
  write_text_file(dir + "/series.csv", series_csv(result));
  write_text_file(dir + "/config.resolved.json", dump_json(config_to_json(result.config)));
}

EnsembleResult load_result(const std::string& path) {
  return result_from_json(Json::parse(read_text_file(path)));
}

void emit_levelstats(const LevelStatsResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  Json j = levelstats_to_json(result);
  j["content_hash"] = result.content_hash;
  write_text_file(dir + "/levelstats.json", dump_json(j));
  write_text_file(dir + "/histogram.csv", histogram_csv(result.histogram));
  write_text_file(dir + "/config.resolved.json", dump_json(config_to_json(result.config)));
}

std::string sweep_summary_csv(const std::string& axis, const std::vector<double>& values,
                              const std::vector<EnsembleResult>& results) {
  std::ostringstream out;
  out << axis
      << ",steady_hamming,steady_hamming_stderr,qfi_slope,qfi_slope_ci_low,qfi_slope_ci_high,"
         "min_signed_sz\n";
  for (size_t k = 0; k < results.size(); ++k) {
    out << format_g17(values[k]);
    if (results[k].steady_hamming) {
      out << "," << format_g17(results[k].steady_hamming->value) << ","
          << format_g17(results[k].steady_hamming->stderr_);
    } else {
      out << ",nan,nan";
    }
    if (results[k].qfi_slope) {
      out << "," << format_g17(results[k].qfi_slope->slope) << ","
          << format_g17(results[k].qfi_slope->ci_low()) << ","
          << format_g17(results[k].qfi_slope->ci_high());
    } else {
      out << ",nan,nan,nan";
    }
    if (!results[k].signed_sz_steady.empty()) {
      double min_v = results[k].signed_sz_steady.front().value;
      for (const DerivedScalar& d : results[k].signed_sz_steady) min_v = std::min(min_v, d.value);
      out << "," << format_g17(min_v);
    } else {
      out << ",nan";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mblsim
