#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mblsim/errors.hpp"
#include "mblsim/serialize.hpp"

namespace {

using namespace mblsim;

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(Json::parse(read_text_file(path)));
}

int cmd_modes(const TrapSpec& trap, const std::string& out_dir) {
  trap.validate();
  const Eigen::VectorXd positions = equilibrium_positions(trap.ion_count);
  const NormalModes modes = transverse_modes(positions, trap.anisotropy);
  const CouplingMatrix couplings = coupling_from_modes(trap, modes);

  std::printf("equilibrium positions (units of the axial length scale):\n ");
  for (int i = 0; i < trap.ion_count; ++i) std::printf(" %.6f", positions(i));
  std::printf("\nmode frequencies (units of omega_z):\n ");
  for (int i = 0; i < trap.ion_count; ++i) std::printf(" %.6f", modes.frequencies(i));
  std::printf("\n");

  const AlphaFit fit = fit_alpha(couplings);
  std::printf("power-law fit: j_max = %.6g, alpha = %.4f\n", fit.j_max, fit.alpha);
  if (trap.ion_count >= 5) {
    const AlphaFit interior = fit_alpha(couplings, true);
    std::printf("interior fit (edge ions dropped): j_max = %.6g, alpha = %.4f\n",
                interior.j_max, interior.alpha);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/couplings.csv", couplings_csv(couplings));
    Json j;
    j["trap"] = trap_to_json(trap);
    j["positions"] = std::vector<double>(positions.data(), positions.data() + positions.size());
    j["frequencies"] =
        std::vector<double>(modes.frequencies.data(), modes.frequencies.data() + trap.ion_count);
    Json mode_rows = Json::array();
    for (int i = 0; i < trap.ion_count; ++i) {
      Json row = Json::array();
      for (int m = 0; m < trap.ion_count; ++m) row.push_back(modes.mode_matrix(i, m));
      mode_rows.push_back(std::move(row));
    }
    j["mode_matrix"] = std::move(mode_rows);
    j["alpha_fit"] = Json{{"j_max", fit.j_max}, {"alpha", fit.alpha}};
    write_text_file(out_dir + "/modes.json", dump_json(j));
    std::printf("wrote %s/modes.json and %s/couplings.csv\n", out_dir.c_str(), out_dir.c_str());
  }
  return 0;
}

int cmd_fit_alpha(const std::string& csv_path, bool drop_edges) {
  const CouplingMatrix couplings = couplings_from_csv(read_text_file(csv_path));
  const AlphaFit fit = fit_alpha(couplings, drop_edges);
  std::printf("j_max = %.10g\nalpha = %.10g\n", fit.j_max, fit.alpha);
  return 0;
}

int cmd_run(const std::string& config_path, std::string out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const EnsembleResult result = run_ensemble(cfg);
  if (out_dir.empty()) out_dir = "mblsim_out";
  emit_result(result, out_dir);
  std::printf("ensemble of %d realizations done; content hash %s\n", cfg.realizations,
              result.content_hash.c_str());
  if (result.steady_hamming) {
    std::printf("steady-state Hamming distance: %.4f +- %.4f\n", result.steady_hamming->value,
                result.steady_hamming->stderr_);
  }
  if (result.qfi_slope) {
    std::printf("QFI log-time slope: %.4f [%.4f, %.4f]\n", result.qfi_slope->slope,
                result.qfi_slope->ci_low(), result.qfi_slope->ci_high());
  }
  std::printf("wrote %s/result.json\n", out_dir.c_str());
  return 0;
}

int cmd_sweep(const std::string& config_path, std::string axis_override,
              std::vector<double> values_override, std::string out_dir) {
  ExperimentConfig cfg = load_config(config_path);
  SweepSpec sweep;
  if (!axis_override.empty()) {
    sweep.axis = axis_override;
    sweep.values = values_override;
  } else if (cfg.sweep) {
    sweep = *cfg.sweep;
  } else {
    throw ConfigError("no sweep axis: add a \"sweep\" block to the config or pass --axis");
  }
  if (sweep.values.empty()) throw ConfigError("sweep needs at least one value");

  const std::vector<EnsembleResult> results = run_sweep(cfg, sweep);
  if (out_dir.empty()) out_dir = "mblsim_sweep";
  std::filesystem::create_directories(out_dir);
  for (size_t k = 0; k < results.size(); ++k) {
    emit_result(results[k], out_dir + "/" + sweep.axis + "_" + std::to_string(sweep.values[k]));
  }
  write_text_file(out_dir + "/summary.csv", sweep_summary_csv(sweep.axis, sweep.values, results));
  std::printf("%zu ensembles done; wrote %s/summary.csv\n", results.size(), out_dir.c_str());
  return 0;
}

int cmd_levelstats(const std::string& config_path, int bins, std::string out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const LevelStatsResult result = run_levelstats(cfg, bins);
  std::printf("<r> = %.4f +- %.4f over %d realizations (%d degenerate pairs skipped)\n",
              result.ensemble.mean_r(), result.ensemble.stderr_mean_r(),
              result.ensemble.realization_count, result.ensemble.skipped);
  std::printf("Poisson fit: chi2 = %.2f (dof %d), p = %.4f\n", result.gof.chi2, result.gof.dof,
              result.gof.p_value);
  if (out_dir.empty()) out_dir = "mblsim_levelstats";
  emit_levelstats(result, out_dir);
  std::printf("wrote %s/levelstats.json\n", out_dir.c_str());
  return 0;
}

int cmd_replay(const std::string& result_path, int index, const std::string& out_path) {
  const EnsembleResult result = load_result(result_path);
  const RealizationData data = replay(result, index);
  const std::string csv = realization_csv(data);
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_text_file(out_path, csv);
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disordered long-range Ising simulator: exact diagonalization, level "
               "statistics, Hamming distance, QFI and the free-fermion control"};
  app.require_subcommand(1);

  TrapSpec trap;
  std::string out_dir;
  auto* modes = app.add_subcommand("modes", "Ion-chain normal modes and phonon-mediated couplings");
  modes->add_option("--ions", trap.ion_count, "Number of ions")->required();
  modes->add_option("--anisotropy", trap.anisotropy, "omega_x / omega_z")->required();
  modes->add_option("--rabi", trap.rabi_frequency, "Rabi frequency Omega");
  modes->add_option("--recoil", trap.recoil_frequency, "Recoil frequency omega_R");
  modes->add_option("--mu", trap.beatnote_detuning, "Beatnote detuning mu (units of omega_z)")
      ->required();
  modes->add_option("--margin", trap.resonance_margin, "Relative resonance margin");
  modes->add_option("-o,--output", out_dir, "Output directory");

  std::string csv_path;
  bool drop_edges = false;
  auto* fit = app.add_subcommand("fit-alpha", "Power-law fit of a coupling matrix CSV");
  fit->add_option("--couplings", csv_path, "Coupling matrix CSV")->required();
  fit->add_flag("--drop-edges", drop_edges, "Drop the two edge ions before fitting");

  std::string config_path, run_out;
  auto* run = app.add_subcommand("run", "Disorder-averaged ensemble from a config file");
  run->add_option("--config", config_path, "Config JSON")->required();
  run->add_option("-o,--output", run_out, "Output directory");

  std::string sweep_config, sweep_axis, sweep_out;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep of ensembles");
  sweep->add_option("--config", sweep_config, "Config JSON")->required();
  sweep->add_option("--axis", sweep_axis, "Sweep axis: W, alpha, B or N");
  sweep->add_option("--values", sweep_values, "Axis values")->delimiter(',');
  sweep->add_option("-o,--output", sweep_out, "Output directory");

  std::string ls_config, ls_out;
  int ls_bins = 20;
  auto* levelstats = app.add_subcommand("levelstats", "Adjacent-gap statistics over disorder");
  levelstats->add_option("--config", ls_config, "Config JSON")->required();
  levelstats->add_option("--bins", ls_bins, "Histogram bins");
  levelstats->add_option("-o,--output", ls_out, "Output directory");

  std::string replay_result, replay_out;
  int replay_index = 0;
  auto* replay_cmd = app.add_subcommand("replay", "Regenerate one realization from a result file");
  replay_cmd->add_option("--result", replay_result, "result.json path")->required();
  replay_cmd->add_option("--index", replay_index, "Realization index")->required();
  replay_cmd->add_option("-o,--output", replay_out, "Output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (modes->parsed()) return cmd_modes(trap, out_dir);
    if (fit->parsed()) return cmd_fit_alpha(csv_path, drop_edges);
    if (run->parsed()) return cmd_run(config_path, run_out);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_axis, sweep_values, sweep_out);
    if (levelstats->parsed()) return cmd_levelstats(ls_config, ls_bins, ls_out);
    if (replay_cmd->parsed()) return cmd_replay(replay_result, replay_index, replay_out);
  } catch (const mblsim::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const mblsim::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 4;
  } catch (const mblsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
