#pragma once

#include <string>

#include "json.hpp"
#include "mblsim/ensemble.hpp"

namespace mblsim {

// Insertion-ordered JSON keeps every emitted document canonical: identical
// structures serialize to identical bytes, which the content hashes and the
// round-trip guarantees rely on.
using Json = nlohmann::ordered_json;

Json trap_to_json(const TrapSpec& trap);
TrapSpec trap_from_json(const Json& j);

Json provenance_to_json(const CouplingProvenance& p);
CouplingProvenance provenance_from_json(const Json& j);

Json model_to_json(const ModelSpec& model);
ModelSpec model_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

Json result_to_json(const EnsembleResult& result);
EnsembleResult result_from_json(const Json& j);

Json levelstats_to_json(const LevelStatsResult& result);

// FNV-1a 64 over the canonical dump, as 16 hex digits.
std::string content_hash_hex(const Json& j);

// Hash input for an ensemble result: physics config (worker count and sweep
// block excluded), seeds, series and derived scalars.
Json result_hash_document(const EnsembleResult& result);

std::string dump_json(const Json& j);

// CSV emission; floating point carries 17 significant digits.
std::string series_csv(const EnsembleResult& result);
std::string realization_csv(const RealizationData& data);
std::string couplings_csv(const CouplingMatrix& couplings);
CouplingMatrix couplings_from_csv(const std::string& text);
std::string histogram_csv(const SpacingHistogram& histogram);

std::string format_g17(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// result.json + series.csv + config.resolved.json under dir.
void emit_result(const EnsembleResult& result, const std::string& dir);
EnsembleResult load_result(const std::string& path);

void emit_levelstats(const LevelStatsResult& result, const std::string& dir);

// Derived-scalar summary table for a sweep, one row per axis value.
std::string sweep_summary_csv(const std::string& axis,
                              const std::vector<double>& values,
                              const std::vector<EnsembleResult>& results);

}  // namespace mblsim
