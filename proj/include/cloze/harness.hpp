#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cloze/pipeline.hpp"
#include "cloze/stats.hpp"

namespace cloze {

struct DatasetManifest {
  std::string name;
  double score_min = 0.0;  // human-score scale, normalized to [0,1] at load
  double score_max = 1.0;
};

struct AnnotatedDataset {
  std::string name;
  std::vector<EvalUnit> units;
};

// Line-delimited JSON, one unit per line:
// {"id", "document", "summary", "human_score"?, "gold_summary"?}
// Parse errors name the offending line number.
std::vector<EvalUnit> load_units(const std::string& path);
AnnotatedDataset load_dataset(const std::string& path, const DatasetManifest& manifest);

// Reads a sibling manifest JSON {"name", "score_min"?, "score_max"?}.
DatasetManifest load_manifest(const std::string& path);

struct PearsonBenchmarkResult {
  PearsonResult correlation;
  std::vector<UnitEvaluation> per_unit;  // full table for audit
  std::vector<double> metric_scores;
  std::vector<double> human_scores;
};

PearsonBenchmarkResult run_pearson_benchmark(const AnnotatedDataset& dataset,
                                             const PipelineConfig& config, Backend& backend);

enum class ErrorKind { entity, non_entity };

inline const char* to_string(ErrorKind k) {
  return k == ErrorKind::entity ? "entity" : "non_entity";
}

struct CorruptedUnit {
  EvalUnit unit;                            // summary = corrupted gold summary
  std::vector<std::size_t> corrupted_indices;  // ground-truth factor indices
};

// Pool of replacement surfaces, per kind, drawn from other units' gold
// factors. Replacements are guaranteed absent from the target document.
struct FactorPool {
  std::vector<std::string> entities;
  std::vector<std::string> noun_phrases;
};

FactorPool build_factor_pool(const std::vector<EvalUnit>& corpus, const ExtractorConfig& config);

// Replaces exactly `level` distinct same-kind factors of the unit's
// gold summary with surfaces that do not occur in the document.
CorruptedUnit inject_errors(const EvalUnit& unit, int level, ErrorKind kind,
                            std::uint64_t rng_seed, const FactorPool& pool,
                            const ExtractorConfig& extractor_config);

struct LevelScores {
  double entity = 0.0;
  double non_entity = 0.0;
};

struct GoFigureReport {
  double upper_bound = 0.0;
  std::map<int, LevelScores> level_scores;  // keys exactly {1,2,3}
  double lower_bound = 0.0;
  double sensitivity_correlation = 0.0;
  double p_value = 1.0;
};

GoFigureReport run_go_figure(const std::vector<EvalUnit>& corpus, const PipelineConfig& config,
                             Backend& backend, std::uint64_t seed);

struct TimingReport {
  double sec_per_summary = 0.0;
  double wall_clock_total = 0.0;  // seconds, mean over repetitions
  std::size_t unit_count = 0;
  std::size_t backend_calls = 0;  // per repetition
};

// Wall clock over extraction -> masking -> fill -> score only; a
// warm-up pass is excluded from timing.
TimingReport time_pipeline(const std::vector<EvalUnit>& corpus, const PipelineConfig& config,
                           Backend& backend, int repetitions);

struct SweepRow {
  int k = 0;
  double mean_score = 0.0;
  double wall_clock = 0.0;
  std::size_t backend_calls = 0;
};

// Evaluates the corpus at each k, reusing extraction across k values.
std::vector<SweepRow> sweep_k(const std::vector<EvalUnit>& corpus, const PipelineConfig& config,
                              Backend& backend, const std::vector<int>& ks);

}  // namespace cloze
