#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cloze/backend.hpp"
#include "cloze/extraction.hpp"
#include "cloze/masking.hpp"
#include "cloze/scoring.hpp"

namespace cloze {

// Knobs of the evaluation pipeline. Defaults reproduce the reference
// setting: k=1, alpha=beta=0.5, sentence-level granularity.
struct PipelineConfig {
  int k = 1;
  double alpha = 0.5;
  double beta = 0.5;
  Granularity granularity = Granularity::sentence_level;
  GateScope gate_scope = GateScope::per_factor;
  ExtractorConfig extractor;
  std::string backend_name = "doc-lookup";  // doc-lookup | gold-oracle | remote
  std::string endpoint;                     // for the remote backend
  std::string cache_dir;
  int workers = 1;
  std::string sentinel = kDefaultSentinel;
  double error_threshold = 0.5;
  std::uint64_t seed = 0;

  GateConfig gate() const { return {alpha, beta, gate_scope}; }
};

// Builds the configured backend, wrapping it in the on-disk cache when
// cache_dir is set. Honors the CLOZE_ENDPOINT environment variable
// when the endpoint is not set explicitly.
std::shared_ptr<Backend> make_backend(const PipelineConfig& config);

struct UnitEvaluation {
  UnitScore score;
  std::vector<FactualFactor> factors;
  std::size_t backend_calls = 0;
};

// Validates and trims the unit. Throws on empty document/summary or
// out-of-range human score.
EvalUnit validate_unit(EvalUnit unit);

// extraction -> masking -> fill -> score for one unit.
UnitEvaluation evaluate_unit(const EvalUnit& unit, const PipelineConfig& config,
                             Backend& backend, const Extractor& extractor);

// Same, with factors already extracted (the k-sweep reuses extraction
// across k values).
UnitEvaluation evaluate_with_factors(const EvalUnit& unit,
                                     const std::vector<FactualFactor>& factors,
                                     const PipelineConfig& config, Backend& backend);

struct CorpusEvaluation {
  std::vector<UnitEvaluation> units;  // dataset order
  double mean_score = 0.0;
  std::size_t backend_calls = 0;
};

// Worker-pool evaluation over a corpus; results keep dataset order.
CorpusEvaluation evaluate_corpus(const std::vector<EvalUnit>& units,
                                 const PipelineConfig& config, Backend& backend);

}  // namespace cloze
