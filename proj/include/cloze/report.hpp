#pragma once

#include <string>
#include <vector>

#include "cloze/harness.hpp"
#include "cloze/pipeline.hpp"
#include "json.hpp"

namespace cloze {

nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& doc);

nlohmann::json unit_evaluation_to_json(const EvalUnit& unit, const UnitEvaluation& eval);

// Deterministic evaluation report: effective config echo, per-unit
// scores, corpus mean. Wall-clock timing is deliberately kept out of
// this document so identical runs serialize byte-identically.
nlohmann::json build_eval_report(const std::vector<EvalUnit>& units,
                                 const CorpusEvaluation& evaluation,
                                 const PipelineConfig& config);

std::string report_to_csv(const nlohmann::json& report);

nlohmann::json timing_to_json(const TimingReport& timing);
nlohmann::json go_figure_to_json(const GoFigureReport& report);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// One line-delimited training record: {document, masked_text, targets[]}.
nlohmann::json training_sample_to_json(const std::string& document,
                                       const TrainingSample& sample);

// Human-readable rendering with error-localized factor spans marked.
std::string render_report_markdown(const nlohmann::json& report);
std::string render_report_html(const nlohmann::json& report);

}  // namespace cloze
