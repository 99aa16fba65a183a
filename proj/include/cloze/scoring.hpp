#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cloze/backend_types.hpp"
#include "cloze/types.hpp"

namespace cloze {

enum class GateScope { per_factor, per_summary };

struct GateConfig {
  double alpha = 0.5;
  double beta = 0.5;
  GateScope scope = GateScope::per_factor;
};

struct FactorScore {
  std::size_t factor_index = 0;
  std::string gold_surface;    // factor in the summary under evaluation
  std::string filled_surface;  // backend's answer
  double f1 = 0.0;
  double confidence = 0.0;
  bool gated = false;
  double contribution = 0.0;
};

struct UnitScore {
  std::string unit_id;
  std::vector<FactorScore> factor_scores;
  double cloze_score = 0.0;
  std::vector<Span> error_spans;
  bool no_factors = false;  // N=0: vacuous score 1.0, flagged for callers
};

// Token-level F1 over normalized token multisets. Both empty -> 1.0,
// exactly one empty -> 0.0.
double token_f1(std::string_view gold, std::string_view generated);

// Mean predicted token probability; empty fill -> 0.0.
double factor_confidence(const ClozeFill& fill);

struct GateResult {
  bool gated = false;
  double contribution = 0.0;
};

// Zeroes the contribution iff confidence < alpha AND f1 < beta
// (strict: boundary values pass).
GateResult gate(double f1, double confidence, const GateConfig& cfg);

UnitScore score_unit(const std::string& unit_id, const std::vector<FactualFactor>& factors,
                     const std::vector<ClozeFill>& fills, const GateConfig& cfg,
                     double error_threshold = 0.5);

// Spans of factors whose contribution falls below the threshold.
std::vector<Span> localize_errors(const UnitScore& score,
                                  const std::vector<FactualFactor>& factors,
                                  double threshold = 0.5);

}  // namespace cloze
