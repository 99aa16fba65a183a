#include "cloze/scoring.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cloze/errors.hpp"

namespace cloze {

double token_f1(std::string_view gold, std::string_view generated) {
  auto g = normalize(gold).tokens;
  auto s = normalize(generated).tokens;
  if (g.empty() && s.empty()) return 1.0;
  if (g.empty() || s.empty()) return 0.0;

  std::map<std::string, std::size_t> gold_counts;
  for (const auto& t : g) ++gold_counts[t];
  std::size_t overlap = 0;
  for (const auto& t : s) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      ++overlap;
      --it->second;
    }
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / s.size();
  double recall = static_cast<double>(overlap) / g.size();
  return 2.0 * precision * recall / (precision + recall);
}

double factor_confidence(const ClozeFill& fill) {
  if (fill.token_probs.empty()) return 0.0;
  double sum = std::accumulate(fill.token_probs.begin(), fill.token_probs.end(), 0.0);
  return sum / fill.token_probs.size();
}

GateResult gate(double f1, double confidence, const GateConfig& cfg) {
  bool gated = confidence < cfg.alpha && f1 < cfg.beta;
  return {gated, gated ? 0.0 : f1};
}

UnitScore score_unit(const std::string& unit_id, const std::vector<FactualFactor>& factors,
                     const std::vector<ClozeFill>& fills, const GateConfig& cfg,
                     double error_threshold) {
  if (fills.size() != factors.size())
    throw FillMismatch("unit " + unit_id + ": " + std::to_string(fills.size()) + " fills for " +
                       std::to_string(factors.size()) + " factors");

  UnitScore score;
  score.unit_id = unit_id;

  if (factors.empty()) {
    // No checkable facts means no detected inconsistency.
    score.cloze_score = 1.0;
    score.no_factors = true;
    return score;
  }

  // Index fills by factor so callers may pass them in any order.
  std::vector<const ClozeFill*> by_factor(factors.size(), nullptr);
  for (const auto& fill : fills) {
    if (fill.factor_index >= factors.size() || by_factor[fill.factor_index])
      throw FillMismatch("unit " + unit_id + ": bad or duplicate factor_index " +
                         std::to_string(fill.factor_index));
    by_factor[fill.factor_index] = &fill;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& fill = *by_factor[i];
    FactorScore fs;
    fs.factor_index = i;
    fs.gold_surface = factors[i].surface;
    fs.filled_surface = fill.filled;
    fs.f1 = token_f1(fs.gold_surface, fs.filled_surface);
    fs.confidence = factor_confidence(fill);
    if (cfg.scope == GateScope::per_factor) {
      auto g = gate(fs.f1, fs.confidence, cfg);
      fs.gated = g.gated;
      fs.contribution = g.contribution;
    } else {
      fs.contribution = fs.f1;
    }
    total += fs.contribution;
    score.factor_scores.push_back(std::move(fs));
  }
  score.cloze_score = total / factors.size();

  if (cfg.scope == GateScope::per_summary) {
    double mean_conf = 0.0;
    for (const auto& fs : score.factor_scores) mean_conf += fs.confidence;
    mean_conf /= score.factor_scores.size();
    if (mean_conf < cfg.alpha && score.cloze_score < cfg.beta) {
      score.cloze_score = 0.0;
      for (auto& fs : score.factor_scores) {
        fs.gated = true;
        fs.contribution = 0.0;
      }
    }
  }

  score.error_spans = localize_errors(score, factors, error_threshold);
  return score;
}

std::vector<Span> localize_errors(const UnitScore& score,
                                  const std::vector<FactualFactor>& factors, double threshold) {
  std::vector<Span> spans;
  for (const auto& fs : score.factor_scores) {
    if (fs.contribution < threshold) spans.push_back(factors.at(fs.factor_index).span);
  }
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });
  return spans;
}

}  // namespace cloze
