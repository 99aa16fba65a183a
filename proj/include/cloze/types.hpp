#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cloze/text.hpp"

namespace cloze {

// One (document, summary) pair; the atom of evaluation.
struct EvalUnit {
  std::string id;
  std::string document;
  std::string summary;
  std::optional<double> human_score;     // in [0,1] when present
  std::optional<std::string> gold_summary;
};

enum class FactorKind { named_entity, noun_phrase };

inline const char* to_string(FactorKind k) {
  return k == FactorKind::named_entity ? "named_entity" : "noun_phrase";
}

// A contiguous factor span in the summary. Factors within one unit are
// pairwise disjoint and indexed 0..N-1 in reading order.
struct FactualFactor {
  std::size_t index = 0;
  Span span;
  std::string surface;
  FactorKind kind = FactorKind::named_entity;
  std::size_t sentence_index = 0;
};

}  // namespace cloze
