#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cloze/extraction.hpp"
#include "cloze/types.hpp"

namespace cloze {

enum class Granularity { summary_level, sentence_level };

inline const char* to_string(Granularity g) {
  return g == Granularity::summary_level ? "summary_level" : "sentence_level";
}

// Partition of a unit's factor indices into cloze passes of size <= k.
struct MaskPlan {
  std::string unit_id;
  int k = 1;
  Granularity granularity = Granularity::sentence_level;
  std::vector<std::vector<std::size_t>> groups;
};

struct SlotRef {
  std::size_t factor_index = 0;
  std::size_t position = 0;  // byte offset of the sentinel in `text`
};

// One cloze question: the context with the group's factor spans
// replaced by the sentinel.
struct MaskedText {
  std::string text;
  std::vector<SlotRef> slots;
  Granularity context_scope = Granularity::summary_level;
  std::size_t sentence_index = 0;  // meaningful for sentence_level only
};

inline constexpr const char* kDefaultSentinel = "[MASK]";

// Greedy consecutive packing: ceil(N/k) groups at summary level,
// sum over sentences of ceil(N_s/k) at sentence level.
MaskPlan plan_masks(const std::vector<FactualFactor>& factors, int k, Granularity granularity,
                    const std::string& unit_id = {});

MaskedText render_masked(const EvalUnit& unit, const std::vector<FactualFactor>& factors,
                         const MaskPlan& plan, std::size_t group_index,
                         const std::string& sentinel = kDefaultSentinel);

struct TrainingSample {
  std::string input;                 // document + masked sentence
  std::string masked_sentence;
  std::vector<std::string> targets;  // masked factor surfaces, reading order
  std::size_t sentence_index = 0;
};

// Cloze-training data prep: pick a random sentence of the gold summary
// and mask a random number of its factors. Deterministic per seed.
TrainingSample make_training_sample(const std::string& document, const std::string& gold_summary,
                                    std::uint64_t rng_seed, const Extractor& extractor,
                                    const std::string& sentinel = kDefaultSentinel);

}  // namespace cloze
