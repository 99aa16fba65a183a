#include "cloze/masking.hpp"

#include <algorithm>
#include <random>

#include "cloze/errors.hpp"

namespace cloze {

MaskPlan plan_masks(const std::vector<FactualFactor>& factors, int k, Granularity granularity,
                    const std::string& unit_id) {
  if (k < 1) throw InvalidK(k);
  MaskPlan plan;
  plan.unit_id = unit_id;
  plan.k = k;
  plan.granularity = granularity;

  auto pack = [&](std::size_t first, std::size_t last) {
    // Greedy consecutive packing of indices [first, last).
    for (std::size_t i = first; i < last;) {
      std::vector<std::size_t> group;
      for (int n = 0; n < k && i < last; ++n, ++i) group.push_back(i);
      plan.groups.push_back(std::move(group));
    }
  };

  if (granularity == Granularity::summary_level) {
    pack(0, factors.size());
  } else {
    std::size_t i = 0;
    while (i < factors.size()) {
      std::size_t j = i;
      while (j < factors.size() && factors[j].sentence_index == factors[i].sentence_index) ++j;
      pack(i, j);
      i = j;
    }
  }
  return plan;
}

namespace {

MaskedText render_span(std::string_view source, std::size_t source_offset,
                       const std::vector<FactualFactor>& factors,
                       const std::vector<std::size_t>& group, const std::string& sentinel) {
  MaskedText out;
  std::size_t cursor = 0;  // relative to source
  for (std::size_t idx : group) {
    const auto& f = factors[idx];
    std::size_t rel_begin = f.span.begin - source_offset;
    std::size_t rel_end = f.span.end - source_offset;
    out.text.append(source.substr(cursor, rel_begin - cursor));
    out.slots.push_back({idx, out.text.size()});
    out.text.append(sentinel);
    cursor = rel_end;
  }
  out.text.append(source.substr(cursor));
  return out;
}

}  // namespace

MaskedText render_masked(const EvalUnit& unit, const std::vector<FactualFactor>& factors,
                         const MaskPlan& plan, std::size_t group_index,
                         const std::string& sentinel) {
  const auto& group = plan.groups.at(group_index);
  if (plan.granularity == Granularity::summary_level) {
    MaskedText out = render_span(unit.summary, 0, factors, group, sentinel);
    out.context_scope = Granularity::summary_level;
    return out;
  }
  // All indices in a sentence-level group share a sentence; render only
  // that sentence as the question text.
  std::size_t sent_idx = factors.at(group.front()).sentence_index;
  auto sentences = split_sentences(unit.summary);
  Span sent = sentences.at(sent_idx);
  MaskedText out = render_span(
      std::string_view(unit.summary).substr(sent.begin, sent.length()), sent.begin, factors,
      group, sentinel);
  out.context_scope = Granularity::sentence_level;
  out.sentence_index = sent_idx;
  return out;
}

TrainingSample make_training_sample(const std::string& document, const std::string& gold_summary,
                                    std::uint64_t rng_seed, const Extractor& extractor,
                                    const std::string& sentinel) {
  auto sentences = split_sentences(gold_summary);
  if (sentences.empty()) throw NoFactors("gold summary has no sentences");
  auto factors = extract_factors(gold_summary, extractor);

  std::vector<std::vector<std::size_t>> by_sentence(sentences.size());
  for (const auto& f : factors) by_sentence[f.sentence_index].push_back(f.index);
  bool any = std::any_of(by_sentence.begin(), by_sentence.end(),
                         [](const auto& v) { return !v.empty(); });
  if (!any) throw NoFactors("no sentence of the summary contains a factual factor");

  std::mt19937_64 rng(rng_seed);
  // Uniform sentence choice; redraw sentences without factors.
  std::size_t sent_idx;
  do {
    sent_idx = rng() % sentences.size();
  } while (by_sentence[sent_idx].empty());

  const auto& candidates = by_sentence[sent_idx];
  std::size_t m = 1 + rng() % candidates.size();

  std::vector<std::size_t> chosen(candidates);
  std::shuffle(chosen.begin(), chosen.end(), rng);
  chosen.resize(m);
  std::sort(chosen.begin(), chosen.end());

  Span sent = sentences[sent_idx];
  MaskedText masked = render_span(
      std::string_view(gold_summary).substr(sent.begin, sent.length()), sent.begin, factors,
      chosen, sentinel);

  TrainingSample sample;
  sample.masked_sentence = masked.text;
  sample.input = document + "\n" + masked.text;
  sample.sentence_index = sent_idx;
  for (std::size_t idx : chosen) sample.targets.push_back(factors[idx].surface);
  return sample;
}

}  // namespace cloze
