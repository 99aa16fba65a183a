#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cloze/types.hpp"

namespace cloze {

// Extractor output before overlap resolution; named-entity and
// noun-phrase spans may still overlap each other here.
struct RawSpan {
  Span span;
  std::string surface;
  FactorKind kind = FactorKind::named_entity;
  std::string label;  // extractor-specific tag, e.g. entity type
};

struct ExtractorConfig {
  std::string plugin_name = "rule-based";
  std::map<std::string, std::string> options;
};

class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual std::vector<RawSpan> extract(std::string_view summary) const = 0;
  // Whether one instance may be shared across concurrent workers.
  virtual bool thread_safe() const { return true; }
};

using ExtractorFactory =
    std::function<std::unique_ptr<Extractor>(const std::map<std::string, std::string>&)>;

void register_extractor(const std::string& name, ExtractorFactory factory);
std::unique_ptr<Extractor> make_extractor(const ExtractorConfig& config);
std::vector<std::string> registered_extractors();

// Runs the configured plugin. Throws UnknownExtractor for an
// unregistered name, ExtractorFailure around plugin errors.
std::vector<RawSpan> extract_raw(std::string_view summary, const ExtractorConfig& config);

// Overlap resolution: named entities win, conflicting noun phrases are
// dropped, NP-vs-NP conflicts keep the longest (ties: earliest start).
// Factors crossing a sentence boundary are clipped to their sentence.
std::vector<FactualFactor> resolve_overlaps(const std::vector<RawSpan>& raw,
                                            const std::vector<Span>& sentences,
                                            std::string_view summary);

// extract_raw + resolve_overlaps with the summary's own sentence spans.
std::vector<FactualFactor> extract_factors(std::string_view summary,
                                           const ExtractorConfig& config);
std::vector<FactualFactor> extract_factors(std::string_view summary,
                                           const Extractor& extractor);

}  // namespace cloze
