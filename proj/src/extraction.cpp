#include "cloze/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <unordered_set>

#include "cloze/errors.hpp"

namespace cloze {

namespace {

struct Token {
  Span raw;        // including surrounding punctuation
  Span core;       // punctuation-stripped
  std::string word;  // summary[core], original case
  bool terminal_after = false;  // raw token ends with . ! ?
};

std::vector<Token> tokenize_with_spans(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0, n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    std::size_t begin = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    Token t;
    t.raw = {begin, i};
    std::size_t cb = begin, ce = i;
    while (cb < ce && std::ispunct(static_cast<unsigned char>(text[cb]))) ++cb;
    while (ce > cb && std::ispunct(static_cast<unsigned char>(text[ce - 1]))) --ce;
    t.core = {cb, ce};
    t.word = std::string(text.substr(cb, ce - cb));
    char last = text[t.raw.end - 1];
    t.terminal_after = last == '.' || last == '!' || last == '?';
    out.push_back(std::move(t));
  }
  return out;
}

const std::unordered_set<std::string>& determiners() {
  static const std::unordered_set<std::string> kDet = {
      "a", "an", "the", "this", "that", "these", "those",
      "his", "her", "their", "its", "our", "my", "your"};
  return kDet;
}

const std::unordered_set<std::string>& function_words() {
  static const std::unordered_set<std::string> kFn = {
      "a",  "an", "the", "and", "or", "but", "nor", "so", "yet",
      "of", "in", "on", "at", "to", "by", "for", "with", "from", "into",
      "over", "under", "near", "after", "before", "during", "about",
      "is", "are", "was", "were", "be", "been", "being", "am",
      "has", "have", "had", "do", "does", "did", "will", "would",
      "can", "could", "may", "might", "must", "shall", "should",
      "he", "she", "it", "they", "we", "you", "i", "who", "which",
      "as", "if", "than", "then", "there", "when", "where", "while",
      "not", "no", "his", "her", "their", "its", "our", "my", "your",
      "this", "that", "these", "those"};
  return kFn;
}

const std::unordered_set<std::string>& date_words() {
  static const std::unordered_set<std::string> kDates = {
      "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
      "january", "february", "march", "april", "may", "june", "july",
      "august", "september", "october", "november", "december",
      "today", "yesterday", "tomorrow"};
  return kDates;
}

bool is_capitalized(const std::string& w) {
  return !w.empty() && std::isupper(static_cast<unsigned char>(w[0]));
}

bool is_numeric_token(const std::string& w) {
  if (w.empty() || !std::isdigit(static_cast<unsigned char>(w[0]))) return false;
  for (char c : w) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != ',' && c != '.' &&
        c != ':' && c != '/')
      return false;
  }
  return true;
}

bool is_content_word(const std::string& w) {
  if (w.size() < 2 || is_capitalized(w) || is_numeric_token(w)) return false;
  for (char c : w)
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '-') return false;
  return !function_words().contains(to_lower_ascii(w));
}

// Capitalized-sequence NER + gazetteer dates + numeric tokens, and a
// determiner-led noun chunker. Deterministic and dependency-free; the
// statistical extractors plug in through the same registry.
class RuleBasedExtractor final : public Extractor {
 public:
  std::vector<RawSpan> extract(std::string_view summary) const override {
    std::vector<RawSpan> out;
    auto toks = tokenize_with_spans(summary);
    std::vector<bool> in_entity(toks.size(), false);

    // Capitalized runs.
    for (std::size_t i = 0; i < toks.size();) {
      if (!is_capitalized(toks[i].word)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < toks.size() && is_capitalized(toks[j].word)) {
        ++j;
        if (toks[j - 1].terminal_after) break;
      }
      bool all_function = true;
      for (std::size_t t = i; t < j; ++t)
        if (!function_words().contains(to_lower_ascii(toks[t].word))) all_function = false;
      if (!all_function) {
        Span sp{toks[i].core.begin, toks[j - 1].core.end};
        out.push_back({sp, std::string(summary.substr(sp.begin, sp.length())),
                       FactorKind::named_entity, "ENT"});
        for (std::size_t t = i; t < j; ++t) in_entity[t] = true;
      }
      i = j;
    }

    // Gazetteer dates and numeric tokens.
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (in_entity[i] || toks[i].word.empty()) continue;
      if (date_words().contains(to_lower_ascii(toks[i].word))) {
        out.push_back({toks[i].core, toks[i].word, FactorKind::named_entity, "DATE"});
        in_entity[i] = true;
      } else if (is_numeric_token(toks[i].word)) {
        out.push_back({toks[i].core, toks[i].word, FactorKind::named_entity, "CARDINAL"});
        in_entity[i] = true;
      }
    }

    // Determiner-led noun chunks, at most 4 content words.
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (!determiners().contains(to_lower_ascii(toks[i].word))) continue;
      if (toks[i].terminal_after) continue;
      std::size_t j = i + 1, taken = 0;
      std::size_t last = i;
      while (j < toks.size() && taken < 4 && is_content_word(toks[j].word)) {
        last = j;
        ++taken;
        bool stop = toks[j].terminal_after;
        ++j;
        if (stop) break;
      }
      if (taken > 0) {
        Span sp{toks[i].core.begin, toks[last].core.end};
        out.push_back({sp, std::string(summary.substr(sp.begin, sp.length())),
                       FactorKind::noun_phrase, "NP"});
        i = last;
      }
    }

    std::sort(out.begin(), out.end(),
              [](const RawSpan& a, const RawSpan& b) { return a.span.begin < b.span.begin; });
    return out;
  }
};

struct Registry {
  std::mutex mu;
  std::map<std::string, ExtractorFactory> factories;
};

Registry& registry() {
  static Registry r;
  static std::once_flag once;
  std::call_once(once, [] {
    r.factories["rule-based"] = [](const std::map<std::string, std::string>&) {
      return std::make_unique<RuleBasedExtractor>();
    };
  });
  return r;
}

}  // namespace

void register_extractor(const std::string& name, ExtractorFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.factories[name] = std::move(factory);
}

std::unique_ptr<Extractor> make_extractor(const ExtractorConfig& config) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(config.plugin_name);
  if (it == r.factories.end()) throw UnknownExtractor(config.plugin_name);
  return it->second(config.options);
}

std::vector<std::string> registered_extractors() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> names;
  for (auto& [name, _] : r.factories) names.push_back(name);
  return names;
}

std::vector<RawSpan> extract_raw(std::string_view summary, const ExtractorConfig& config) {
  if (summary.empty()) throw ExtractorFailure("extract_raw: empty summary");
  auto extractor = make_extractor(config);
  try {
    return extractor->extract(summary);
  } catch (const ClozeError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExtractorFailure(std::string("extractor '") + config.plugin_name + "' failed: " +
                           e.what());
  }
}

namespace {

// Greedy disjoint selection by (length desc, start asc).
std::vector<RawSpan> keep_longest_disjoint(std::vector<RawSpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const RawSpan& a, const RawSpan& b) {
    if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
    return a.span.begin < b.span.begin;
  });
  std::vector<RawSpan> kept;
  for (auto& s : spans) {
    bool clash = false;
    for (auto& k : kept)
      if (s.span.overlaps(k.span)) clash = true;
    if (!clash) kept.push_back(std::move(s));
  }
  return kept;
}

}  // namespace

std::vector<FactualFactor> resolve_overlaps(const std::vector<RawSpan>& raw,
                                            const std::vector<Span>& sentences,
                                            std::string_view summary) {
  std::vector<RawSpan> entities, phrases;
  for (const auto& s : raw)
    (s.kind == FactorKind::named_entity ? entities : phrases).push_back(s);

  // Entities are the main part; overlapping entities (possible with
  // sloppy plugins) are deduped longest-first.
  entities = keep_longest_disjoint(std::move(entities));

  // Every noun phrase that touches an entity is dropped outright.
  std::vector<RawSpan> np_survivors;
  for (auto& np : phrases) {
    bool touches_entity = false;
    for (auto& ne : entities)
      if (np.span.overlaps(ne.span)) touches_entity = true;
    if (!touches_entity) np_survivors.push_back(std::move(np));
  }
  np_survivors = keep_longest_disjoint(std::move(np_survivors));

  std::vector<RawSpan> all = std::move(entities);
  all.insert(all.end(), np_survivors.begin(), np_survivors.end());

  std::vector<FactualFactor> factors;
  for (auto& s : all) {
    Span sp = s.span;
    std::size_t sent_idx = 0;
    bool found = false;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (sp.begin >= sentences[i].begin && sp.begin < sentences[i].end) {
        sent_idx = i;
        found = true;
        // Clip to the containing sentence.
        if (sp.end > sentences[i].end) sp.end = sentences[i].end;
        break;
      }
    }
    if (!found) continue;  // span sits entirely in inter-sentence whitespace
    while (sp.begin < sp.end && std::isspace(static_cast<unsigned char>(summary[sp.end - 1])))
      --sp.end;
    if (sp.begin >= sp.end) continue;
    FactualFactor f;
    f.span = sp;
    f.surface = std::string(summary.substr(sp.begin, sp.length()));
    f.kind = s.kind;
    f.sentence_index = sent_idx;
    factors.push_back(std::move(f));
  }

  std::sort(factors.begin(), factors.end(),
            [](const FactualFactor& a, const FactualFactor& b) { return a.span.begin < b.span.begin; });
  for (std::size_t i = 0; i < factors.size(); ++i) factors[i].index = i;
  return factors;
}

std::vector<FactualFactor> extract_factors(std::string_view summary,
                                           const ExtractorConfig& config) {
  auto raw = extract_raw(summary, config);
  return resolve_overlaps(raw, split_sentences(summary), summary);
}

std::vector<FactualFactor> extract_factors(std::string_view summary,
                                           const Extractor& extractor) {
  if (summary.empty()) throw ExtractorFailure("extract_factors: empty summary");
  auto raw = extractor.extract(summary);
  return resolve_overlaps(raw, split_sentences(summary), summary);
}

}  // namespace cloze
