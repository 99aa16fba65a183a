// Test-only helpers: a deterministic synthetic corpus whose factual
// structure is known by construction, plus independent oracles used to
// cross-check the production implementations.
#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cloze/extraction.hpp"
#include "cloze/types.hpp"

namespace cloze::testsupport {

// ---------------------------------------------------------------------------
// Synthetic corpus
//
// Every unit has a gold summary of 3 sentences, each contributing one
// entity ("Alfred Baker") and one noun phrase ("the golden castle"):
// 6 factors per unit, 3 per kind. Entities and noun phrases are unique
// corpus-wide, and each document contains its own gold sentences plus
// neutral filler, so cross-unit replacements are guaranteed absent.
// ---------------------------------------------------------------------------

inline const std::array<const char*, 30>& first_names() {
  static const std::array<const char*, 30> v = {
      "Alfred", "Beatrix", "Casper", "Delia",  "Edmund",  "Flora",  "Gideon", "Harriet",
      "Ignatz", "Jolene", "Kermit", "Lavinia", "Magnus",  "Nadia",  "Osborn", "Petra",
      "Quincy", "Rosalind", "Silas", "Tamsin", "Ulric",   "Verity", "Wendell", "Xenia",
      "Yorick", "Zelda",  "Ambrose", "Bronwyn", "Cedric", "Dorothea"};
  return v;
}

inline const std::array<const char*, 30>& last_names() {
  static const std::array<const char*, 30> v = {
      "Ashworth", "Blackwood", "Carmichael", "Davenport", "Ellington", "Fairbanks",
      "Galloway", "Hathaway",  "Ironside",   "Jennings",  "Kingsley",  "Lockhart",
      "Merriweather", "Northgate", "Okafor",  "Pemberton", "Quimby",    "Ravenscroft",
      "Sterling", "Thackeray", "Underwood",  "Vanderbilt", "Whitfield", "Xiong",
      "Yardley",  "Zimmerman", "Abernathy",  "Bellamy",    "Crofton",   "Dunmore"};
  return v;
}

inline const std::array<const char*, 30>& adjectives() {
  static const std::array<const char*, 30> v = {
      "golden", "silver", "crimson", "emerald", "ancient", "wooden", "marble", "gilded",
      "rusty",  "velvet", "amber",   "cobalt",  "ivory",   "obsidian", "scarlet", "bronze",
      "painted", "carved", "frozen", "sunken",  "hidden",  "sacred", "broken", "polished",
      "crooked", "narrow", "quiet",  "distant", "weathered", "towering"};
  return v;
}

inline const std::array<const char*, 30>& nouns() {
  static const std::array<const char*, 30> v = {
      "castle", "bridge", "lantern", "orchard", "harbor", "gallery", "fountain", "archway",
      "tower",  "garden", "library", "chapel",  "mill",   "vineyard", "lighthouse", "pavilion",
      "granary", "aqueduct", "citadel", "cloister", "causeway", "belfry", "quarry", "terrace",
      "windmill", "portico", "rampart", "obelisk", "conservatory", "colonnade"};
  return v;
}

// The second word's index mixes in id/30 so ids that are close share
// neither word; pairs stay unique for id < 900.
inline std::string entity_surface(std::size_t id) {
  return std::string(first_names()[id % 30]) + " " + last_names()[(id + id / 30) % 30];
}

inline std::string np_surface(std::size_t id) {
  return std::string("the ") + adjectives()[id % 30] + " " + nouns()[(id + id / 30) % 30];
}

inline const std::array<const char*, 6>& verbs() {
  static const std::array<const char*, 6> v = {"admired",  "sketched", "praised",
                                               "restored", "surveyed", "described"};
  return v;
}

inline constexpr std::size_t kFactorsPerUnit = 6;
inline constexpr std::size_t kSentencesPerUnit = 3;

// Gold summary with known factor structure: per sentence one entity
// then one noun phrase, reading order = [E0, NP0, E1, NP1, E2, NP2].
inline std::string make_gold_summary(std::size_t unit_index) {
  std::string out;
  for (std::size_t s = 0; s < kSentencesPerUnit; ++s) {
    std::size_t id = unit_index * kSentencesPerUnit + s;
    if (s) out += " ";
    out += entity_surface(id) + " " + verbs()[id % verbs().size()] + " " + np_surface(id) + ".";
  }
  return out;
}

inline EvalUnit make_synthetic_unit(std::size_t unit_index) {
  EvalUnit unit;
  unit.id = "syn-" + std::to_string(unit_index);
  unit.gold_summary = make_gold_summary(unit_index);
  unit.summary = *unit.gold_summary;
  // Filler is deliberately factor-free (lowercase, no determiners, no
  // numbers) so it never supplies checkable facts of its own.
  unit.document = *unit.gold_summary +
                  " witnesses recalled how calm everything seemed. "
                  "officials later confirmed nothing unusual was reported.";
  return unit;
}

inline std::vector<EvalUnit> make_synthetic_corpus(std::size_t size) {
  std::vector<EvalUnit> corpus;
  for (std::size_t i = 0; i < size; ++i) corpus.push_back(make_synthetic_unit(i));
  return corpus;
}

// ---------------------------------------------------------------------------
// Independent token-F1 oracle: its own normalization pass and a
// sort-based multiset intersection, sharing no code with the scorer.
// ---------------------------------------------------------------------------

inline std::vector<std::string> oracle_tokens(const std::string& text) {
  std::string scrubbed;
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isalnum(c)) {
      scrubbed.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c)) {
      scrubbed.push_back(' ');
    } else if (c == '-' && i > 0 && i + 1 < text.size() &&
               std::isalnum(static_cast<unsigned char>(text[i - 1])) &&
               std::isalnum(static_cast<unsigned char>(text[i + 1]))) {
      scrubbed.push_back('-');
    }
    // other punctuation: dropped
  }
  std::vector<std::string> toks;
  std::string cur;
  for (char c : scrubbed + " ") {
    if (c == ' ') {
      if (!cur.empty() && cur != "a" && cur != "an" && cur != "the") toks.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return toks;
}

inline double oracle_token_f1(const std::string& gold, const std::string& generated) {
  auto g = oracle_tokens(gold);
  auto s = oracle_tokens(generated);
  if (g.empty() && s.empty()) return 1.0;
  if (g.empty() || s.empty()) return 0.0;
  std::sort(g.begin(), g.end());
  std::sort(s.begin(), s.end());
  std::vector<std::string> common;
  std::set_intersection(g.begin(), g.end(), s.begin(), s.end(), std::back_inserter(common));
  if (common.empty()) return 0.0;
  double p = static_cast<double>(common.size()) / s.size();
  double r = static_cast<double>(common.size()) / g.size();
  return 2 * p * r / (p + r);
}

// ---------------------------------------------------------------------------
// Brute-force overlap-resolution oracle: enumerate all pairs and apply
// the stated rules directly.
// ---------------------------------------------------------------------------

inline std::vector<RawSpan> oracle_resolve(const std::vector<RawSpan>& raw) {
  auto longest_first = [](const RawSpan& a, const RawSpan& b) {
    if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
    return a.span.begin < b.span.begin;
  };

  std::vector<RawSpan> entities, phrases;
  for (const auto& r : raw)
    (r.kind == FactorKind::named_entity ? entities : phrases).push_back(r);

  std::sort(entities.begin(), entities.end(), longest_first);
  std::vector<RawSpan> kept_entities;
  for (const auto& e : entities) {
    bool clash = false;
    for (const auto& k : kept_entities)
      if (e.span.overlaps(k.span)) clash = true;
    if (!clash) kept_entities.push_back(e);
  }

  std::vector<RawSpan> survivors;
  for (const auto& np : phrases) {
    bool touches = false;
    for (const auto& e : kept_entities)
      if (np.span.overlaps(e.span)) touches = true;
    if (!touches) survivors.push_back(np);
  }
  std::sort(survivors.begin(), survivors.end(), longest_first);
  std::vector<RawSpan> kept_nps;
  for (const auto& np : survivors) {
    bool clash = false;
    for (const auto& k : kept_nps)
      if (np.span.overlaps(k.span)) clash = true;
    if (!clash) kept_nps.push_back(np);
  }

  std::vector<RawSpan> all = kept_entities;
  all.insert(all.end(), kept_nps.begin(), kept_nps.end());
  std::sort(all.begin(), all.end(),
            [](const RawSpan& a, const RawSpan& b) { return a.span.begin < b.span.begin; });
  return all;
}

// ---------------------------------------------------------------------------
// Quadrature oracle for the two-tailed Student-t p-value.
// ---------------------------------------------------------------------------

inline double oracle_t_two_tailed(double t, double dof) {
  t = std::fabs(t);
  auto density = [dof](double x) {
    return std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) /
           std::sqrt(dof * M_PI) * std::pow(1.0 + x * x / dof, -(dof + 1) / 2);
  };
  // Simpson's rule on [0, t]; p = 2 * (1/2 - integral).
  const int n = 40000;  // even
  double h = t / n;
  double sum = density(0.0) + density(t);
  for (int i = 1; i < n; ++i) sum += density(i * h) * (i % 2 ? 4.0 : 2.0);
  double integral = sum * h / 3.0;
  return std::max(0.0, 2.0 * (0.5 - integral));
}

inline double oracle_pearson_r(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    syy += ys[i] * ys[i];
    sxy += xs[i] * ys[i];
  }
  double num = n * sxy - sx * sy;
  double den = std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy);
  return num / den;
}

}  // namespace cloze::testsupport
