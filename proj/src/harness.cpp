#include "cloze/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>

#include "cloze/errors.hpp"
#include "json.hpp"

namespace cloze {

std::vector<EvalUnit> load_units(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetParseError(path, 0, "cannot open file");
  std::vector<EvalUnit> units;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw DatasetParseError(path, line_no, e.what());
    }
    EvalUnit unit;
    try {
      unit.id = record.at("id").get<std::string>();
      unit.document = record.at("document").get<std::string>();
      unit.summary = record.at("summary").get<std::string>();
      if (record.contains("human_score")) unit.human_score = record["human_score"].get<double>();
      if (record.contains("gold_summary"))
        unit.gold_summary = record["gold_summary"].get<std::string>();
    } catch (const std::exception& e) {
      throw DatasetParseError(path, line_no, e.what());
    }
    units.push_back(std::move(unit));
  }
  return units;
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetParseError(path, 0, "cannot open manifest");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw DatasetParseError(path, 0, e.what());
  }
  DatasetManifest m;
  m.name = doc.value("name", "");
  m.score_min = doc.value("score_min", 0.0);
  m.score_max = doc.value("score_max", 1.0);
  return m;
}

AnnotatedDataset load_dataset(const std::string& path, const DatasetManifest& manifest) {
  AnnotatedDataset ds;
  ds.name = manifest.name.empty() ? path : manifest.name;
  ds.units = load_units(path);
  if (ds.units.size() < 3)
    throw DegenerateInput("dataset " + ds.name + ": needs at least 3 units");
  double range = manifest.score_max - manifest.score_min;
  if (range <= 0.0) throw DegenerateInput("dataset " + ds.name + ": bad score scale");
  for (auto& unit : ds.units) {
    if (!unit.human_score)
      throw DatasetParseError(path, 0, "unit " + unit.id + " lacks human_score");
    double normalized = (*unit.human_score - manifest.score_min) / range;
    if (normalized < 0.0 || normalized > 1.0)
      throw DatasetParseError(path, 0, "unit " + unit.id + " human_score outside declared scale");
    unit.human_score = normalized;
  }
  return ds;
}

PearsonBenchmarkResult run_pearson_benchmark(const AnnotatedDataset& dataset,
                                             const PipelineConfig& config, Backend& backend) {
  PearsonBenchmarkResult result;
  auto corpus_eval = evaluate_corpus(dataset.units, config, backend);
  result.per_unit = std::move(corpus_eval.units);
  for (std::size_t i = 0; i < dataset.units.size(); ++i) {
    result.metric_scores.push_back(result.per_unit[i].score.cloze_score);
    result.human_scores.push_back(*dataset.units[i].human_score);
  }
  result.correlation = pearson_r(result.metric_scores, result.human_scores);
  return result;
}

FactorPool build_factor_pool(const std::vector<EvalUnit>& corpus, const ExtractorConfig& config) {
  FactorPool pool;
  auto extractor = make_extractor(config);
  for (const auto& unit : corpus) {
    if (!unit.gold_summary) continue;
    for (const auto& f : extract_factors(*unit.gold_summary, *extractor)) {
      if (f.kind == FactorKind::named_entity)
        pool.entities.push_back(f.surface);
      else
        pool.noun_phrases.push_back(f.surface);
    }
  }
  auto dedupe = [](std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedupe(pool.entities);
  dedupe(pool.noun_phrases);
  return pool;
}

CorruptedUnit inject_errors(const EvalUnit& unit, int level, ErrorKind kind,
                            std::uint64_t rng_seed, const FactorPool& pool,
                            const ExtractorConfig& extractor_config) {
  if (!unit.gold_summary)
    throw InsufficientFactors("unit " + unit.id + ": no gold summary to corrupt");
  const std::string& gold = *unit.gold_summary;
  auto factors = extract_factors(gold, extractor_config);

  FactorKind want =
      kind == ErrorKind::entity ? FactorKind::named_entity : FactorKind::noun_phrase;
  std::vector<std::size_t> candidates;
  for (const auto& f : factors)
    if (f.kind == want) candidates.push_back(f.index);
  if (static_cast<int>(candidates.size()) < level)
    throw InsufficientFactors("unit " + unit.id + ": " + std::to_string(candidates.size()) +
                              " " + to_string(kind) + " factors, need " + std::to_string(level));

  std::mt19937_64 rng(rng_seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(level);
  std::sort(candidates.begin(), candidates.end());

  // Replacements must be true factual errors: same kind, from elsewhere
  // in the corpus, absent from this unit's document.
  const auto& source = kind == ErrorKind::entity ? pool.entities : pool.noun_phrases;
  std::string doc_lower = to_lower_ascii(unit.document);
  std::vector<std::string> usable;
  for (const auto& s : source)
    if (doc_lower.find(to_lower_ascii(s)) == std::string::npos) usable.push_back(s);
  if (static_cast<int>(usable.size()) < level)
    throw InsufficientFactors("corpus pool has too few " + std::string(to_string(kind)) +
                              " replacements for unit " + unit.id);
  std::shuffle(usable.begin(), usable.end(), rng);

  std::string corrupted = gold;
  // Rewrite from the back so earlier offsets stay valid.
  for (std::size_t i = candidates.size(); i-- > 0;) {
    const auto& f = factors[candidates[i]];
    corrupted.replace(f.span.begin, f.span.length(), usable[i]);
  }

  CorruptedUnit out;
  out.unit = unit;
  out.unit.summary = corrupted;
  out.corrupted_indices = candidates;
  return out;
}

namespace {

double mean_corpus_score(const std::vector<EvalUnit>& units, const PipelineConfig& config,
                         Backend& backend) {
  return evaluate_corpus(units, config, backend).mean_score;
}

// Cross-unit sentence shuffle: each unit gets an irrelevant "summary"
// stitched from other units' documents, truncated to its gold length.
std::vector<EvalUnit> make_lower_bound_units(const std::vector<EvalUnit>& corpus,
                                             std::uint64_t seed) {
  struct Sent {
    std::size_t owner;
    std::string text;
  };
  std::vector<Sent> sentences;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& span : split_sentences(corpus[i].document))
      sentences.push_back({i, corpus[i].document.substr(span.begin, span.length())});
  }
  std::mt19937_64 rng(seed);
  std::shuffle(sentences.begin(), sentences.end(), rng);

  std::vector<EvalUnit> out;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::size_t target_len = corpus[i].gold_summary ? corpus[i].gold_summary->size()
                                                    : corpus[i].summary.size();
    std::string random_text;
    std::size_t scanned = 0;
    while (random_text.size() < target_len && scanned < sentences.size()) {
      const auto& s = sentences[cursor % sentences.size()];
      ++cursor;
      ++scanned;
      if (s.owner == i) continue;  // never borrow from the unit's own document
      if (!random_text.empty()) random_text.push_back(' ');
      random_text += s.text;
    }
    if (random_text.empty()) random_text = "none";
    EvalUnit u = corpus[i];
    u.summary = random_text.substr(0, std::max<std::size_t>(target_len, 1));
    // Avoid cutting the last word in half mid-token noise; trim to the
    // last space when truncation landed inside a word.
    if (u.summary.size() == target_len && random_text.size() > target_len) {
      auto pos = u.summary.find_last_of(' ');
      if (pos != std::string::npos && pos > 0) u.summary.resize(pos);
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

GoFigureReport run_go_figure(const std::vector<EvalUnit>& corpus, const PipelineConfig& config,
                             Backend& backend, std::uint64_t seed) {
  if (corpus.size() < 10) throw DegenerateInput("go-figure corpus needs at least 10 units");
  for (const auto& u : corpus)
    if (!u.gold_summary)
      throw DegenerateInput("go-figure: unit " + u.id + " lacks gold_summary");

  GoFigureReport report;

  // Upper bound: the gold summaries themselves.
  std::vector<EvalUnit> gold_units;
  for (const auto& u : corpus) {
    EvalUnit g = u;
    g.summary = *u.gold_summary;
    gold_units.push_back(std::move(g));
  }
  report.upper_bound = mean_corpus_score(gold_units, config, backend);

  auto pool = build_factor_pool(corpus, config.extractor);

  std::vector<double> level_obs_x, level_obs_y;
  for (int level = 1; level <= 3; ++level) {
    LevelScores scores;
    for (ErrorKind kind : {ErrorKind::entity, ErrorKind::non_entity}) {
      std::vector<EvalUnit> corrupted;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::uint64_t unit_seed = seed * 1000003ULL + i * 31ULL + level * 7ULL +
                                  (kind == ErrorKind::entity ? 0 : 1);
        corrupted.push_back(
            inject_errors(corpus[i], level, kind, unit_seed, pool, config.extractor).unit);
      }
      double mean = mean_corpus_score(corrupted, config, backend);
      if (kind == ErrorKind::entity)
        scores.entity = mean;
      else
        scores.non_entity = mean;
      level_obs_x.push_back(level);
      level_obs_y.push_back(mean);
    }
    report.level_scores[level] = scores;
  }

  report.lower_bound =
      mean_corpus_score(make_lower_bound_units(corpus, seed ^ 0x5DEECE66DULL), config, backend);

  auto corr = pearson_r(level_obs_x, level_obs_y);
  report.sensitivity_correlation = corr.r;
  report.p_value = corr.p;
  return report;
}

TimingReport time_pipeline(const std::vector<EvalUnit>& corpus, const PipelineConfig& config,
                           Backend& backend, int repetitions) {
  repetitions = std::max(1, repetitions);
  TimingReport report;
  report.unit_count = corpus.size();

  // Warm-up pass, excluded from timing.
  auto warm = evaluate_corpus(corpus, config, backend);
  report.backend_calls = warm.backend_calls;

  double total = 0.0;
  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    evaluate_corpus(corpus, config, backend);
    auto t1 = std::chrono::steady_clock::now();
    total += std::chrono::duration<double>(t1 - t0).count();
  }
  report.wall_clock_total = total / repetitions;
  report.sec_per_summary =
      corpus.empty() ? 0.0 : report.wall_clock_total / static_cast<double>(corpus.size());
  return report;
}

std::vector<SweepRow> sweep_k(const std::vector<EvalUnit>& corpus, const PipelineConfig& config,
                              Backend& backend, const std::vector<int>& ks) {
  if (ks.empty()) throw DegenerateInput("sweep_k: empty k range");

  // Extract once, reuse across the sweep.
  auto extractor = make_extractor(config.extractor);
  std::vector<EvalUnit> validated;
  std::vector<std::vector<FactualFactor>> factors;
  for (const auto& unit : corpus) {
    validated.push_back(validate_unit(unit));
    factors.push_back(extract_factors(validated.back().summary, *extractor));
  }

  std::vector<SweepRow> rows;
  for (int k : ks) {
    PipelineConfig cfg = config;
    cfg.k = k;
    SweepRow row;
    row.k = k;
    double total_score = 0.0;
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < validated.size(); ++i) {
      auto eval = evaluate_with_factors(validated[i], factors[i], cfg, backend);
      total_score += eval.score.cloze_score;
      row.backend_calls += eval.backend_calls;
    }
    auto t1 = std::chrono::steady_clock::now();
    row.wall_clock = std::chrono::duration<double>(t1 - t0).count();
    row.mean_score = validated.empty() ? 0.0 : total_score / validated.size();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cloze
