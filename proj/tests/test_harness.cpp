#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "cloze/errors.hpp"
#include "cloze/harness.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/synthetic.hpp"

using namespace cloze;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& tag, const std::string& contents) {
    path = std::filesystem::temp_directory_path() /
           ("cloze-ds-" + tag + "-" + std::to_string(::getpid()) + ".jsonl");
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

std::string unit_line(const EvalUnit& unit, double human_score) {
  nlohmann::json j = {{"id", unit.id},
                      {"document", unit.document},
                      {"summary", unit.summary},
                      {"human_score", human_score}};
  if (unit.gold_summary) j["gold_summary"] = *unit.gold_summary;
  return j.dump() + "\n";
}

// Corpus whose metric score is known by construction: unit i has
// (i % 4) factors replaced with surfaces absent from every document,
// so the doc-lookup backend scores it exactly (6 - i%4) / 6.
std::vector<EvalUnit> make_benchmark_corpus(std::size_t size, std::vector<double>* expected) {
  std::vector<EvalUnit> corpus;
  for (std::size_t i = 0; i < size; ++i) {
    auto unit = testsupport::make_synthetic_unit(i);
    auto factors = extract_factors(unit.summary, ExtractorConfig{});
    std::size_t errors = i % 4;
    std::string summary = unit.summary;
    for (std::size_t e = errors; e-- > 0;) {
      const auto& f = factors[e];
      std::string bogus = (f.kind == FactorKind::named_entity) ? "Zanzibar Quixote"
                                                               : "the spurious fragment";
      summary.replace(f.span.begin, f.span.length(), bogus);
    }
    unit.summary = summary;
    corpus.push_back(unit);
    if (expected)
      expected->push_back(static_cast<double>(testsupport::kFactorsPerUnit - errors) /
                          testsupport::kFactorsPerUnit);
  }
  return corpus;
}

}  // namespace

TEST_CASE("dataset loader reports the offending line") {
  TempFile file("badline", R"({"id":"a","document":"d.","summary":"s."})"
                           "\n{this is not json}\n");
  try {
    load_units(file.path.string());
    FAIL("expected a parse error");
  } catch (const DatasetParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("dataset loader reports missing required fields") {
  TempFile file("nofield", R"({"id":"a","summary":"s."})"
                           "\n");
  CHECK_THROWS_AS(load_units(file.path.string()), DatasetParseError);
  CHECK_THROWS_AS(load_units("/no/such/file.jsonl"), DatasetParseError);
}

TEST_CASE("dataset loader skips blank lines and keeps order") {
  TempFile file("order", R"({"id":"a","document":"d.","summary":"s."})"
                         "\n\n"
                         R"({"id":"b","document":"d.","summary":"s.","gold_summary":"g."})"
                         "\n");
  auto units = load_units(file.path.string());
  REQUIRE(units.size() == 2);
  CHECK(units[0].id == "a");
  CHECK(units[1].id == "b");
  CHECK(!units[0].gold_summary);
  REQUIRE(units[1].gold_summary);
  CHECK(*units[1].gold_summary == "g.");
}

TEST_CASE("annotated dataset normalizes human scores to the declared scale") {
  std::string lines;
  for (int i = 0; i < 4; ++i) {
    auto unit = testsupport::make_synthetic_unit(i);
    lines += unit_line(unit, 1.0 + i);  // scale [1, 5]
  }
  TempFile file("scale", lines);
  DatasetManifest manifest;
  manifest.name = "scaled";
  manifest.score_min = 1.0;
  manifest.score_max = 5.0;
  auto ds = load_dataset(file.path.string(), manifest);
  for (int i = 0; i < 4; ++i) CHECK(*ds.units[i].human_score == doctest::Approx(i / 4.0));

  manifest.score_max = 2.0;  // now 3.0 and 4.0 fall outside the scale
  CHECK_THROWS_AS(load_dataset(file.path.string(), manifest), DatasetParseError);
}

TEST_CASE("datasets with fewer than 3 units are rejected") {
  std::string lines;
  for (int i = 0; i < 2; ++i) lines += unit_line(testsupport::make_synthetic_unit(i), 0.5);
  TempFile file("tiny", lines);
  CHECK_THROWS_AS(load_dataset(file.path.string(), DatasetManifest{}), DegenerateInput);
}

TEST_CASE("missing human scores are rejected for annotated datasets") {
  std::string lines;
  for (int i = 0; i < 3; ++i) {
    auto unit = testsupport::make_synthetic_unit(i);
    nlohmann::json j = {{"id", unit.id}, {"document", unit.document}, {"summary", unit.summary}};
    lines += j.dump() + "\n";
  }
  TempFile file("noscore", lines);
  CHECK_THROWS_AS(load_dataset(file.path.string(), DatasetManifest{}), DatasetParseError);
}

TEST_CASE("benchmark recovers a perfect correlation on a constructed corpus") {
  std::vector<double> expected;
  AnnotatedDataset ds;
  ds.name = "constructed";
  ds.units = make_benchmark_corpus(12, &expected);
  for (std::size_t i = 0; i < ds.units.size(); ++i) ds.units[i].human_score = expected[i];

  PipelineConfig config;
  config.backend_name = "doc-lookup";
  auto backend = make_backend(config);
  auto result = run_pearson_benchmark(ds, config, *backend);

  REQUIRE(result.metric_scores.size() == 12);
  for (std::size_t i = 0; i < 12; ++i)
    CHECK(result.metric_scores[i] == doctest::Approx(expected[i]));
  CHECK(result.correlation.r >= 0.99);
  CHECK(result.correlation.p < 0.05);
}

TEST_CASE("error injection replaces exactly `level` same-kind factors") {
  auto corpus = testsupport::make_synthetic_corpus(12);
  auto pool = build_factor_pool(corpus, {});
  CHECK(pool.entities.size() == 12 * 3);
  CHECK(pool.noun_phrases.size() == 12 * 3);

  for (int level = 1; level <= 3; ++level) {
    for (ErrorKind kind : {ErrorKind::entity, ErrorKind::non_entity}) {
      auto corrupted = inject_errors(corpus[0], level, kind, 42, pool, {});
      CHECK(corrupted.corrupted_indices.size() == static_cast<std::size_t>(level));
      CHECK(corrupted.unit.summary != *corpus[0].gold_summary);

      // Corrupted positions hold surfaces of the requested kind only.
      auto gold_factors = extract_factors(*corpus[0].gold_summary, ExtractorConfig{});
      FactorKind want =
          kind == ErrorKind::entity ? FactorKind::named_entity : FactorKind::noun_phrase;
      for (auto idx : corrupted.corrupted_indices) CHECK(gold_factors[idx].kind == want);
    }
  }
}

TEST_CASE("error injection is deterministic per seed and varies across seeds") {
  auto corpus = testsupport::make_synthetic_corpus(12);
  auto pool = build_factor_pool(corpus, {});
  auto a = inject_errors(corpus[3], 2, ErrorKind::entity, 7, pool, {});
  auto b = inject_errors(corpus[3], 2, ErrorKind::entity, 7, pool, {});
  CHECK(a.unit.summary == b.unit.summary);
  CHECK(a.corrupted_indices == b.corrupted_indices);

  bool any_difference = false;
  for (std::uint64_t seed = 0; seed < 20 && !any_difference; ++seed) {
    auto c = inject_errors(corpus[3], 2, ErrorKind::entity, seed, pool, {});
    if (c.unit.summary != a.unit.summary) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("injected replacements never occur in the target document") {
  auto corpus = testsupport::make_synthetic_corpus(12);
  auto pool = build_factor_pool(corpus, {});
  ExtractorConfig extractor_config;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (int level = 1; level <= 3; ++level) {
      auto corrupted = inject_errors(corpus[i], level, ErrorKind::entity, 100 + i, pool,
                                     extractor_config);
      auto factors = extract_factors(corrupted.unit.summary, extractor_config);
      std::string doc_lower = to_lower_ascii(corpus[i].document);
      for (auto idx : corrupted.corrupted_indices) {
        REQUIRE(idx < factors.size());
        CHECK(doc_lower.find(to_lower_ascii(factors[idx].surface)) == std::string::npos);
      }
    }
  }
}

TEST_CASE("error injection fails cleanly when asked for too much") {
  auto corpus = testsupport::make_synthetic_corpus(12);
  auto pool = build_factor_pool(corpus, {});
  // Only 3 entity factors per unit.
  CHECK_THROWS_AS(inject_errors(corpus[0], 4, ErrorKind::entity, 1, pool, {}),
                  InsufficientFactors);
  EvalUnit no_gold = corpus[0];
  no_gold.gold_summary.reset();
  CHECK_THROWS_AS(inject_errors(no_gold, 1, ErrorKind::entity, 1, pool, {}),
                  InsufficientFactors);
  FactorPool empty_pool;
  CHECK_THROWS_AS(inject_errors(corpus[0], 1, ErrorKind::entity, 1, empty_pool, {}),
                  InsufficientFactors);
}

TEST_CASE("corruption sensitivity protocol orders its bounds") {
  auto corpus = testsupport::make_synthetic_corpus(12);
  PipelineConfig config;
  for (const char* backend_name : {"doc-lookup", "gold-oracle"}) {
    CAPTURE(backend_name);
    config.backend_name = backend_name;
    auto backend = make_backend(config);
    auto report = run_go_figure(corpus, config, *backend, 2024);

    REQUIRE(report.level_scores.size() == 3);
    for (int level = 1; level <= 3; ++level) {
      CHECK(report.upper_bound > report.level_scores.at(level).entity);
      CHECK(report.upper_bound > report.level_scores.at(level).non_entity);
    }
    for (int level = 2; level <= 3; ++level) {
      CHECK(report.level_scores.at(level).entity < report.level_scores.at(level - 1).entity);
      CHECK(report.level_scores.at(level).non_entity <
            report.level_scores.at(level - 1).non_entity);
    }
    for (int level = 1; level <= 3; ++level) {
      CHECK(report.lower_bound < report.level_scores.at(level).entity);
      CHECK(report.lower_bound < report.level_scores.at(level).non_entity);
    }
    CHECK(report.sensitivity_correlation < 0.0);
    CHECK(report.p_value < 0.05);
  }
}

TEST_CASE("corruption sensitivity protocol validates its corpus") {
  auto small = testsupport::make_synthetic_corpus(9);
  PipelineConfig config;
  auto backend = make_backend(config);
  CHECK_THROWS_AS(run_go_figure(small, config, *backend, 1), DegenerateInput);

  auto corpus = testsupport::make_synthetic_corpus(12);
  corpus[5].gold_summary.reset();
  CHECK_THROWS_AS(run_go_figure(corpus, config, *backend, 1), DegenerateInput);
}

TEST_CASE("doubling k halves the backend calls") {
  auto corpus = testsupport::make_synthetic_corpus(6);
  PipelineConfig config;
  config.granularity = Granularity::summary_level;
  auto backend = make_backend(config);

  config.k = 1;
  auto t1 = time_pipeline(corpus, config, *backend, 1);
  config.k = 2;
  auto t2 = time_pipeline(corpus, config, *backend, 1);

  CHECK(t1.unit_count == 6);
  CHECK(t1.backend_calls == 6 * testsupport::kFactorsPerUnit);
  CHECK(t2.backend_calls == t1.backend_calls / 2);
  CHECK(t1.wall_clock_total >= 0.0);
  CHECK(t1.sec_per_summary == doctest::Approx(t1.wall_clock_total / 6));
}

TEST_CASE("k sweep rows agree with direct evaluation") {
  auto corpus = testsupport::make_synthetic_corpus(5);
  PipelineConfig config;
  config.granularity = Granularity::summary_level;
  auto backend = make_backend(config);

  auto rows = sweep_k(corpus, config, *backend, {1, 2, 3, 6});
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    PipelineConfig direct = config;
    direct.k = row.k;
    auto eval = evaluate_corpus(corpus, direct, *backend);
    CHECK(row.mean_score == doctest::Approx(eval.mean_score));
    CHECK(row.backend_calls == eval.backend_calls);
  }
  // Gold-quality summaries keep their score regardless of pass size.
  for (const auto& row : rows) CHECK(row.mean_score == doctest::Approx(1.0));
  CHECK_THROWS_AS(sweep_k(corpus, config, *backend, {}), DegenerateInput);
}

TEST_CASE("corpus evaluation is identical across worker counts") {
  auto corpus = make_benchmark_corpus(10, nullptr);
  PipelineConfig config;
  auto backend = make_backend(config);
  config.workers = 1;
  auto serial = evaluate_corpus(corpus, config, *backend);
  config.workers = 4;
  auto parallel = evaluate_corpus(corpus, config, *backend);
  REQUIRE(serial.units.size() == parallel.units.size());
  CHECK(serial.mean_score == doctest::Approx(parallel.mean_score));
  for (std::size_t i = 0; i < serial.units.size(); ++i) {
    CHECK(serial.units[i].score.cloze_score ==
          doctest::Approx(parallel.units[i].score.cloze_score));
    CHECK(serial.units[i].score.unit_id == parallel.units[i].score.unit_id);
  }
}
