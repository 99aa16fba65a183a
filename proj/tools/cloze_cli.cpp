#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cloze/errors.hpp"
#include "cloze/harness.hpp"
#include "cloze/report.hpp"

namespace {

using namespace cloze;

void add_config_flags(CLI::App* cmd, PipelineConfig& config, std::string& granularity,
                      std::string& gate_scope) {
  cmd->add_option("--k", config.k, "Factors masked per cloze pass")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", config.alpha, "Confidence gate threshold")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--beta", config.beta, "F1 gate threshold")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--granularity", granularity, "summary_level or sentence_level")
      ->check(CLI::IsMember({"summary_level", "sentence_level"}));
  cmd->add_option("--gate-scope", gate_scope, "per_factor or per_summary")
      ->check(CLI::IsMember({"per_factor", "per_summary"}));
  cmd->add_option("--extractor", config.extractor.plugin_name, "Extractor plugin name");
  cmd->add_option("--backend", config.backend_name, "doc-lookup, gold-oracle or remote");
  cmd->add_option("--endpoint", config.endpoint,
                  "Remote backend URL (default: $CLOZE_ENDPOINT)");
  cmd->add_option("--cache-dir", config.cache_dir, "On-disk fill cache directory");
  cmd->add_option("--workers", config.workers, "Worker pool width")->check(CLI::PositiveNumber);
  cmd->add_option("--sentinel", config.sentinel, "Mask sentinel token");
  cmd->add_option("--error-threshold", config.error_threshold,
                  "Contribution threshold for error localization");
  cmd->add_option("--seed", config.seed, "Seed for randomized protocol steps");
}

void apply_enum_flags(PipelineConfig& config, const std::string& granularity,
                      const std::string& gate_scope) {
  config.granularity = granularity == "summary_level" ? Granularity::summary_level
                                                      : Granularity::sentence_level;
  config.gate_scope =
      gate_scope == "per_summary" ? GateScope::per_summary : GateScope::per_factor;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ClozeError("cannot write " + path);
  out << content;
}

std::vector<int> parse_k_range(const std::string& spec) {
  auto colon = spec.find(':');
  std::vector<int> ks;
  if (colon == std::string::npos) {
    ks.push_back(std::stoi(spec));
    return ks;
  }
  int lo = std::stoi(spec.substr(0, colon));
  int hi = std::stoi(spec.substr(colon + 1));
  for (int k = lo; k <= hi; ++k) ks.push_back(k);
  return ks;
}

int run(int argc, char** argv) {
  CLI::App app{"cloze: cloze-based factual consistency evaluation"};
  app.require_subcommand(1);

  PipelineConfig config;
  std::string granularity = "sentence_level";
  std::string gate_scope = "per_factor";

  // evaluate
  std::string input_path, output_path, csv_path, timing_path;
  auto* evaluate = app.add_subcommand("evaluate", "Score a dataset of (document, summary) pairs");
  evaluate->add_option("--input", input_path, "Line-delimited JSON dataset")->required();
  evaluate->add_option("--output", output_path, "JSON report path")->required();
  evaluate->add_option("--csv", csv_path, "Optional per-factor CSV path");
  evaluate->add_option("--timing-out", timing_path,
                       "Optional timing JSON (kept out of the main report)");
  add_config_flags(evaluate, config, granularity, gate_scope);

  // sweep-k
  std::string k_range = "1:8";
  auto* sweep = app.add_subcommand("sweep-k", "Speed/score trade-off across k values");
  sweep->add_option("--input", input_path, "Line-delimited JSON dataset")->required();
  sweep->add_option("--output", output_path, "JSON output path")->required();
  sweep->add_option("--csv", csv_path, "Optional CSV path");
  sweep->add_option("--k-range", k_range, "k range, e.g. 1:8");
  add_config_flags(sweep, config, granularity, gate_scope);

  // meta-eval
  std::vector<std::string> dataset_paths;
  std::string manifest_path, gofigure_path;
  int repetitions = 1;
  auto* meta = app.add_subcommand("meta-eval", "Pearson benchmark and GO FIGURE protocol");
  meta->add_option("--dataset", dataset_paths,
                   "Annotated dataset(s) with human scores (repeatable)");
  meta->add_option("--manifest", manifest_path, "Dataset manifest JSON (name + score scale)");
  meta->add_option("--gofigure-corpus", gofigure_path,
                   "Corpus with gold summaries for the GO FIGURE block");
  meta->add_option("--output", output_path, "JSON output path")->required();
  meta->add_option("--repetitions", repetitions, "Timing repetitions");
  add_config_flags(meta, config, granularity, gate_scope);

  // report
  std::string format = "markdown";
  auto* render = app.add_subcommand("report", "Render an evaluation report for humans");
  render->add_option("--input", input_path, "Evaluation report JSON")->required();
  render->add_option("--output", output_path, "Rendered output path")->required();
  render->add_option("--format", format, "markdown or html")
      ->check(CLI::IsMember({"markdown", "html"}));

  CLI11_PARSE(app, argc, argv);
  apply_enum_flags(config, granularity, gate_scope);

  if (*evaluate) {
    auto units = load_units(input_path);
    if (units.empty()) throw DatasetParseError(input_path, 0, "dataset is empty");
    auto backend = make_backend(config);

    TimingReport timing;
    auto t0 = std::chrono::steady_clock::now();
    auto evaluation = evaluate_corpus(units, config, *backend);
    auto t1 = std::chrono::steady_clock::now();
    timing.wall_clock_total = std::chrono::duration<double>(t1 - t0).count();
    timing.unit_count = units.size();
    timing.backend_calls = evaluation.backend_calls;
    timing.sec_per_summary = timing.wall_clock_total / units.size();

    auto report = build_eval_report(units, evaluation, config);
    write_file(output_path, report.dump(2) + "\n");
    if (!csv_path.empty()) write_file(csv_path, report_to_csv(report));
    if (!timing_path.empty()) write_file(timing_path, timing_to_json(timing).dump(2) + "\n");
    std::cout << "corpus mean " << evaluation.mean_score << " over " << units.size()
              << " units (" << timing.sec_per_summary << " sec/summary)\n";
    return 0;
  }

  if (*sweep) {
    auto units = load_units(input_path);
    if (units.empty()) throw DatasetParseError(input_path, 0, "dataset is empty");
    auto ks = parse_k_range(k_range);
    auto backend = make_backend(config);
    auto rows = sweep_k(units, config, *backend, ks);
    write_file(output_path, sweep_to_json(rows).dump(2) + "\n");
    if (!csv_path.empty()) write_file(csv_path, sweep_to_csv(rows));
    std::cout << sweep_to_csv(rows);
    return 0;
  }

  if (*meta) {
    nlohmann::json out = nlohmann::json::object();
    out["config"] = config_to_json(config);

    if (!dataset_paths.empty()) {
      DatasetManifest manifest;
      if (!manifest_path.empty()) manifest = load_manifest(manifest_path);
      nlohmann::json pearson_rows = nlohmann::json::array();
      for (const auto& path : dataset_paths) {
        auto dataset = load_dataset(path, manifest);
        auto backend = make_backend(config);
        auto result = run_pearson_benchmark(dataset, config, *backend);
        pearson_rows.push_back({{"dataset", dataset.name},
                                {"r", result.correlation.r},
                                {"p", result.correlation.p},
                                {"n", result.correlation.n}});
        std::cout << dataset.name << ": r=" << result.correlation.r
                  << " p=" << result.correlation.p << " n=" << result.correlation.n << "\n";
      }
      out["pearson"] = pearson_rows;
    }

    if (!gofigure_path.empty()) {
      auto corpus = load_units(gofigure_path);
      auto backend = make_backend(config);
      auto gofig = run_go_figure(corpus, config, *backend, config.seed);
      out["go_figure"] = go_figure_to_json(gofig);
      auto timing = time_pipeline(corpus, config, *backend, repetitions);
      out["timing"] = timing_to_json(timing);
      std::cout << "go-figure: upper=" << gofig.upper_bound << " lower=" << gofig.lower_bound
                << " sensitivity=" << gofig.sensitivity_correlation << " (p=" << gofig.p_value
                << "), " << timing.sec_per_summary << " sec/summary\n";
    }

    write_file(output_path, out.dump(2) + "\n");
    return 0;
  }

  if (*render) {
    std::ifstream in(input_path);
    if (!in) throw ClozeError("cannot read " + input_path);
    nlohmann::json report;
    try {
      report = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw ClozeError(input_path + ": " + e.what());
    }
    write_file(output_path, format == "html" ? render_report_html(report)
                                             : render_report_markdown(report));
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    // Machine-readable error record on stderr.
    nlohmann::json err = {{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
