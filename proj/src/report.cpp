#include "cloze/report.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "cloze/errors.hpp"

namespace cloze {

namespace {

Granularity granularity_from_string(const std::string& s) {
  if (s == "summary_level") return Granularity::summary_level;
  if (s == "sentence_level") return Granularity::sentence_level;
  throw ClozeError("bad granularity: " + s);
}

GateScope gate_scope_from_string(const std::string& s) {
  if (s == "per_factor") return GateScope::per_factor;
  if (s == "per_summary") return GateScope::per_summary;
  throw ClozeError("bad gate scope: " + s);
}

}  // namespace

nlohmann::json config_to_json(const PipelineConfig& config) {
  nlohmann::json options = nlohmann::json::object();
  for (const auto& [key, value] : config.extractor.options) options[key] = value;
  return {{"k", config.k},
          {"alpha", config.alpha},
          {"beta", config.beta},
          {"granularity", to_string(config.granularity)},
          {"gate_scope", config.gate_scope == GateScope::per_factor ? "per_factor" : "per_summary"},
          {"extractor", {{"plugin", config.extractor.plugin_name}, {"options", options}}},
          {"backend", config.backend_name},
          {"endpoint", config.endpoint},
          {"cache_dir", config.cache_dir},
          {"workers", config.workers},
          {"sentinel", config.sentinel},
          {"error_threshold", config.error_threshold},
          {"seed", config.seed}};
}

PipelineConfig config_from_json(const nlohmann::json& doc) {
  PipelineConfig config;
  config.k = doc.value("k", config.k);
  config.alpha = doc.value("alpha", config.alpha);
  config.beta = doc.value("beta", config.beta);
  if (doc.contains("granularity"))
    config.granularity = granularity_from_string(doc["granularity"].get<std::string>());
  if (doc.contains("gate_scope"))
    config.gate_scope = gate_scope_from_string(doc["gate_scope"].get<std::string>());
  if (doc.contains("extractor")) {
    config.extractor.plugin_name = doc["extractor"].value("plugin", config.extractor.plugin_name);
    if (doc["extractor"].contains("options"))
      for (auto& [key, value] : doc["extractor"]["options"].items())
        config.extractor.options[key] = value.get<std::string>();
  }
  config.backend_name = doc.value("backend", config.backend_name);
  config.endpoint = doc.value("endpoint", config.endpoint);
  config.cache_dir = doc.value("cache_dir", config.cache_dir);
  config.workers = doc.value("workers", config.workers);
  config.sentinel = doc.value("sentinel", config.sentinel);
  config.error_threshold = doc.value("error_threshold", config.error_threshold);
  config.seed = doc.value("seed", config.seed);
  return config;
}

nlohmann::json unit_evaluation_to_json(const EvalUnit& unit, const UnitEvaluation& eval) {
  nlohmann::json factors = nlohmann::json::array();
  for (std::size_t i = 0; i < eval.score.factor_scores.size(); ++i) {
    const auto& fs = eval.score.factor_scores[i];
    const auto& f = eval.factors.at(fs.factor_index);
    bool flagged =
        std::any_of(eval.score.error_spans.begin(), eval.score.error_spans.end(),
                    [&](const Span& s) { return s == f.span; });
    factors.push_back({{"index", fs.factor_index},
                       {"kind", to_string(f.kind)},
                       {"span", {f.span.begin, f.span.end}},
                       {"sentence_index", f.sentence_index},
                       {"gold_surface", fs.gold_surface},
                       {"filled_surface", fs.filled_surface},
                       {"f1", fs.f1},
                       {"confidence", fs.confidence},
                       {"gated", fs.gated},
                       {"contribution", fs.contribution},
                       {"flagged", flagged}});
  }
  nlohmann::json error_spans = nlohmann::json::array();
  for (const auto& s : eval.score.error_spans) error_spans.push_back({s.begin, s.end});
  return {{"id", eval.score.unit_id},
          {"summary", unit.summary},
          {"cloze_score", eval.score.cloze_score},
          {"no_factors", eval.score.no_factors},
          {"backend_calls", eval.backend_calls},
          {"factors", factors},
          {"error_spans", error_spans}};
}

nlohmann::json build_eval_report(const std::vector<EvalUnit>& units,
                                 const CorpusEvaluation& evaluation,
                                 const PipelineConfig& config) {
  nlohmann::json unit_records = nlohmann::json::array();
  for (std::size_t i = 0; i < units.size(); ++i)
    unit_records.push_back(unit_evaluation_to_json(units[i], evaluation.units[i]));
  return {{"config", config_to_json(config)},
          {"corpus_mean", evaluation.mean_score},
          {"backend_calls", evaluation.backend_calls},
          {"unit_count", units.size()},
          {"units", unit_records}};
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string report_to_csv(const nlohmann::json& report) {
  std::ostringstream out;
  out << "unit_id,factor_index,kind,gold_surface,filled_surface,f1,confidence,gated,"
         "contribution,flagged,unit_score\n";
  for (const auto& unit : report.at("units")) {
    for (const auto& f : unit.at("factors")) {
      out << csv_escape(unit["id"].get<std::string>()) << ','
          << f["index"].get<std::size_t>() << ',' << f["kind"].get<std::string>() << ','
          << csv_escape(f["gold_surface"].get<std::string>()) << ','
          << csv_escape(f["filled_surface"].get<std::string>()) << ','
          << f["f1"].get<double>() << ',' << f["confidence"].get<double>() << ','
          << (f["gated"].get<bool>() ? 1 : 0) << ',' << f["contribution"].get<double>() << ','
          << (f["flagged"].get<bool>() ? 1 : 0) << ',' << unit["cloze_score"].get<double>()
          << '\n';
    }
  }
  return out.str();
}

nlohmann::json timing_to_json(const TimingReport& timing) {
  return {{"sec_per_summary", timing.sec_per_summary},
          {"wall_clock_total", timing.wall_clock_total},
          {"unit_count", timing.unit_count},
          {"backend_calls", timing.backend_calls}};
}

nlohmann::json go_figure_to_json(const GoFigureReport& report) {
  nlohmann::json levels = nlohmann::json::object();
  for (const auto& [level, scores] : report.level_scores)
    levels[std::to_string(level)] = {{"entity", scores.entity},
                                     {"non_entity", scores.non_entity}};
  return {{"upper_bound", report.upper_bound},
          {"level_scores", levels},
          {"lower_bound", report.lower_bound},
          {"sensitivity_correlation", report.sensitivity_correlation},
          {"p_value", report.p_value}};
}

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows)
    arr.push_back({{"k", row.k},
                   {"mean_score", row.mean_score},
                   {"wall_clock", row.wall_clock},
                   {"backend_calls", row.backend_calls}});
  return arr;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "k,mean_score,wall_clock,backend_calls\n";
  for (const auto& row : rows)
    out << row.k << ',' << row.mean_score << ',' << row.wall_clock << ',' << row.backend_calls
        << '\n';
  return out.str();
}

nlohmann::json training_sample_to_json(const std::string& document,
                                       const TrainingSample& sample) {
  return {{"document", document},
          {"masked_text", sample.masked_sentence},
          {"targets", sample.targets}};
}

namespace {

// Wraps flagged factor spans in the given open/close markers.
std::string mark_spans(const std::string& summary, const nlohmann::json& factors,
                       const std::string& open, const std::string& close,
                       const std::function<std::string(const std::string&)>& escape) {
  struct Mark {
    std::size_t begin, end;
  };
  std::vector<Mark> marks;
  for (const auto& f : factors) {
    if (f["flagged"].get<bool>())
      marks.push_back({f["span"][0].get<std::size_t>(), f["span"][1].get<std::size_t>()});
  }
  std::sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) { return a.begin < b.begin; });
  std::string out;
  std::size_t cursor = 0;
  for (const auto& m : marks) {
    if (m.begin < cursor || m.end > summary.size()) continue;
    out += escape(summary.substr(cursor, m.begin - cursor));
    out += open;
    out += escape(summary.substr(m.begin, m.end - m.begin));
    out += close;
    cursor = m.end;
  }
  out += escape(summary.substr(cursor));
  return out;
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string identity_escape(const std::string& s) { return s; }

}  // namespace

std::string render_report_markdown(const nlohmann::json& report) {
  std::ostringstream out;
  out << "# Cloze evaluation report\n\n";
  out << "Corpus mean score: " << report.at("corpus_mean").get<double>() << " over "
      << report.at("unit_count").get<std::size_t>() << " units\n\n";
  for (const auto& unit : report.at("units")) {
    out << "## Unit `" << unit["id"].get<std::string>() << "` — score "
        << unit["cloze_score"].get<double>() << "\n\n";
    out << mark_spans(unit["summary"].get<std::string>(), unit["factors"], "**⟦", "⟧**",
                      identity_escape)
        << "\n\n";
    if (unit["factors"].empty()) {
      if (unit["no_factors"].get<bool>()) out << "_No factual factors extracted._\n\n";
      continue;
    }
    out << "| # | kind | factor | cloze result | F1 | confidence | contribution |\n";
    out << "|---|------|--------|--------------|----|------------|--------------|\n";
    for (const auto& f : unit["factors"]) {
      std::string filled = f["filled_surface"].get<std::string>();
      out << "| " << f["index"].get<std::size_t>() << " | " << f["kind"].get<std::string>()
          << " | " << f["gold_surface"].get<std::string>() << " | "
          << (filled.empty() ? "[None]" : filled) << " | " << f["f1"].get<double>() << " | "
          << f["confidence"].get<double>() << " | " << f["contribution"].get<double>()
          << (f["flagged"].get<bool>() ? " ⚠" : "") << " |\n";
    }
    out << "\n";
  }
  return out.str();
}

std::string render_report_html(const nlohmann::json& report) {
  std::ostringstream out;
  out << "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>Cloze report</title>\n"
      << "<style>mark{background:#fbb}table{border-collapse:collapse}"
      << "td,th{border:1px solid #999;padding:2px 8px}</style></head><body>\n"
      << "<h1>Cloze evaluation report</h1>\n"
      << "<p>Corpus mean score: " << report.at("corpus_mean").get<double>() << " over "
      << report.at("unit_count").get<std::size_t>() << " units</p>\n";
  for (const auto& unit : report.at("units")) {
    out << "<h2>Unit " << html_escape(unit["id"].get<std::string>()) << " — score "
        << unit["cloze_score"].get<double>() << "</h2>\n<p>"
        << mark_spans(unit["summary"].get<std::string>(), unit["factors"], "<mark>", "</mark>",
                      html_escape)
        << "</p>\n";
    if (unit["factors"].empty()) continue;
    out << "<table><tr><th>#</th><th>kind</th><th>factor</th><th>cloze result</th><th>F1</th>"
        << "<th>confidence</th><th>contribution</th></tr>\n";
    for (const auto& f : unit["factors"]) {
      std::string filled = f["filled_surface"].get<std::string>();
      out << "<tr><td>" << f["index"].get<std::size_t>() << "</td><td>"
          << f["kind"].get<std::string>() << "</td><td>"
          << html_escape(f["gold_surface"].get<std::string>()) << "</td><td>"
          << html_escape(filled.empty() ? "[None]" : filled) << "</td><td>"
          << f["f1"].get<double>() << "</td><td>" << f["confidence"].get<double>() << "</td><td>"
          << f["contribution"].get<double>() << "</td></tr>\n";
    }
    out << "</table>\n";
  }
  out << "</body></html>\n";
  return out.str();
}

}  // namespace cloze
