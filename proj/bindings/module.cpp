#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cloze/harness.hpp"
#include "cloze/pipeline.hpp"
#include "cloze/report.hpp"

namespace py = pybind11;
using namespace cloze;

namespace {

PipelineConfig config_from_kwargs(int k, double alpha, double beta, const std::string& granularity,
                                  const std::string& backend, const std::string& extractor,
                                  const std::string& sentinel) {
  PipelineConfig cfg;
  cfg.k = k;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.granularity =
      granularity == "summary_level" ? Granularity::summary_level : Granularity::sentence_level;
  cfg.backend_name = backend;
  cfg.extractor.plugin_name = extractor;
  cfg.sentinel = sentinel;
  return cfg;
}

py::dict evaluate_pair(const std::string& document, const std::string& summary,
                       const py::object& gold_summary, int k, double alpha, double beta,
                       const std::string& granularity, const std::string& backend_name,
                       const std::string& extractor, const std::string& sentinel) {
  EvalUnit unit;
  unit.id = "unit-0";
  unit.document = document;
  unit.summary = summary;
  if (!gold_summary.is_none()) unit.gold_summary = gold_summary.cast<std::string>();

  auto cfg = config_from_kwargs(k, alpha, beta, granularity, backend_name, extractor, sentinel);
  auto backend = make_backend(cfg);
  auto ext = make_extractor(cfg.extractor);
  auto eval = evaluate_unit(unit, cfg, *backend, *ext);

  py::dict out;
  out["cloze_score"] = eval.score.cloze_score;
  out["no_factors"] = eval.score.no_factors;
  out["backend_calls"] = eval.backend_calls;
  py::list factors;
  for (const auto& fs : eval.score.factor_scores) {
    const auto& f = eval.factors.at(fs.factor_index);
    py::dict d;
    d["index"] = fs.factor_index;
    d["kind"] = to_string(f.kind);
    d["span"] = py::make_tuple(f.span.begin, f.span.end);
    d["surface"] = fs.gold_surface;
    d["filled"] = fs.filled_surface;
    d["f1"] = fs.f1;
    d["confidence"] = fs.confidence;
    d["gated"] = fs.gated;
    d["contribution"] = fs.contribution;
    factors.append(d);
  }
  out["factors"] = factors;
  py::list errors;
  for (const auto& s : eval.score.error_spans) errors.append(py::make_tuple(s.begin, s.end));
  out["error_spans"] = errors;
  return out;
}

}  // namespace

PYBIND11_MODULE(clozecore, m) {
  m.doc() = "Cloze-based factual consistency evaluation";

  m.def(
      "normalize", [](const std::string& text) { return normalize(text).tokens; },
      py::arg("text"), "Lowercase, strip punctuation and articles, split on whitespace.");

  m.def(
      "split_sentences",
      [](const std::string& text) {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const auto& s : split_sentences(text)) out.emplace_back(s.begin, s.end);
        return out;
      },
      py::arg("text"));

  m.def(
      "extract_factors",
      [](const std::string& summary, const std::string& extractor) {
        ExtractorConfig cfg;
        cfg.plugin_name = extractor;
        py::list out;
        for (const auto& f : extract_factors(summary, cfg)) {
          py::dict d;
          d["index"] = f.index;
          d["span"] = py::make_tuple(f.span.begin, f.span.end);
          d["surface"] = f.surface;
          d["kind"] = to_string(f.kind);
          d["sentence_index"] = f.sentence_index;
          out.append(d);
        }
        return out;
      },
      py::arg("summary"), py::arg("extractor") = "rule-based");

  m.def("token_f1", &token_f1, py::arg("gold"), py::arg("generated"),
        "Token-level F1 over normalized token multisets.");

  m.def(
      "gate",
      [](double f1, double confidence, double alpha, double beta) {
        auto g = cloze::gate(f1, confidence, GateConfig{alpha, beta});
        return py::make_tuple(g.gated, g.contribution);
      },
      py::arg("f1"), py::arg("confidence"), py::arg("alpha") = 0.5, py::arg("beta") = 0.5);

  m.def(
      "pearson",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        auto r = pearson_r(xs, ys);
        return py::make_tuple(r.r, r.p);
      },
      py::arg("xs"), py::arg("ys"), "Pearson r with two-tailed Student-t p-value.");

  m.def("evaluate", &evaluate_pair, py::arg("document"), py::arg("summary"),
        py::arg("gold_summary") = py::none(), py::arg("k") = 1, py::arg("alpha") = 0.5,
        py::arg("beta") = 0.5, py::arg("granularity") = "sentence_level",
        py::arg("backend") = "doc-lookup", py::arg("extractor") = "rule-based",
        py::arg("sentinel") = kDefaultSentinel,
        "Run the full pipeline on one (document, summary) pair.");
}
