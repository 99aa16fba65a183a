#include "cloze/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "cloze/errors.hpp"

namespace cloze {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

EvalUnit validate_unit(EvalUnit unit) {
  if (trim(unit.document).empty())
    throw std::invalid_argument("unit " + unit.id + ": document is empty");
  if (trim(unit.summary).empty())
    throw std::invalid_argument("unit " + unit.id + ": summary is empty");
  if (unit.human_score && (*unit.human_score < 0.0 || *unit.human_score > 1.0))
    throw std::invalid_argument("unit " + unit.id + ": human score outside [0,1]");
  return unit;
}

std::shared_ptr<Backend> make_backend(const PipelineConfig& config) {
  std::shared_ptr<Backend> backend;
  if (config.backend_name == "gold-oracle") {
    backend = std::make_shared<GoldReferenceBackend>();
  } else if (config.backend_name == "doc-lookup") {
    backend = std::make_shared<DocumentLookupBackend>();
  } else if (config.backend_name == "remote") {
    std::string endpoint = config.endpoint;
    if (endpoint.empty()) {
      const char* env = std::getenv("CLOZE_ENDPOINT");
      if (env) endpoint = env;
    }
    if (endpoint.empty())
      throw BackendUnavailable("remote backend needs --endpoint or CLOZE_ENDPOINT");
    backend = std::make_shared<RemoteBackend>(endpoint);
  } else {
    throw BackendUnavailable("unknown backend: " + config.backend_name);
  }
  if (!config.cache_dir.empty())
    backend = std::make_shared<CachedBackend>(backend, config.cache_dir);
  return backend;
}

UnitEvaluation evaluate_with_factors(const EvalUnit& unit,
                                     const std::vector<FactualFactor>& factors,
                                     const PipelineConfig& config, Backend& backend) {
  std::vector<std::string> surfaces;
  for (const auto& f : factors) surfaces.push_back(f.surface);

  // Gold factor surfaces align with the evaluated factors by index.
  std::vector<std::string> gold_surfaces;
  if (unit.gold_summary) {
    auto extractor = make_extractor(config.extractor);
    for (const auto& f : extract_factors(*unit.gold_summary, *extractor))
      gold_surfaces.push_back(f.surface);
  }
  backend.prime(unit.id, surfaces, gold_surfaces);

  auto plan = plan_masks(factors, config.k, config.granularity, unit.id);

  UnitEvaluation result;
  result.factors = factors;
  std::vector<ClozeFill> fills;
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    ClozeRequest request;
    request.document = unit.document;
    request.masked = render_masked(unit, factors, plan, g, config.sentinel);
    request.request_id = unit.id;
    request.sentinel = config.sentinel;
    auto group_fills = backend.fill(request);
    ++result.backend_calls;
    if (group_fills.size() != request.masked.slots.size())
      throw FillMismatch("unit " + unit.id + ": backend returned " +
                         std::to_string(group_fills.size()) + " fills for " +
                         std::to_string(request.masked.slots.size()) + " slots");
    fills.insert(fills.end(), group_fills.begin(), group_fills.end());
  }

  result.score =
      score_unit(unit.id, factors, fills, config.gate(), config.error_threshold);
  return result;
}

UnitEvaluation evaluate_unit(const EvalUnit& unit, const PipelineConfig& config,
                             Backend& backend, const Extractor& extractor) {
  auto validated = validate_unit(unit);
  auto factors = extract_factors(validated.summary, extractor);
  return evaluate_with_factors(validated, factors, config, backend);
}

CorpusEvaluation evaluate_corpus(const std::vector<EvalUnit>& units,
                                 const PipelineConfig& config, Backend& backend) {
  CorpusEvaluation out;
  out.units.resize(units.size());

  int workers = std::max(1, config.workers);
  workers = std::min<int>(workers, units.size() > 0 ? static_cast<int>(units.size()) : 1);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> calls{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&] {
    auto extractor = make_extractor(config.extractor);
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= units.size()) break;
      try {
        out.units[i] = evaluate_unit(units[i], config, backend, *extractor);
        calls += out.units[i].backend_calls;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  out.backend_calls = calls.load();
  double total = 0.0;
  for (const auto& u : out.units) total += u.score.cloze_score;
  out.mean_score = units.empty() ? 0.0 : total / units.size();
  return out;
}

}  // namespace cloze
