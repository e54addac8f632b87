#include <algorithm>

#include "ars/error.hpp"
#include "ars/harness.hpp"
#include "parallel.hpp"

namespace ars {

GenerationTrace run_baseline(const Query& q, GeneratorBackend& backend, const BaselineConfig& baseline,
                             const SuppressionConfig& cfg) {
  baseline.validate();
  GenerationTrace trace;
  switch (baseline.kind) {
    case BaselineKind::Vanilla:
      trace = generate_with_fixed_suppression(q, build_vanilla_prompt(q, q.dataset_kind), backend, cfg, 0.0);
      trace.method = "vanilla";
      break;
    case BaselineKind::StaticSuppress:
      trace = generate_with_fixed_suppression(q, build_vanilla_prompt(q, q.dataset_kind), backend, cfg,
                                              baseline.static_p);
      trace.method = "static";
      break;
    case BaselineKind::BudgetPrompt:
      trace = generate_with_fixed_suppression(q, build_budget_prompt(q, q.dataset_kind, baseline.budget), backend,
                                              cfg, 0.0);
      trace.method = "budget";
      break;
  }
  return trace;
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const auto name = list.substr(start, end - start);
    MethodKind kind;
    if (name == "ars") {
      kind = MethodKind::Ars;
    } else if (name == "vanilla") {
      kind = MethodKind::Vanilla;
    } else if (name == "static") {
      kind = MethodKind::Static;
    } else if (name == "budget") {
      kind = MethodKind::Budget;
    } else {
      throw ConfigError("unknown method '" + std::string(name) + "' (expected ars, vanilla, static, budget)");
    }
    if (std::none_of(out.begin(), out.end(), [&](const Method& m) { return m.kind == kind; })) {
      out.push_back({kind, std::string(name)});
    }
    start = end + 1;
  }
  if (out.empty()) throw ConfigError("no methods selected");
  return out;
}

std::uint64_t query_seed(std::uint64_t run_seed, std::string_view query_id) {
  return derive_seed(run_seed, fnv1a(query_id));
}

RunResult run_evaluation(const RunRequest& request) {
  request.config.validate();
  if (request.queries.empty()) throw ConfigError("no queries to evaluate");
  if (request.methods.empty()) throw ConfigError("no methods selected");
  if (!request.backend) throw ConfigError("no backend provider");

  const auto& queries = request.queries;
  const auto n_queries = queries.size();
  const auto n_tasks = request.methods.size() * n_queries;
  std::vector<GenerationTrace> traces(n_tasks);

  int workers = std::max(1, request.workers);
  {
    const auto d = request.backend(queries.front())->descriptor();
    workers = d.concurrent_safe ? std::min(workers, std::max(1, d.max_in_flight)) : 1;
  }

  detail::parallel_for(n_tasks, workers, [&](std::size_t task) {
    const auto& method = request.methods[task / n_queries];
    const auto& q = queries[task % n_queries];
    auto backend = request.backend(q);
    SuppressionConfig cfg = request.config.suppression;
    cfg.rng_seed = query_seed(request.config.suppression.rng_seed, q.id);
    switch (method.kind) {
      case MethodKind::Ars:
        traces[task] = generate_with_ars(q, *backend, cfg, request.config.lexicon);
        break;
      case MethodKind::Vanilla:
        traces[task] = run_baseline(q, *backend, BaselineConfig::vanilla(), cfg);
        break;
      case MethodKind::Static:
        traces[task] = run_baseline(q, *backend, BaselineConfig::static_suppress(request.config.static_p), cfg);
        break;
      case MethodKind::Budget:
        traces[task] = run_baseline(q, *backend, BaselineConfig::budget_prompt(request.config.budget_tokens), cfg);
        break;
    }
    traces[task].method = method.name;
  });

  RunResult result;
  for (std::size_t m = 0; m < request.methods.size(); ++m) {
    std::vector<std::string> golds;
    for (std::size_t i = 0; i < n_queries; ++i) {
      const auto& q = queries[i];
      auto& trace = traces[m * n_queries + i];
      const std::string gold = q.gold_answer.value_or("");
      golds.push_back(gold);
      const bool correct = trace.status == TraceStatus::Ok && score_answer(trace.final_answer, gold, q.dataset_kind);
      result.traces.push_back(ScoredTrace{std::move(trace), request.dataset_name, gold, correct});
    }
    std::vector<GenerationTrace> slice;
    slice.reserve(n_queries);
    for (std::size_t i = 0; i < n_queries; ++i) slice.push_back(result.traces[m * n_queries + i].trace);
    auto metrics = aggregate_metrics(slice, golds, request.config.energy,
                                     n_queries ? queries.front().dataset_kind : DatasetKind::Plain);
    metrics.method = request.methods[m].name;
    metrics.dataset = request.dataset_name;
    metrics.backend = request.backend_name;
    result.metrics.push_back(std::move(metrics));
  }
  return result;
}

}  // namespace ars
