#pragma once

// Evaluation protocol: datasets, baselines, scoring, metrics and reports.

#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ars/engine.hpp"
#include "ars/http_backend.hpp"
#include "ars/scripted_backend.hpp"

namespace ars {

// ---------------------------------------------------------------------------
// Configuration

enum class EnergyMode { PowerTimesLatency, JoulesPerToken };

struct EnergyModel {
  EnergyMode mode = EnergyMode::PowerTimesLatency;
  double device_power_watts = 250.0;
  double joules_per_token = 0.0;

  void validate() const;
  /// Energy attributed to one trace.
  double energy(const GenerationTrace& trace) const;
};

enum class BaselineKind { Vanilla, StaticSuppress, BudgetPrompt };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::Vanilla;
  double static_p = 0.9;
  int budget = 64;

  static BaselineConfig vanilla() { return {BaselineKind::Vanilla, 0.0, 0}; }
  static BaselineConfig static_suppress(double p = 0.9) { return {BaselineKind::StaticSuppress, p, 0}; }
  static BaselineConfig budget_prompt(int tokens = 64) { return {BaselineKind::BudgetPrompt, 0.0, tokens}; }

  void validate() const;
};

/// Every knob of a run, loadable from one JSON document.
struct HarnessConfig {
  SuppressionConfig suppression;
  DifficultyLexicon lexicon = DifficultyLexicon::defaults();
  EnergyModel energy;
  double static_p = 0.9;
  int budget_tokens = 64;
  HttpBackendConfig http;
  int n = 200;
  int workers = 1;

  void validate() const;
};

/// Missing keys keep their defaults; unknown top-level sections are rejected.
HarnessConfig load_config(const std::string& path);
HarnessConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const HarnessConfig& cfg);

// ---------------------------------------------------------------------------
// Datasets and scoring

/// Reads a JSONL dataset {"id","question","answer"} (plus optional "script").
/// GSM8K-style answers ("... #### 72") keep only the normalized tail. At most
/// `n` records are kept, in file order. Throws ParseError naming the line for
/// malformed records and duplicate ids.
std::vector<Query> load_dataset(const std::string& path, int n,
                                std::optional<DatasetKind> kind = std::nullopt);

/// Scripted-reasoner specs keyed by query id, read from the same JSONL ("script" field).
std::map<std::string, ScriptedReasonerSpec> load_dataset_scripts(const std::string& path);

/// Numeric-aware exact match (rationals compared exactly), else trimmed string equality.
bool score_answer(std::string_view pred, std::string_view gold, DatasetKind kind = DatasetKind::Plain);

// ---------------------------------------------------------------------------
// Methods

GenerationTrace run_baseline(const Query& q, GeneratorBackend& backend, const BaselineConfig& baseline,
                             const SuppressionConfig& cfg);

enum class MethodKind { Ars, Vanilla, Static, Budget };

struct Method {
  MethodKind kind;
  std::string name;
};

/// Parses "ars,vanilla,static,budget".
std::vector<Method> parse_methods(std::string_view list);

// ---------------------------------------------------------------------------
// Metrics and reports

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct RunMetrics {
  std::string method;
  std::string dataset;
  std::string backend;
  int n_problems = 0;
  int n_correct = 0;
  double accuracy = 0.0;      // percent
  double mean_latency = 0.0;  // seconds per problem
  long long total_tokens = 0; // generation + probe
  long long probe_tokens = 0;
  double total_energy = 0.0;  // joules
  double tpc = kInfinity;
  double jpc = kInfinity;
};

/// Throws ConfigError when traces is empty, sizes differ or a gold answer is empty.
RunMetrics aggregate_metrics(std::span<const GenerationTrace> traces, std::span<const std::string> gold,
                             const EnergyModel& energy, DatasetKind kind = DatasetKind::Plain);

/// 100 * (1 - ours / baseline).
double reduction_percent(double ours, double baseline);

/// Columns: method,dataset,backend,acc,lat_s,tpc,jpc.
std::string metrics_csv(std::span<const RunMetrics> metrics);
std::string reductions_csv(std::span<const RunMetrics> metrics, std::string_view reference = "ars");
std::string render_table(std::span<const RunMetrics> metrics, const EnergyModel& energy);

struct ScoredTrace {
  GenerationTrace trace;
  std::string dataset;
  std::string gold;
  bool correct = false;
};

enum class ReportFormat { Csv, Jsonl, Text };

struct ReportFiles {
  std::filesystem::path metrics_csv;
  std::filesystem::path reductions_csv;
  std::filesystem::path traces_jsonl;
  std::filesystem::path table_txt;
};

/// Writes metrics.csv + reductions.csv, traces.jsonl and report.txt under `out_dir`
/// for the requested formats. Throws IoError when the directory is not writable.
ReportFiles emit_report(std::span<const RunMetrics> metrics, std::span<const ScoredTrace> traces,
                        const EnergyModel& energy, const std::filesystem::path& out_dir,
                        std::span<const ReportFormat> formats);

// ---------------------------------------------------------------------------
// Runs

using BackendProvider = std::function<std::shared_ptr<GeneratorBackend>(const Query&)>;

struct RunRequest {
  std::vector<Query> queries;
  BackendProvider backend;
  HarnessConfig config;
  std::vector<Method> methods;
  std::string dataset_name = "dataset";
  std::string backend_name = "scripted";
  int workers = 1;
};

struct RunResult {
  std::vector<RunMetrics> metrics;      // one per method, in request order
  std::vector<ScoredTrace> traces;      // method-major, query order within a method
};

/// Seed used for a query under a run seed; independent of scheduling.
std::uint64_t query_seed(std::uint64_t run_seed, std::string_view query_id);

/// Evaluates every method on every query with a worker pool. Output is
/// independent of the worker count.
RunResult run_evaluation(const RunRequest& request);

}  // namespace ars
