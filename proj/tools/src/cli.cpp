#include "ars_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "ars/error.hpp"
#include "ars/harness.hpp"
#include "ars/theorem_lab.hpp"

namespace ars::cli {

namespace {

struct RunOptions {
  std::string dataset;
  std::string backend = "scripted";
  std::string methods = "ars,vanilla,static,budget";
  std::uint64_t seed = 0;
  int max_tokens = 1200;
  int n = 200;
  std::string config;
  std::string out = "ars-out";
  int workers = 0;
  std::string dataset_kind;
  std::string suite = "synthetic";
};

struct LabOptions {
  SyntheticFamilySpec family;
  double c_slack = 10.0;
  double delta = 0.1;
  int checkpoint_interval = 0;
  std::vector<int> sweep;
  int workers = 1;
  std::string config;
  std::string out = "ars-lab";
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

HarnessConfig base_config(const std::string& path) {
  return path.empty() ? HarnessConfig{} : load_config(path);
}

int do_run(const RunOptions& o, const CLI::App& cmd, std::ostream& out) {
  auto cfg = base_config(o.config);
  cfg.suppression.rng_seed = o.seed;
  if (cmd.count("--max-tokens") || o.config.empty()) cfg.suppression.max_tokens = o.max_tokens;
  if (cmd.count("--n")) cfg.n = o.n;
  if (o.workers > 0) cfg.workers = o.workers;
  cfg.validate();

  std::optional<DatasetKind> kind;
  if (!o.dataset_kind.empty()) kind = dataset_kind_from_string(o.dataset_kind);

  RunRequest request;
  request.methods = parse_methods(o.methods);
  request.workers = cfg.workers;
  request.backend_name = o.backend;

  if (o.backend == "scripted") {
    std::map<std::string, std::shared_ptr<GeneratorBackend>> backends;
    if (!o.dataset.empty()) {
      request.queries = load_dataset(o.dataset, cfg.n, kind);
      const auto scripts = load_dataset_scripts(o.dataset);
      for (const auto& q : request.queries) {
        const auto it = scripts.find(q.id);
        if (it == scripts.end()) throw ConfigError("query '" + q.id + "' has no \"script\" for the scripted backend");
        backends.emplace(q.id, std::make_shared<ScriptedBackend>(it->second));
      }
      request.dataset_name = std::filesystem::path(o.dataset).stem().string();
    } else {
      std::vector<ScriptedReasonerSpec> scripts;
      if (o.suite == "synthetic") {
        SyntheticFamilySpec family;
        family.seed = o.seed;
        family.max_tokens = cfg.suppression.max_tokens;
        if (cmd.count("--n")) family.n_instances = cfg.n;
        scripts = synth_instances(family);
      } else {
        NeededReflectionSpec family;
        family.seed = o.seed;
        if (cmd.count("--n")) family.n_instances = cfg.n;
        scripts = needed_reflection_instances(family);
      }
      for (std::size_t i = 0; i < scripts.size(); ++i) {
        auto q = scripted_query(i, scripts[i], o.suite);
        if (kind) q.dataset_kind = *kind;
        backends.emplace(q.id, std::make_shared<ScriptedBackend>(scripts[i]));
        request.queries.push_back(std::move(q));
      }
      request.dataset_name = o.suite;
    }
    request.backend = [backends = std::move(backends)](const Query& q) { return backends.at(q.id); };
  } else {
    if (o.dataset.empty()) throw ConfigError("--dataset is required with --backend http");
    request.queries = load_dataset(o.dataset, cfg.n, kind);
    auto http = std::make_shared<HttpBackend>(cfg.http);
    request.backend = [http](const Query&) { return http; };
    request.dataset_name = std::filesystem::path(o.dataset).stem().string();
  }
  request.config = cfg;

  const auto result = run_evaluation(request);
  const std::vector<ReportFormat> formats{ReportFormat::Csv, ReportFormat::Jsonl, ReportFormat::Text};
  const auto files = emit_report(result.metrics, result.traces, cfg.energy, o.out, formats);
  out << render_table(result.metrics, cfg.energy);
  out << "\nwrote " << files.metrics_csv.string() << ", " << files.reductions_csv.string() << ", "
      << files.traces_jsonl.string() << ", " << files.table_txt.string() << '\n';
  return 0;
}

int do_lab(const LabOptions& o, std::ostream& out) {
  auto cfg = base_config(o.config);
  LabSettings settings;
  settings.family = o.family;
  settings.suppression = cfg.suppression;
  settings.suppression.rng_seed = o.family.seed;
  if (o.checkpoint_interval > 0) settings.suppression.checkpoint_interval = o.checkpoint_interval;
  settings.lexicon = cfg.lexicon;
  settings.c_slack = o.c_slack;
  settings.delta = o.delta;
  settings.sweep_intervals = o.sweep;
  settings.workers = o.workers;

  const auto report = run_lab(settings);

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec || !std::filesystem::is_directory(o.out)) throw IoError("cannot create output directory '" + o.out + "'");
  const std::filesystem::path dir(o.out);
  write_text(dir / "bound_report.json", to_json_document(report).dump(2) + "\n");
  for (const auto& p : report.points) {
    write_text(dir / ("per_instance_interval" + std::to_string(p.checkpoint_interval) + ".csv"),
               per_instance_csv(p.report));
  }

  char line[256];
  std::snprintf(line, sizeof line, "%10s %12s %12s %10s %10s %10s\n", "interval", "mean_t_ars", "mean_t_van",
                "eps_hat", "within", "meets");
  out << line;
  for (const auto& p : report.points) {
    std::snprintf(line, sizeof line, "%10d %12.1f %12.1f %10.4f %10.3f %10s\n", p.checkpoint_interval, p.mean_t_ars,
                  p.mean_t_vanilla, p.report.epsilon_r_hat, p.report.fraction_within_bound,
                  p.report.meets_target ? "yes" : "no");
    out << line;
  }
  out << "slack term " << report.points.front().report.slack_term << " (c_slack " << o.c_slack << ", r_max "
      << report.family.r_max << "), delta " << o.delta << "\nwrote " << (dir / "bound_report.json").string() << '\n';
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive reflection suppression: evaluation harness and bound lab", "ars"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Evaluate methods on a dataset with a backend");
  run_cmd->add_option("--dataset", run.dataset, "JSONL dataset {id, question, answer[, script]}");
  run_cmd->add_option("--backend", run.backend, "Generator backend")
      ->check(CLI::IsMember({"scripted", "http"}))
      ->capture_default_str();
  run_cmd->add_option("--methods", run.methods, "Comma-separated methods: ars,vanilla,static,budget")
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Run seed")->capture_default_str();
  run_cmd->add_option("--max-tokens", run.max_tokens, "Emitted-token cap per generation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--n", run.n, "Maximum problems per dataset")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--config", run.config, "JSON config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "Worker threads (default from config)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--dataset-kind", run.dataset_kind, "Override dataset kind")
      ->check(CLI::IsMember({"gsm8k", "math", "plain"}));
  run_cmd->add_option("--suite", run.suite, "Built-in scripted suite when --dataset is absent")
      ->check(CLI::IsMember({"synthetic", "needed-reflection"}))
      ->capture_default_str();

  LabOptions lab;
  auto* lab_cmd = app.add_subcommand("theorem-lab", "Measure the efficiency bound on a synthetic family");
  lab_cmd->add_option("--n-instances", lab.family.n_instances)->check(CLI::PositiveNumber)->capture_default_str();
  lab_cmd->add_option("--t-star-min", lab.family.t_star_range.first)->capture_default_str();
  lab_cmd->add_option("--t-star-max", lab.family.t_star_range.second)->capture_default_str();
  lab_cmd->add_option("--loop-length", lab.family.loop_length)->capture_default_str();
  lab_cmd->add_option("--loops", lab.family.loops_per_instance, "Reflection loops per instance")
      ->capture_default_str();
  lab_cmd->add_option("--emit-prob", lab.family.emit_prob)->capture_default_str();
  lab_cmd->add_option("--r-max", lab.family.r_max)->capture_default_str();
  lab_cmd->add_option("--seed", lab.family.seed)->capture_default_str();
  lab_cmd->add_option("--c-slack", lab.c_slack)->capture_default_str();
  lab_cmd->add_option("--delta", lab.delta)->capture_default_str();
  lab_cmd->add_option("--checkpoint-interval", lab.checkpoint_interval, "Default from config")
      ->check(CLI::PositiveNumber);
  lab_cmd->add_option("--sweep", lab.sweep, "Checkpoint intervals to measure (default: interval, interval/2)")
      ->check(CLI::PositiveNumber);
  lab_cmd->add_option("--workers", lab.workers)->check(CLI::PositiveNumber)->capture_default_str();
  lab_cmd->add_option("--config", lab.config, "JSON config file")->check(CLI::ExistingFile);
  lab_cmd->add_option("--out", lab.out, "Output directory")->capture_default_str();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate-config", "Check a config file and print it with defaults filled in");
  validate_cmd->add_option("config", validate_path, "JSON config file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun 'ars --help' for usage\n";
    return kUsageError;
  }

  try {
    if (*run_cmd) return do_run(run, *run_cmd, out);
    if (*lab_cmd) return do_lab(lab, out);
    if (*validate_cmd) {
      const auto cfg = load_config(validate_path);
      out << config_to_json(cfg).dump(2) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace ars::cli
