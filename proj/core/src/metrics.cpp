#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ars/error.hpp"
#include "ars/harness.hpp"
#include "ars/trace_io.hpp"

namespace ars {

namespace {

// Sorted summation makes the total independent of trace order.
double ordered_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

std::string fmt(double v, int decimals) {
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

RunMetrics aggregate_metrics(std::span<const GenerationTrace> traces, std::span<const std::string> gold,
                             const EnergyModel& energy, DatasetKind kind) {
  if (traces.empty()) throw ConfigError("cannot aggregate zero traces");
  if (traces.size() != gold.size()) throw ConfigError("every trace needs exactly one gold answer");
  energy.validate();

  RunMetrics m;
  m.method = traces.front().method;
  m.n_problems = static_cast<int>(traces.size());
  std::vector<double> latencies;
  std::vector<double> energies;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    if (gold[i].empty()) throw ConfigError("trace '" + t.query_id + "' has no gold answer");
    if (t.status == TraceStatus::Ok && score_answer(t.final_answer, gold[i], kind)) ++m.n_correct;
    m.total_tokens += t.cost_tokens;
    m.probe_tokens += t.probe_tokens;
    latencies.push_back(t.wall_latency);
    energies.push_back(energy.energy(t));
  }
  m.accuracy = 100.0 * m.n_correct / m.n_problems;
  m.mean_latency = ordered_sum(std::move(latencies)) / m.n_problems;
  m.total_energy = ordered_sum(std::move(energies));
  if (m.n_correct > 0) {
    m.tpc = static_cast<double>(m.total_tokens) / m.n_correct;
    m.jpc = m.total_energy / m.n_correct;
  }
  return m;
}

double reduction_percent(double ours, double baseline) {
  if (!std::isfinite(ours) || !std::isfinite(baseline) || baseline == 0.0) return std::nan("");
  return 100.0 * (1.0 - ours / baseline);
}

std::string metrics_csv(std::span<const RunMetrics> metrics) {
  std::string out = "method,dataset,backend,acc,lat_s,tpc,jpc\n";
  for (const auto& m : metrics) {
    out += csv_field(m.method) + ',' + csv_field(m.dataset) + ',' + csv_field(m.backend) + ',' + fmt(m.accuracy, 1) +
           ',' + fmt(m.mean_latency, 2) + ',' + fmt(m.tpc, 0) + ',' + fmt(m.jpc, 0) + '\n';
  }
  return out;
}

std::string reductions_csv(std::span<const RunMetrics> metrics, std::string_view reference) {
  std::string out = "method,baseline,dataset,backend,token_reduction_pct,latency_reduction_pct,energy_reduction_pct\n";
  for (const auto& ours : metrics) {
    if (ours.method != reference) continue;
    for (const auto& other : metrics) {
      if (other.method == reference || other.dataset != ours.dataset || other.backend != ours.backend) continue;
      out += csv_field(ours.method) + ',' + csv_field(other.method) + ',' + csv_field(ours.dataset) + ',' +
             csv_field(ours.backend) + ',' + fmt(reduction_percent(ours.tpc, other.tpc), 1) + ',' +
             fmt(reduction_percent(ours.mean_latency, other.mean_latency), 1) + ',' +
             fmt(reduction_percent(ours.jpc, other.jpc), 1) + '\n';
    }
  }
  return out;
}

std::string render_table(std::span<const RunMetrics> metrics, const EnergyModel& energy) {
  std::ostringstream os;
  if (energy.mode == EnergyMode::PowerTimesLatency) {
    os << "energy model: power x latency at " << fmt(energy.device_power_watts, 1) << " W\n";
  } else {
    os << "energy model: " << fmt(energy.joules_per_token, 4) << " J per token\n";
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-14s %-9s %6s %8s %8s %10s %9s %10s\n", "method", "dataset", "backend",
                "acc", "lat_s", "tpc", "jpc", "n", "tokens");
  os << line;
  for (const auto& m : metrics) {
    std::snprintf(line, sizeof line, "%-10s %-14s %-9s %6s %8s %8s %10s %9s %10lld\n", m.method.c_str(),
                  m.dataset.c_str(), m.backend.c_str(), fmt(m.accuracy, 1).c_str(), fmt(m.mean_latency, 2).c_str(),
                  fmt(m.tpc, 0).c_str(), fmt(m.jpc, 0).c_str(),
                  (std::to_string(m.n_correct) + "/" + std::to_string(m.n_problems)).c_str(), m.total_tokens);
    os << line;
  }
  bool header = false;
  for (const auto& ours : metrics) {
    if (ours.method != "ars") continue;
    for (const auto& other : metrics) {
      if (other.method == "ars" || other.dataset != ours.dataset || other.backend != ours.backend) continue;
      if (!header) {
        os << "\nreductions of ars vs baseline (tpc / latency / jpc):\n";
        header = true;
      }
      os << "  vs " << other.method << " on " << ours.dataset << ": " << fmt(reduction_percent(ours.tpc, other.tpc), 1)
         << "% / " << fmt(reduction_percent(ours.mean_latency, other.mean_latency), 1) << "% / "
         << fmt(reduction_percent(ours.jpc, other.jpc), 1) << "%\n";
    }
  }
  return os.str();
}

ReportFiles emit_report(std::span<const RunMetrics> metrics, std::span<const ScoredTrace> traces,
                        const EnergyModel& energy, const std::filesystem::path& out_dir,
                        std::span<const ReportFormat> formats) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  }
  auto wants = [&](ReportFormat f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

  ReportFiles files;
  if (wants(ReportFormat::Csv)) {
    files.metrics_csv = out_dir / "metrics.csv";
    files.reductions_csv = out_dir / "reductions.csv";
    write_file(files.metrics_csv, metrics_csv(metrics));
    write_file(files.reductions_csv, reductions_csv(metrics));
  }
  if (wants(ReportFormat::Jsonl)) {
    files.traces_jsonl = out_dir / "traces.jsonl";
    std::ostringstream os;
    for (const auto& st : traces) {
      write_trace_line(os, st.trace, {{"dataset", st.dataset}, {"gold", st.gold}, {"correct", st.correct}});
    }
    write_file(files.traces_jsonl, os.str());
  }
  if (wants(ReportFormat::Text)) {
    files.table_txt = out_dir / "report.txt";
    write_file(files.table_txt, render_table(metrics, energy));
  }
  return files;
}

}  // namespace ars
