#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ars_cli/cli.hpp"

using ars::cli::cli_main;

namespace {

const std::string kFixtures = ARS_FIXTURES;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ars_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("run on the scripted fixture suite writes every report") {
  const auto dir = temp_dir("fixture");
  const auto r = run_cli({"run", "--dataset", kFixtures + "/scripted_suite.jsonl", "--backend", "scripted",
                          "--methods", "ars,vanilla", "--seed", "7", "--out", dir.string()});
  CHECK(r.code == 0);
  for (const char* f : {"metrics.csv", "reductions.csv", "traces.jsonl", "report.txt"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const auto first = slurp(dir / "metrics.csv");
  const auto first_traces = slurp(dir / "traces.jsonl");
  CHECK(first.find("ars,scripted_suite,scripted,100.0,") != std::string::npos);

  const auto again = run_cli({"run", "--dataset", kFixtures + "/scripted_suite.jsonl", "--backend", "scripted",
                              "--methods", "ars,vanilla", "--seed", "7", "--out", dir.string()});
  CHECK(again.code == 0);
  CHECK(slurp(dir / "metrics.csv") == first);
  CHECK(slurp(dir / "traces.jsonl") == first_traces);
  std::filesystem::remove_all(dir);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({"run", "--max-tokens", "0"}).code == ars::cli::kUsageError);
  CHECK(run_cli({"run", "--bogus"}).code == ars::cli::kUsageError);
  CHECK(run_cli({}).code == ars::cli::kUsageError);
  CHECK(run_cli({"run", "--backend", "carrier-pigeon"}).code == ars::cli::kUsageError);
  CHECK(run_cli({"validate-config"}).code == ars::cli::kUsageError);
  const auto bad_method = run_cli({"run", "--methods", "ars,magic", "--n", "2", "--out", temp_dir("m").string()});
  CHECK(bad_method.code != 0);
  CHECK(bad_method.err.find("magic") != std::string::npos);
}

TEST_CASE("runtime errors exit nonzero with a diagnostic") {
  const auto r = run_cli({"run", "--dataset", kFixtures + "/gsm8k_small.jsonl", "--backend", "scripted", "--out",
                          temp_dir("noscript").string()});
  CHECK(r.code != 0);
  CHECK(r.err.find("script") != std::string::npos);
  const auto missing = run_cli({"run", "--dataset", kFixtures + "/missing_question.jsonl", "--out",
                                temp_dir("missing").string()});
  CHECK(missing.code != 0);
  CHECK(missing.err.find("line 2") != std::string::npos);
}

TEST_CASE("validate-config prints the effective config") {
  const auto ok = run_cli({"validate-config", kFixtures + "/config_full.json"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"checkpoint_interval\": 32") != std::string::npos);
  const auto typo = run_cli({"validate-config", kFixtures + "/config_typo.json"});
  CHECK(typo.code != 0);
  CHECK(typo.err.find("checkpoint_intervl") != std::string::npos);
}

TEST_CASE("theorem-lab writes a report and per-instance CSVs") {
  const auto dir = temp_dir("lab");
  const auto r = run_cli({"theorem-lab", "--n-instances", "6", "--seed", "2", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "bound_report.json"));
  CHECK(std::filesystem::exists(dir / "per_instance_interval64.csv"));
  CHECK(std::filesystem::exists(dir / "per_instance_interval32.csv"));
  CHECK(run_cli({"theorem-lab", "--loops", "5", "--out", dir.string()}).code != 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("help exits cleanly") {
  const auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("theorem-lab") != std::string::npos);
}
