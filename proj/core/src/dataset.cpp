#include <fstream>
#include <set>

#include "ars/answer.hpp"
#include "ars/error.hpp"
#include "ars/harness.hpp"

namespace ars {

namespace {

using nlohmann::json;

template <typename Fn>
void for_each_record(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!record.is_object()) throw ParseError("record is not a JSON object", line_no);
    if (!fn(record, line_no)) break;
  }
}

std::string scalar_text(const json& v, std::string_view field, std::size_t line_no) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  throw ParseError("field '" + std::string(field) + "' must be a string or number", line_no);
}

std::string record_id(const json& record, std::size_t line_no) {
  if (!record.contains("id")) return "line-" + std::to_string(line_no);
  return scalar_text(record["id"], "id", line_no);
}

}  // namespace

std::vector<Query> load_dataset(const std::string& path, int n, std::optional<DatasetKind> kind) {
  if (n < 1) throw ConfigError("dataset cap n must be at least 1");
  std::vector<Query> out;
  std::set<std::string> ids;
  for_each_record(path, [&](const json& record, std::size_t line_no) {
    if (!record.contains("question")) throw ParseError("missing 'question' field", line_no);
    if (!record["question"].is_string()) throw ParseError("field 'question' must be a string", line_no);
    Query q;
    q.id = record_id(record, line_no);
    if (!ids.insert(q.id).second) throw ParseError("duplicate id '" + q.id + "'", line_no);
    q.text = record["question"].get<std::string>();
    if (q.text.find_first_not_of(" \t\r\n") == std::string::npos) throw ParseError("empty question", line_no);

    bool gsm8k_tail = false;
    if (record.contains("answer") && !record["answer"].is_null()) {
      auto answer = scalar_text(record["answer"], "answer", line_no);
      const auto hash = answer.rfind("####");
      if (hash != std::string::npos) {
        gsm8k_tail = true;
        answer = answer.substr(hash + 4);
      }
      q.gold_answer = normalize_answer(answer);
    }
    q.dataset_kind = kind ? *kind : (gsm8k_tail ? DatasetKind::Gsm8kStyle : DatasetKind::Plain);
    out.push_back(std::move(q));
    return static_cast<int>(out.size()) < n;
  });
  return out;
}

std::map<std::string, ScriptedReasonerSpec> load_dataset_scripts(const std::string& path) {
  std::map<std::string, ScriptedReasonerSpec> out;
  for_each_record(path, [&](const json& record, std::size_t line_no) {
    if (!record.contains("script")) return true;
    try {
      out.emplace(record_id(record, line_no), record["script"].get<ScriptedReasonerSpec>());
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid script: ") + e.what(), line_no);
    } catch (const ConfigError& e) {
      throw ParseError(std::string("invalid script: ") + e.what(), line_no);
    }
    return true;
  });
  return out;
}

bool score_answer(std::string_view pred, std::string_view gold, DatasetKind /*kind*/) {
  const auto p = normalize_answer(pred);
  const auto g = normalize_answer(gold);
  if (p.empty() || g.empty()) return false;
  const auto pr = parse_rational(p);
  const auto gr = parse_rational(g);
  if (pr && gr) return *pr == *gr;
  return p == g;
}

}  // namespace ars
