#include "ars/difficulty.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ars/error.hpp"
#include "utf8.hpp"

namespace ars {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Non-ASCII bytes are treated as word characters so multi-byte letters never split words.
bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

const char* kPreamble =
    "You are a careful mathematical problem solver. Solve the problem below.\n";

std::string answer_format(DatasetKind kind) {
  std::string out;
  switch (kind) {
    case DatasetKind::Gsm8kStyle:
      out = "The answer is a single number.\n";
      break;
    case DatasetKind::MathStyle:
      out = "Simplify the answer completely.\n";
      break;
    case DatasetKind::Plain:
      break;
  }
  out += "End with 'Final answer: \\boxed{...}'.";
  return out;
}

std::string assemble(std::string_view instruction, const Query& q, DatasetKind kind) {
  std::string prompt = kPreamble;
  prompt += instruction;
  prompt += "\n\nProblem: ";
  prompt += q.text;
  prompt += "\n\n";
  prompt += answer_format(kind);
  prompt += kResponseCue;
  return prompt;
}

}  // namespace

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::Gsm8kStyle:
      return "gsm8k";
    case DatasetKind::MathStyle:
      return "math";
    case DatasetKind::Plain:
      return "plain";
  }
  return "plain";
}

DatasetKind dataset_kind_from_string(std::string_view name) {
  const auto n = to_lower(name);
  if (n == "gsm8k" || n == "gsm8k_style") return DatasetKind::Gsm8kStyle;
  if (n == "math" || n == "math_style" || n == "math500") return DatasetKind::MathStyle;
  if (n == "plain") return DatasetKind::Plain;
  throw ConfigError("unknown dataset kind '" + std::string(name) + "'");
}

std::string_view to_string(ModeTag tag) {
  switch (tag) {
    case ModeTag::Fast:
      return "FAST";
    case ModeTag::Mod:
      return "MOD";
    case ModeTag::Deep:
      return "DEEP";
  }
  return "FAST";
}

ModeTag mode_tag_from_string(std::string_view name) {
  if (name == "FAST") return ModeTag::Fast;
  if (name == "MOD") return ModeTag::Mod;
  if (name == "DEEP") return ModeTag::Deep;
  throw ConfigError("unknown reasoning mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

DifficultyLexicon::DifficultyLexicon(std::vector<std::string> keywords, std::string symbol_chars)
    : symbols_utf8_(std::move(symbol_chars)) {
  if (keywords.empty()) throw ConfigError("difficulty lexicon needs at least one keyword");
  std::set<std::string> seen;
  for (auto& k : keywords) {
    auto lowered = to_lower(k);
    if (lowered.empty()) throw ConfigError("difficulty lexicon contains an empty keyword");
    if (!seen.insert(lowered).second) throw ConfigError("duplicate keyword '" + lowered + "'");
    keywords_.push_back(std::move(lowered));
  }
  symbols_ = detail::decode_utf8(symbols_utf8_);
}

DifficultyLexicon DifficultyLexicon::defaults() {
  return DifficultyLexicon(
      {"prove", "integral", "derivative", "limit", "matrix", "probability", "polynomial",
       "modulo", "equation", "inequality", "geometry", "triangle", "angle", "prime", "sequence",
       "series", "function", "remainder", "factor", "root"},
      "+-*/=<>^_\\%(){}[]∑∫√π≤≥≠");
}

bool DifficultyLexicon::is_symbol(char32_t cp) const noexcept {
  return symbols_.find(cp) != std::u32string::npos;
}

// ---------------------------------------------------------------------------

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  for (char c : text) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  return words;
}

std::size_t count_keyword(std::string_view text, std::string_view keyword) {
  if (keyword.empty()) return 0;
  const auto hay = to_lower(text);
  const auto needle = to_lower(keyword);
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_byte(hay[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == hay.size() || !is_word_byte(hay[end]);
    if (left_ok && right_ok) {
      ++count;
      pos = end;
    } else {
      ++pos;
    }
  }
  return count;
}

std::size_t count_symbols(std::string_view text, const DifficultyLexicon& lex) {
  std::size_t count = 0;
  for (char32_t cp : detail::decode_utf8(text)) {
    if (lex.is_symbol(cp)) ++count;
  }
  return count;
}

DifficultyScore heuristic_difficulty(const Query& q, const DifficultyLexicon& lex) {
  const auto words = static_cast<double>(count_words(q.text));
  std::size_t hits = 0;
  for (const auto& k : lex.keywords()) hits += count_keyword(q.text, k);
  const auto symbols = static_cast<double>(count_symbols(q.text, lex));
  const auto keyword_scale = 3.0 * static_cast<double>(lex.keywords().size());

  DifficultyScore s;
  s.length_term = 0.4 * std::min(1.0, words / 80.0);
  s.keyword_term = 0.4 * std::min(1.0, static_cast<double>(hits) / keyword_scale);
  s.symbol_term = 0.2 * std::min(1.0, symbols / 10.0);
  s.value = s.length_term + s.keyword_term + s.symbol_term;
  return s;
}

// ---------------------------------------------------------------------------

ReasoningMode::ReasoningMode(PolicyParams params) : params_(std::move(params)) {}

ReasoningMode ReasoningMode::with_defaults(ModeTag tag) {
  switch (tag) {
    case ModeTag::Fast:
      return ReasoningMode(CoDFast{});
    case ModeTag::Mod:
      return ReasoningMode(ElasticModerate{});
    case ModeTag::Deep:
      return ReasoningMode(DeepReflect{});
  }
  return ReasoningMode(CoDFast{});
}

int ReasoningMode::samples() const noexcept {
  if (const auto* deep = std::get_if<DeepReflect>(&params_)) return std::max(1, deep->sc_k);
  return 1;
}

ReasoningMode schedule_mode(const DifficultyScore& score, double d1, double d2) {
  if (!(d1 >= 0.0 && d1 < d2 && d2 <= 1.0)) {
    throw ConfigError("difficulty cut points must satisfy 0 <= d1 < d2 <= 1");
  }
  if (score.value < d1) return ReasoningMode::with_defaults(ModeTag::Fast);
  if (score.value < d2) return ReasoningMode::with_defaults(ModeTag::Mod);
  return ReasoningMode::with_defaults(ModeTag::Deep);
}

// ---------------------------------------------------------------------------

std::string build_prompt(const ReasoningMode& mode, const Query& q, DatasetKind kind) {
  std::string instruction;
  if (const auto* fast = std::get_if<CoDFast>(&mode.params())) {
    instruction = "Think in at most " + std::to_string(fast->drafts) + " drafts of at most " +
                  std::to_string(fast->per_draft) + " words each, then answer.";
  } else if (const auto* mod = std::get_if<ElasticModerate>(&mode.params())) {
    instruction = "Keep your reasoning within " + std::to_string(mod->budget_tokens) +
                  " tokens, then answer.";
  } else {
    instruction = "Reason carefully step by step and check each step before answering.";
  }
  return assemble(instruction, q, kind);
}

std::string build_vanilla_prompt(const Query& q, DatasetKind kind) {
  return assemble("Let's think step by step.", q, kind);
}

std::string build_budget_prompt(const Query& q, DatasetKind kind, int budget_tokens) {
  return assemble("Let's think step by step and use less than " + std::to_string(budget_tokens) +
                      " tokens.",
                  q, kind);
}

}  // namespace ars
