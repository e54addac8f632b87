#pragma once

// Query difficulty scoring, reasoning-mode scheduling and prompt construction.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ars {

enum class DatasetKind { Gsm8kStyle, MathStyle, Plain };

std::string_view to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(std::string_view name);

struct Query {
  std::string id;
  std::string text;
  std::optional<std::string> gold_answer;
  DatasetKind dataset_kind = DatasetKind::Plain;
};

/// Keyword set and symbol class used by the heuristic difficulty score.
class DifficultyLexicon {
 public:
  /// Throws ConfigError on an empty keyword set or duplicate keywords.
  /// Keywords are lowercased; symbol_chars is UTF-8.
  DifficultyLexicon(std::vector<std::string> keywords, std::string symbol_chars);

  static DifficultyLexicon defaults();

  const std::vector<std::string>& keywords() const noexcept { return keywords_; }
  const std::u32string& symbol_chars() const noexcept { return symbols_; }
  const std::string& symbol_chars_utf8() const noexcept { return symbols_utf8_; }
  bool is_symbol(char32_t cp) const noexcept;

 private:
  std::vector<std::string> keywords_;
  std::string symbols_utf8_;
  std::u32string symbols_;
};

struct DifficultyScore {
  double value = 0.0;
  double length_term = 0.0;   // in [0, 0.4]
  double keyword_term = 0.0;  // in [0, 0.4]
  double symbol_term = 0.0;   // in [0, 0.2]
};

enum class ModeTag { Fast, Mod, Deep };

std::string_view to_string(ModeTag tag);
ModeTag mode_tag_from_string(std::string_view name);

struct CoDFast {
  int drafts = 2;
  int per_draft = 10;
  bool operator==(const CoDFast&) const = default;
};

struct ElasticModerate {
  int budget_tokens = 64;
  bool operator==(const ElasticModerate&) const = default;
};

struct DeepReflect {
  int sc_k = 3;
  bool operator==(const DeepReflect&) const = default;
};

using PolicyParams = std::variant<CoDFast, ElasticModerate, DeepReflect>;

/// A scheduled mode. The tag is derived from the policy alternative so the two cannot disagree.
class ReasoningMode {
 public:
  explicit ReasoningMode(PolicyParams params = CoDFast{});

  static ReasoningMode with_defaults(ModeTag tag);

  ModeTag tag() const noexcept { return static_cast<ModeTag>(params_.index()); }
  const PolicyParams& params() const noexcept { return params_; }

  /// Number of independent generations the engine runs for this mode.
  int samples() const noexcept;

  bool operator==(const ReasoningMode&) const = default;

 private:
  PolicyParams params_;
};

/// Number of maximal runs of non-whitespace characters.
std::size_t count_words(std::string_view text);

/// Case-insensitive, non-overlapping whole-word occurrences of `keyword` in `text`.
std::size_t count_keyword(std::string_view text, std::string_view keyword);

std::size_t count_symbols(std::string_view text, const DifficultyLexicon& lex);

DifficultyScore heuristic_difficulty(const Query& q, const DifficultyLexicon& lex);

/// Half-open bands: [0, d1) -> FAST, [d1, d2) -> MOD, [d2, 1] -> DEEP.
/// Throws ConfigError unless 0 <= d1 < d2 <= 1.
ReasoningMode schedule_mode(const DifficultyScore& score, double d1, double d2);

inline constexpr double kDefaultD1 = 0.35;
inline constexpr double kDefaultD2 = 0.65;

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

/// Last line of every prompt; generated text starts right after it.
inline constexpr std::string_view kResponseCue = "\n<|response|>\n";

/// Mode policy prompt: preamble, mode instruction, query, answer format, response cue.
std::string build_prompt(const ReasoningMode& mode, const Query& q, DatasetKind kind);

/// Plain chain-of-thought prompt used by the vanilla and static-suppression baselines.
std::string build_vanilla_prompt(const Query& q, DatasetKind kind);

/// Token-budget prompt used by the budget-prompt baseline.
std::string build_budget_prompt(const Query& q, DatasetKind kind, int budget_tokens);

}  // namespace ars
