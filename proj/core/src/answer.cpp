#include "ars/answer.hpp"

#include <cctype>
#include <numeric>
#include <regex>

namespace ars {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Content of the balanced brace group opening at `open` (s[open] == '{').
std::optional<std::string> brace_group(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '{') {
      ++depth;
    } else if (s[i] == '}') {
      if (--depth == 0) return std::string(s.substr(open + 1, i - open - 1));
    }
  }
  return std::nullopt;
}

std::optional<std::string> last_boxed(std::string_view text) {
  for (auto pos = text.rfind("\\boxed"); pos != std::string_view::npos;
       pos = pos == 0 ? std::string_view::npos : text.rfind("\\boxed", pos - 1)) {
    auto open = pos + 6;
    while (open < text.size() && text[open] == ' ') ++open;
    if (open < text.size() && text[open] == '{') {
      if (auto content = brace_group(text, open)) return content;
    }
  }
  return std::nullopt;
}

std::optional<std::string> last_hash_tail(std::string_view text) {
  const auto pos = text.rfind("####");
  if (pos == std::string_view::npos) return std::nullopt;
  auto tail = text.substr(pos + 4);
  const auto eol = tail.find('\n');
  if (eol != std::string_view::npos) tail = tail.substr(0, eol);
  auto t = trim(tail);
  if (t.empty()) return std::nullopt;
  return t;
}

const std::regex& answer_is_re() {
  static const std::regex re(R"(answer\s+is\s*:?\s*\$?([^\s$]+))", std::regex::icase);
  return re;
}

const std::regex& number_re() {
  static const std::regex re(R"((^|[^A-Za-z0-9_.])(-?\d[\d,]*(?:\.\d+)?(?:/\d+)?))");
  return re;
}

std::optional<std::string> last_answer_phrase(const std::string& text) {
  std::optional<std::string> found;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), answer_is_re()); it != std::sregex_iterator(); ++it) {
    std::string candidate = (*it)[1].str();
    while (!candidate.empty() && std::string_view(".,;:!?)").find(candidate.back()) != std::string_view::npos) {
      candidate.pop_back();
    }
    if (!candidate.empty()) found = candidate;
  }
  return found;
}

std::optional<std::string> last_number(const std::string& text) {
  std::optional<std::string> found;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number_re()); it != std::sregex_iterator(); ++it) {
    std::string candidate = (*it)[2].str();
    while (!candidate.empty() && candidate.back() == ',') candidate.pop_back();
    found = candidate;
  }
  return found;
}

bool looks_numeric(std::string_view s) {
  static const std::regex re(R"([+-]?(\d+(\.\d*)?|\.\d+)(/[+-]?\d+)?)");
  return std::regex_match(s.begin(), s.end(), re);
}

std::string strip_fraction_zeros(std::string s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) return s;
  const auto slash = s.find('/');
  std::string head = s.substr(0, slash == std::string::npos ? s.size() : slash);
  const std::string tail = slash == std::string::npos ? "" : s.substr(slash);
  if (head.find('.') != std::string::npos) {
    while (!head.empty() && head.back() == '0') head.pop_back();
    if (!head.empty() && head.back() == '.') head.pop_back();
  }
  return head + tail;
}

bool mul_overflows(std::int64_t a, std::int64_t b, std::int64_t& out) { return __builtin_mul_overflow(a, b, &out); }
bool add_overflows(std::int64_t a, std::int64_t b, std::int64_t& out) { return __builtin_add_overflow(a, b, &out); }

std::optional<Rational> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    ++i;
  }
  if (i >= s.size()) return std::nullopt;
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    seen_digit = true;
    if (mul_overflows(num, 10, num) || add_overflows(num, c - '0', num)) return std::nullopt;
    if (seen_dot && mul_overflows(den, 10, den)) return std::nullopt;
  }
  if (!seen_digit) return std::nullopt;
  return Rational{negative ? -num : num, den};
}

Rational reduce(Rational r) {
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  const auto g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  if (r.num == 0) r.den = 1;
  return r;
}

}  // namespace

std::string normalize_answer(std::string_view answer) {
  std::string s = trim(answer);
  // \frac{a}{b}, \dfrac{a}{b}, \tfrac{a}{b} -> a/b
  for (std::string_view cmd : {"\\dfrac", "\\tfrac", "\\frac"}) {
    std::size_t pos;
    while ((pos = s.find(cmd)) != std::string::npos) {
      const auto open1 = pos + cmd.size();
      if (open1 >= s.size() || s[open1] != '{') break;
      const auto a = brace_group(s, open1);
      if (!a) break;
      const auto open2 = open1 + a->size() + 2;
      if (open2 >= s.size() || s[open2] != '{') break;
      const auto b = brace_group(s, open2);
      if (!b) break;
      s.replace(pos, open2 + b->size() + 2 - pos, *a + "/" + *b);
    }
  }
  replace_all(s, "$", "");
  replace_all(s, "\\!", "");
  replace_all(s, "\\,", "");
  s = trim(s);

  std::string compact;
  for (char c : s) {
    if (c != ',' && !std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (!compact.empty() && compact.back() == '.') compact.pop_back();
  if (looks_numeric(compact)) {
    if (compact.front() == '+') compact.erase(0, 1);
    return strip_fraction_zeros(compact);
  }
  return s;
}

std::string extract_final_answer(std::string_view text, DatasetKind /*kind*/) {
  if (auto boxed = last_boxed(text)) return normalize_answer(*boxed);
  if (auto tail = last_hash_tail(text)) return normalize_answer(*tail);
  const std::string owned(text);
  if (auto phrase = last_answer_phrase(owned)) return normalize_answer(*phrase);
  if (auto number = last_number(owned)) return normalize_answer(*number);
  return {};
}

std::optional<Rational> parse_rational(std::string_view normalized) {
  const auto slash = normalized.find('/');
  if (slash == std::string_view::npos) {
    auto r = parse_decimal(normalized);
    if (!r) return std::nullopt;
    return reduce(*r);
  }
  auto top = parse_decimal(normalized.substr(0, slash));
  auto bottom = parse_decimal(normalized.substr(slash + 1));
  if (!top || !bottom || bottom->num == 0) return std::nullopt;
  // (a/b) / (c/d) = (a*d) / (b*c)
  std::int64_t num = 0;
  std::int64_t den = 0;
  if (mul_overflows(top->num, bottom->den, num) || mul_overflows(top->den, bottom->num, den)) return std::nullopt;
  return reduce(Rational{num, den});
}

}  // namespace ars
