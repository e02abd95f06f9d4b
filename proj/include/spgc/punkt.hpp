#pragma once

// Punkt sentence boundary detection (Kiss & Strunk), decision procedure only.
//
// This is a faithful port of the NLTK 3.10 PunktSentenceTokenizer inference
// path: candidate contexts, first-pass (type based) and second-pass
// (orthographic / collocation / sentence-starter) annotation, and boundary
// realignment. Parameters are read from the punkt_tab text layout
// (abbrev_types.txt, collocations.tab, sent_starters.txt, ortho_context.tab).
// Training is not implemented.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "spgc/detail/embedded_data.hpp"
#include "spgc/io.hpp"
#include "spgc/unicode.hpp"

namespace spgc::punkt {

using unicode::is_space;

// Orthographic context flags.
inline constexpr int kOrthoBegUc = 1 << 1;
inline constexpr int kOrthoMidUc = 1 << 2;
inline constexpr int kOrthoUnkUc = 1 << 3;
inline constexpr int kOrthoBegLc = 1 << 4;
inline constexpr int kOrthoMidLc = 1 << 5;
inline constexpr int kOrthoUnkLc = 1 << 6;
inline constexpr int kOrthoUc = kOrthoBegUc + kOrthoMidUc + kOrthoUnkUc;
inline constexpr int kOrthoLc = kOrthoBegLc + kOrthoMidLc + kOrthoUnkLc;

struct Parameters {
  std::unordered_set<std::u32string> abbrev_types;
  std::set<std::pair<std::u32string, std::u32string>> collocations;
  std::unordered_set<std::u32string> sent_starters;
  std::unordered_map<std::u32string, int> ortho_context;

  int ortho(const std::u32string& type) const {
    auto it = ortho_context.find(type);
    return it == ortho_context.end() ? 0 : it->second;
  }
};

namespace detail {

// Lines of a punkt_tab file; a single trailing newline does not yield an entry.
inline std::vector<std::string_view> tab_lines(std::string_view text) {
  if (text.empty()) return {};
  if (text.back() == '\n') text.remove_suffix(1);
  return split_view(text, '\n');
}

}  // namespace detail

inline Parameters parse_parameters(std::string_view abbrev_types, std::string_view collocations,
                                   std::string_view sent_starters, std::string_view ortho_context) {
  Parameters p;
  for (auto line : detail::tab_lines(abbrev_types)) p.abbrev_types.insert(unicode::decode(line));
  for (auto line : detail::tab_lines(sent_starters)) p.sent_starters.insert(unicode::decode(line));
  for (auto line : detail::tab_lines(collocations)) {
    auto cols = split_view(line, '\t');
    if (cols.size() != 2) throw MalformedSource("collocations.tab: expected two columns");
    p.collocations.emplace(unicode::decode(cols[0]), unicode::decode(cols[1]));
  }
  for (auto line : detail::tab_lines(ortho_context)) {
    auto cols = split_view(line, '\t');
    if (cols.size() != 2) throw MalformedSource("ortho_context.tab: expected two columns");
    p.ortho_context[unicode::decode(cols[0])] = std::stoi(std::string(cols[1]));
  }
  return p;
}

inline Parameters load_parameters(const fs::path& dir) {
  return parse_parameters(read_file(dir / "abbrev_types.txt"), read_file(dir / "collocations.tab"),
                          read_file(dir / "sent_starters.txt"), read_file(dir / "ortho_context.tab"));
}

/// Parameters shipped with the library, by Punkt language name ("english", ...).
inline const Parameters* builtin_parameters(std::string_view language) {
  static const auto table = [] {
    std::map<std::string, Parameters, std::less<>> m;
    for (const auto& t : spgc::detail::kPunktTables)
      m.emplace(std::string(t.language),
                parse_parameters(t.abbrev_types, t.collocations, t.sent_starters, t.ortho_context));
    return m;
  }();
  auto it = table.find(language);
  return it == table.end() ? nullptr : &it->second;
}

namespace detail {

inline bool is_non_word_char(char32_t c) {
  switch (c) {
    case U')': case U'"': case U';': case U'}': case U']': case U'*': case U':': case U'@':
    case U'\'': case U'(': case U'{': case U'[': case 0x2018: case 0x2019: case 0x201C:
    case 0x201D: case 0xAB: case 0xBB: case U'?': case U'!':
      return true;
    default:
      return false;
  }
}

inline bool is_word_start(char32_t c) {
  switch (c) {
    case U'(': case U'"': case U'`': case U'{': case U'[': case U':': case U';': case U'&':
    case U'#': case U'*': case U'@': case U')': case U'}': case U']': case U'-': case U',':
      return false;
    default:
      return true;
  }
}

// Length of the multi-character punctuation match (`--+`, `..+`, `. . .`) at p, or 0.
inline std::size_t multi_char_at(std::u32string_view s, std::size_t p) {
  const std::size_t n = s.size();
  if (p + 1 >= n) return 0;
  if (s[p] == U'-' && s[p + 1] == U'-') {
    std::size_t q = p;
    while (q < n && s[q] == U'-') ++q;
    return q - p;
  }
  if (s[p] != U'.') return 0;
  if (s[p + 1] == U'.') {
    std::size_t q = p;
    while (q < n && s[q] == U'.') ++q;
    return q - p;
  }
  std::size_t reps = 0;
  while (p + 2 * reps + 1 < n && s[p + 2 * reps] == U'.' && is_space(s[p + 2 * reps + 1])) ++reps;
  if (reps < 2) return 0;
  if (p + 2 * reps < n && s[p + 2 * reps] == U'.') return 2 * reps + 1;
  return reps >= 3 ? 2 * reps - 1 : 0;
}

inline bool word_ends_at(std::u32string_view s, std::size_t q) {
  const std::size_t n = s.size();
  if (q >= n) return true;
  if (is_space(s[q]) || is_non_word_char(s[q]) || multi_char_at(s, q)) return true;
  if (s[q] == U',') {
    const std::size_t r = q + 1;
    return r >= n || is_space(s[r]) || is_non_word_char(s[r]) || multi_char_at(s, r);
  }
  return false;
}

}  // namespace detail

/// Punkt's punctuation-splitting word regex applied to one line.
inline std::vector<std::u32string_view> word_tokenize(std::u32string_view line) {
  std::vector<std::u32string_view> out;
  const std::size_t n = line.size();
  std::size_t p = 0;
  while (p < n) {
    if (is_space(line[p])) {
      ++p;
      continue;
    }
    if (auto len = detail::multi_char_at(line, p)) {
      out.push_back(line.substr(p, len));
      p += len;
      continue;
    }
    if (detail::is_word_start(line[p])) {
      std::size_t q = p + 1;
      while (!detail::word_ends_at(line, q)) ++q;
      out.push_back(line.substr(p, q - p));
      p = q;
      continue;
    }
    out.push_back(line.substr(p, 1));
    ++p;
  }
  return out;
}

struct Token {
  std::u32string tok;
  std::u32string type;
  bool period_final = false;
  bool sentbreak = false;
  bool abbr = false;
  bool ellipsis = false;

  explicit Token(std::u32string_view t) : tok(t) {
    period_final = !tok.empty() && tok.back() == U'.';
    type = numeric(tok) ? std::u32string(U"##number##") : unicode::python_lower(tok);
  }

  std::u32string type_no_period() const {
    if (type.size() > 1 && type.back() == U'.') return type.substr(0, type.size() - 1);
    return type;
  }
  std::u32string type_no_sentperiod() const { return sentbreak ? type_no_period() : type; }
  bool first_upper() const { return !tok.empty() && unicode::is_upper(tok.front()); }
  bool first_lower() const { return !tok.empty() && unicode::is_lower(tok.front()); }

  // `[^\W\d]\.$`
  bool is_initial() const {
    return tok.size() == 2 && tok[1] == U'.' && unicode::is_word(tok[0]) &&
           !unicode::is_decimal(tok[0]);
  }

  // `\.\.+$`
  bool is_ellipsis() const {
    if (tok.size() < 2) return false;
    for (char32_t c : tok)
      if (c != U'.') return false;
    return true;
  }

 private:
  // `^-?[\.,]?\d[\d,\.-]*\.?$`
  static bool numeric(std::u32string_view t) {
    std::size_t i = 0;
    if (i < t.size() && t[i] == U'-') ++i;
    if (i < t.size() && (t[i] == U'.' || t[i] == U',')) ++i;
    if (i >= t.size() || !unicode::is_decimal(t[i])) return false;
    for (++i; i < t.size(); ++i) {
      const char32_t c = t[i];
      if (!(unicode::is_decimal(c) || c == U',' || c == U'.' || c == U'-')) return false;
    }
    return true;
  }
};

struct Span {
  std::size_t start = 0;
  std::size_t stop = 0;
};

class SentenceTokenizer {
 public:
  explicit SentenceTokenizer(const Parameters& params) : params_(&params) {}

  /// Sentence spans (code point offsets) with boundary realignment applied.
  std::vector<Span> span_tokenize(std::u32string_view text) const {
    return realign_boundaries(text, slices_from_text(text));
  }

  std::vector<std::u32string_view> tokenize(std::u32string_view text) const {
    std::vector<std::u32string_view> out;
    for (const auto& s : span_tokenize(text)) out.push_back(slice(text, s));
    return out;
  }

  bool text_contains_sentbreak(std::u32string_view text) const {
    auto tokens = annotate(tokenize_words(text));
    for (std::size_t k = 0; k + 1 < tokens.size(); ++k)
      if (tokens[k].sentbreak) return true;
    return false;
  }

 private:
  struct Candidate {
    std::size_t pos = 0;  // index of the sentence-ending character
    std::size_t after_end = 0;
    std::optional<std::size_t> next_tok_start;
  };

  static std::u32string_view slice(std::u32string_view text, Span s) {
    if (s.start >= s.stop || s.start >= text.size()) return {};
    return text.substr(s.start, std::min(s.stop, text.size()) - s.start);
  }

  static bool is_ascii_whitespace(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == 0x0B || c == 0x0C;
  }

  // `[.?!](?=(?P<after_tok>NonWord|\s+(?P<next_tok>\S+)))`
  static std::vector<Candidate> period_contexts(std::u32string_view text) {
    std::vector<Candidate> out;
    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
      const char32_t c = text[i];
      if (c != U'.' && c != U'?' && c != U'!') continue;
      if (i + 1 >= n) continue;
      if (detail::is_non_word_char(text[i + 1])) {
        out.push_back({i, i + 2, std::nullopt});
        continue;
      }
      std::size_t j = i + 1;
      while (j < n && is_space(text[j])) ++j;
      if (j == i + 1 || j >= n) continue;
      std::size_t k = j;
      while (k < n && !is_space(text[k])) ++k;
      out.push_back({i, k, j});
    }
    return out;
  }

  std::vector<std::pair<Candidate, std::u32string>> potential_end_contexts(
      std::u32string_view text) const {
    std::vector<std::pair<Candidate, std::u32string>> out;
    Span previous_slice{0, 0};
    std::optional<Candidate> previous_match;
    auto context = [&](const Candidate& m, Span word) {
      std::u32string ctx(slice(text, word));
      ctx.append(text.substr(m.pos, m.after_end - m.pos));
      return ctx;
    };
    for (const Candidate& match : period_contexts(text)) {
      const std::size_t before_start = previous_slice.stop;
      std::size_t last_ws = 0;
      for (std::size_t i = match.pos; i > before_start; --i) {
        if (is_ascii_whitespace(text[i - 1])) {
          last_ws = i - 1 - before_start;
          break;
        }
      }
      std::size_t word_start;
      if (last_ws) word_start = last_ws + previous_slice.stop + 1;
      else word_start = previous_slice.start;
      const Span prev_word{word_start, match.pos};
      if (previous_match && previous_slice.stop <= prev_word.start)
        out.emplace_back(*previous_match, context(*previous_match, previous_slice));
      previous_match = match;
      previous_slice = prev_word;
    }
    if (previous_match) out.emplace_back(*previous_match, context(*previous_match, previous_slice));
    return out;
  }

  std::vector<Span> slices_from_text(std::u32string_view text) const {
    std::vector<Span> out;
    std::size_t last_break = 0;
    for (const auto& [match, ctx] : potential_end_contexts(text)) {
      if (text_contains_sentbreak(ctx)) {
        out.push_back({last_break, match.pos + 1});
        last_break = match.next_tok_start ? *match.next_tok_start : match.pos + 1;
      }
    }
    std::size_t end = text.size();
    while (end > 0 && is_space(text[end - 1])) --end;
    out.push_back({last_break, end});
    return out;
  }

  static bool is_realign_char(char32_t c) {
    switch (c) {
      case U'"': case U'\'': case U')': case U']': case U'}': case 0x2018: case 0x2019:
      case 0x201C: case 0x201D: case 0xAB: case 0xBB:
        return true;
      default:
        return false;
    }
  }

  // re_boundary_realignment.match(s): returns (length of closers, end of match).
  static std::optional<std::pair<std::size_t, std::size_t>> realignment(std::u32string_view s) {
    std::size_t run = 0;
    while (run < s.size() && is_realign_char(s[run])) ++run;
    if (run == 0) return std::nullopt;
    if (run < s.size() && is_space(s[run])) {
      std::size_t end = run;
      while (end < s.size() && is_space(s[end])) ++end;
      return std::make_pair(run, end);
    }
    if (s.substr(run).starts_with(U"--") || run == s.size()) return std::make_pair(run, run);
    return std::nullopt;
  }

  static std::vector<Span> realign_boundaries(std::u32string_view text,
                                              const std::vector<Span>& slices) {
    std::vector<Span> out;
    std::size_t realign = 0;
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const Span s1{slices[i].start + realign, slices[i].stop};
      if (i + 1 == slices.size()) {
        if (!slice(text, s1).empty()) out.push_back(s1);
        continue;
      }
      const Span s2 = slices[i + 1];
      if (auto m = realignment(slice(text, s2))) {
        out.push_back({s1.start, s2.start + m->first});
        realign = m->second;
      } else {
        realign = 0;
        if (!slice(text, s1).empty()) out.push_back(s1);
      }
    }
    return out;
  }

  static std::vector<Token> tokenize_words(std::u32string_view text) {
    std::vector<Token> out;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto nl = text.find(U'\n', start);
      if (nl == std::u32string_view::npos) nl = text.size();
      const auto line = text.substr(start, nl - start);
      if (!unicode::strip(line).empty())
        for (auto w : word_tokenize(line)) out.emplace_back(w);
      start = nl + 1;
    }
    return out;
  }

  std::vector<Token> annotate(std::vector<Token> tokens) const {
    for (auto& t : tokens) first_pass(t);
    for (std::size_t k = 0; k + 1 < tokens.size(); ++k) second_pass(tokens[k], tokens[k + 1]);
    return tokens;
  }

  void first_pass(Token& t) const {
    const auto& tok = t.tok;
    if (tok == U"." || tok == U"?" || tok == U"!") {
      t.sentbreak = true;
    } else if (t.is_ellipsis()) {
      t.ellipsis = true;
    } else if (t.period_final && !tok.ends_with(U"..")) {
      const auto stem = unicode::python_lower(std::u32string_view(tok).substr(0, tok.size() - 1));
      const auto dash = stem.rfind(U'-');
      const auto tail = dash == std::u32string::npos ? stem : stem.substr(dash + 1);
      if (params_->abbrev_types.contains(stem) || params_->abbrev_types.contains(tail))
        t.abbr = true;
      else
        t.sentbreak = true;
    }
  }

  // Returns true / false / nullopt ("unknown").
  std::optional<bool> ortho_heuristic(const Token& t) const {
    const auto& tok = t.tok;
    if (tok.size() == 1 && (tok[0] == U';' || tok[0] == U':' || tok[0] == U',' || tok[0] == U'.' ||
                            tok[0] == U'!' || tok[0] == U'?'))
      return false;
    const int ctx = params_->ortho(t.type_no_sentperiod());
    if (t.first_upper() && (ctx & kOrthoLc) && !(ctx & kOrthoMidUc)) return true;
    if (t.first_lower() && ((ctx & kOrthoUc) || !(ctx & kOrthoBegLc))) return false;
    return std::nullopt;
  }

  void second_pass(Token& t1, const Token& t2) const {
    if (!t1.period_final) return;
    const auto typ = t1.type_no_period();
    const auto next_typ = t2.type_no_sentperiod();
    const bool initial = t1.is_initial();

    if (params_->collocations.contains({typ, next_typ})) {
      t1.sentbreak = false;
      t1.abbr = true;
      return;
    }
    if ((t1.abbr || t1.ellipsis) && !initial) {
      const auto starter = ortho_heuristic(t2);
      if (starter == true) {
        t1.sentbreak = true;
        return;
      }
      if (t2.first_upper() && params_->sent_starters.contains(next_typ)) {
        t1.sentbreak = true;
        return;
      }
    }
    if (initial || typ == U"##number##") {
      const auto starter = ortho_heuristic(t2);
      if (starter == false) {
        t1.sentbreak = false;
        t1.abbr = true;
        return;
      }
      if (!starter && initial && t2.first_upper() && !(params_->ortho(next_typ) & kOrthoLc)) {
        t1.sentbreak = false;
        t1.abbr = true;
      }
    }
  }

  const Parameters* params_;
};

}  // namespace spgc::punkt
