#pragma once

// Treebank-style word tokenization of a single sentence, reproducing NLTK's
// NLTKWordTokenizer (the improved TreebankWordTokenizer behind word_tokenize).
// Each rewrite step below corresponds to one regex substitution of the
// original and keeps its left-to-right, non-overlapping match semantics.

#include <string>
#include <string_view>
#include <vector>

#include "spgc/unicode.hpp"

namespace spgc::treebank {

namespace detail {

using unicode::is_space;
using unicode::is_word;
using unicode::ieq_ascii;

inline void pad(std::u32string& out, std::u32string_view piece) {
  out += U' ';
  out += piece;
  out += U' ';
}

template <typename Pred>
std::u32string pad_each(std::u32string_view s, Pred pred) {
  std::u32string out;
  out.reserve(s.size() + 8);
  for (char32_t c : s) {
    if (pred(c)) pad(out, std::u32string_view(&c, 1));
    else out += c;
  }
  return out;
}

// Non-overlapping literal replacement of `needle` by " needle ".
inline std::u32string pad_literal(std::u32string_view s, std::u32string_view needle) {
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.substr(i).starts_with(needle)) {
      pad(out, needle);
      i += needle.size();
    } else {
      out += s[i++];
    }
  }
  return out;
}

// ([«“‘„]|[`]+) -> " \1 "
inline std::u32string opening_quotes(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + 8);
  for (std::size_t i = 0; i < s.size();) {
    const char32_t c = s[i];
    if (c == 0xAB || c == 0x201C || c == 0x2018 || c == 0x201E) {
      pad(out, s.substr(i, 1));
      ++i;
    } else if (c == U'`') {
      std::size_t j = i;
      while (j < s.size() && s[j] == U'`') ++j;
      pad(out, s.substr(i, j - i));
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

// ([ \(\[{<])(\"|\'{2}) -> "\1 `` "
inline std::u32string opening_double_quotes(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t c = s[i];
    const bool opener = c == U' ' || c == U'(' || c == U'[' || c == U'{' || c == U'<';
    if (opener && i + 1 < s.size()) {
      std::size_t len = 0;
      if (s[i + 1] == U'"') len = 1;
      else if (i + 2 < s.size() && s[i + 1] == U'\'' && s[i + 2] == U'\'') len = 2;
      if (len) {
        out += c;
        out += U" `` ";
        i += 1 + len;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

inline bool boundary_after(std::u32string_view s, std::size_t j) {
  return j >= s.size() || !is_word(s[j]);
}

inline bool boundary_before(std::u32string_view s, std::size_t i) {
  return i == 0 || !is_word(s[i - 1]);
}

inline bool ci_match(std::u32string_view s, std::size_t i, std::string_view pattern) {
  if (i + pattern.size() > s.size()) return false;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const char p = pattern[k];
    const bool letter = (p >= 'a' && p <= 'z');
    if (letter ? !ieq_ascii(s[i + k], p) : s[i + k] != static_cast<char32_t>(p)) return false;
  }
  return true;
}

// (?i)(?<!\w)(\')(?!(?:re|ve|ll|m|t|s|d|n)\b)(?=\w) -> "\1 "
inline std::u32string leading_single_quote(std::u32string_view s) {
  static constexpr std::string_view kSuffixes[] = {"re", "ve", "ll", "m", "t", "s", "d", "n"};
  std::u32string out;
  out.reserve(s.size() + 8);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += s[i];
    if (s[i] != U'\'') continue;
    if (!boundary_before(s, i)) continue;
    if (i + 1 >= s.size() || !is_word(s[i + 1])) continue;
    bool contraction = false;
    for (auto suf : kSuffixes) {
      if (ci_match(s, i + 1, suf) && boundary_after(s, i + 1 + suf.size())) {
        contraction = true;
        break;
      }
    }
    if (!contraction) out += U' ';
  }
  return out;
}

inline bool in(char32_t c, std::u32string_view set) { return set.find(c) != std::u32string_view::npos; }

// ([^\.])(\.)(CLOSERS*)\s*$ ; `wide` selects the first variant, which also
// accepts », ”, ’ and space as closers and pads the period on both sides.
inline std::u32string final_period(std::u32string_view s, bool wide) {
  const std::u32string_view closers =
      wide ? std::u32string_view(U"])}>\"'»”’ ") : std::u32string_view(U"])}>\"'");
  const auto last = s.rfind(U'.');
  if (last == std::u32string_view::npos || last == 0 || s[last - 1] == U'.') return std::u32string(s);
  std::size_t j = last + 1;
  while (j < s.size() && in(s[j], closers)) ++j;
  std::size_t k = j;
  while (k < s.size() && is_space(s[k])) ++k;
  if (k != s.size()) return std::u32string(s);
  std::u32string out(s.substr(0, last));
  out += wide ? U" . " : U" .";
  out += s.substr(last + 1, j - last - 1);
  out += U' ';
  return out;
}

// ([:,])([^\d]) -> " \1 \2"
inline std::u32string comma_colon(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    if ((s[i] == U':' || s[i] == U',') && i + 1 < s.size() && !unicode::is_decimal(s[i + 1])) {
      out += U' ';
      out += s[i];
      out += U' ';
      out += s[i + 1];
      i += 2;
    } else {
      out += s[i++];
    }
  }
  return out;
}

// ([:,])$ -> " \1 "
inline std::u32string trailing_comma_colon(std::u32string_view s) {
  const std::size_t n = s.size();
  std::size_t at = std::u32string_view::npos;
  if (n >= 1 && (s[n - 1] == U':' || s[n - 1] == U',')) at = n - 1;
  else if (n >= 2 && s[n - 1] == U'\n' && (s[n - 2] == U':' || s[n - 2] == U',')) at = n - 2;
  if (at == std::u32string_view::npos) return std::u32string(s);
  std::u32string out(s.substr(0, at));
  pad(out, s.substr(at, 1));
  out += s.substr(at + 1);
  return out;
}

// \.{2,} -> " \g<0> "
inline std::u32string ellipses(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == U'.' && i + 1 < s.size() && s[i + 1] == U'.') {
      std::size_t j = i;
      while (j < s.size() && s[j] == U'.') ++j;
      pad(out, s.substr(i, j - i));
      i = j;
    } else {
      out += s[i++];
    }
  }
  return out;
}

// ([^'])' -> "\1 ' "
inline std::u32string closing_single_quote(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 2 < s.size() && s[i] != U'\'' && s[i + 1] == U'\'' && s[i + 2] == U' ') {
      out += s[i];
      out += U" ' ";
      i += 3;
    } else {
      out += s[i++];
    }
  }
  return out;
}

// \s+ -> " "
inline std::u32string collapse_space(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_space(s[i])) {
      while (i < s.size() && is_space(s[i])) ++i;
      out += U' ';
    } else {
      out += s[i++];
    }
  }
  return out;
}

// ([^' ])('[sS]|'[mM]|'[dD]|') -> "\1 \2 "
inline std::u32string clitics(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t c = s[i];
    if (c != U'\'' && c != U' ' && i + 1 < s.size() && s[i + 1] == U'\'') {
      if (i + 3 < s.size() && in(s[i + 2], U"sSmMdD") && s[i + 3] == U' ') {
        out += c;
        pad(out, s.substr(i + 1, 2));
        i += 4;
        continue;
      }
      if (i + 2 < s.size() && s[i + 2] == U' ') {
        out += c;
        out += U" ' ";
        i += 3;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

// ([^' ])('ll|'LL|'re|'RE|'ve|'VE|n't|N'T) -> "\1 \2 "
inline std::u32string long_clitics(std::u32string_view s) {
  static constexpr std::u32string_view kForms[] = {U"'ll", U"'LL", U"'re", U"'RE",
                                                   U"'ve", U"'VE", U"n't", U"N'T"};
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t c = s[i];
    if (c != U'\'' && c != U' ' && i + 4 < s.size() && s[i + 4] == U' ') {
      const auto body = s.substr(i + 1, 3);
      bool hit = false;
      for (auto f : kForms) hit = hit || body == f;
      if (hit) {
        out += c;
        pad(out, body);
        i += 5;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

// \b(first)(second)\b -> " \1 \2 " (case-insensitive). `space_after` replaces
// the trailing \b with (?=\s).
inline std::u32string split_compound(std::u32string_view s, std::string_view first,
                                     std::string_view second, bool space_after = false) {
  const std::size_t len = first.size() + second.size();
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    if (boundary_before(s, i) && ci_match(s, i, first) && ci_match(s, i + first.size(), second)) {
      const std::size_t end = i + len;
      const bool tail = space_after ? (end < s.size() && is_space(s[end])) : boundary_after(s, end);
      if (tail) {
        out += U' ';
        out += s.substr(i, first.size());
        out += U' ';
        out += s.substr(i + first.size(), second.size());
        out += U' ';
        i = end;
        continue;
      }
    }
    out += s[i++];
  }
  return out;
}

// (?i) ('t)(is)\b -> " \1 \2 "
inline std::u32string split_t_prefix(std::u32string_view s, std::string_view word) {
  std::u32string out;
  out.reserve(s.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == U' ' && i + 1 < s.size() && s[i + 1] == U'\'' && ci_match(s, i + 2, "t") &&
        ci_match(s, i + 3, word) && boundary_after(s, i + 3 + word.size())) {
      out += U' ';
      out += s.substr(i + 1, 2);
      out += U' ';
      out += s.substr(i + 3, word.size());
      out += U' ';
      i += 3 + word.size();
      continue;
    }
    out += s[i++];
  }
  return out;
}

}  // namespace detail

/// Tokenizes one sentence. Returned tokens are UTF-32 strings.
inline std::vector<std::u32string> tokenize(std::u32string_view sentence) {
  using namespace detail;
  std::u32string t(sentence);

  // Starting quotes.
  t = opening_quotes(t);
  if (!t.empty() && t[0] == U'"') t.replace(0, 1, U"``");
  t = pad_literal(t, U"``");
  t = opening_double_quotes(t);
  t = leading_single_quote(t);

  // Punctuation.
  t = final_period(t, /*wide=*/true);
  t = comma_colon(t);
  t = trailing_comma_colon(t);
  t = ellipses(t);
  t = pad_each(t, [](char32_t c) { return in(c, U";@#$%&"); });
  t = pad_each(t, [](char32_t c) { return c >= 0x2012 && c <= 0x2015; });
  t = final_period(t, /*wide=*/false);
  t = pad_each(t, [](char32_t c) { return c == U'?' || c == U'!'; });
  t = closing_single_quote(t);
  t = pad_each(t, [](char32_t c) { return c == U'*'; });

  // Brackets and double dashes.
  t = pad_each(t, [](char32_t c) { return in(c, U"][(){}<>"); });
  t = pad_literal(t, U"--");

  t = U" " + t + U" ";

  // Ending quotes.
  t = pad_each(t, [](char32_t c) { return c == 0xBB || c == 0x201D || c == 0x2019; });
  t = pad_literal(t, U"''");
  {
    std::u32string q;
    q.reserve(t.size() + 8);
    for (char32_t c : t) {
      if (c == U'"') q += U" '' ";
      else q += c;
    }
    t = std::move(q);
  }
  t = collapse_space(t);
  t = clitics(t);
  t = long_clitics(t);

  // Contractions.
  t = split_compound(t, "can", "not");
  t = split_compound(t, "d", "'ye");
  t = split_compound(t, "gim", "me");
  t = split_compound(t, "gon", "na");
  t = split_compound(t, "got", "ta");
  t = split_compound(t, "lem", "me");
  t = split_compound(t, "more", "'n");
  t = split_compound(t, "wan", "na", /*space_after=*/true);
  t = split_t_prefix(t, "is");
  t = split_t_prefix(t, "was");

  std::vector<std::u32string> tokens;
  std::size_t i = 0;
  while (i < t.size()) {
    while (i < t.size() && unicode::is_space(t[i])) ++i;
    const std::size_t start = i;
    while (i < t.size() && !unicode::is_space(t[i])) ++i;
    if (i > start) tokens.emplace_back(t.substr(start, i - start));
  }
  return tokens;
}

}  // namespace spgc::treebank
