#pragma once

// UTF-8 coding and the character predicates the text pipeline relies on.
// Predicates follow Python's str/re semantics (isalpha, \w, \d, \s, ...),
// since the tokenizer is pinned to fixtures produced by a Python reference.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spgc/detail/unicode_tables.hpp"

namespace spgc::unicode {

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at byte " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {

inline bool in_ranges(std::span<const CodeRange> table, char32_t c) {
  auto it = std::upper_bound(table.begin(), table.end(), c,
                             [](char32_t v, const CodeRange& r) { return v < r.lo; });
  if (it == table.begin()) return false;
  --it;
  return c <= it->hi;
}

// Decodes one scalar value starting at s[i]; returns nullopt on malformed input.
// Rejects overlong forms, surrogates and values above U+10FFFF.
inline std::optional<char32_t> decode_one(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return std::nullopt;
  }
  if (i + len > s.size()) return std::nullopt;
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
  i += len;
  return cp;
}

}  // namespace detail

/// Byte offset of the first invalid sequence, or nullopt if `bytes` is valid UTF-8.
inline std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    // ASCII fast path.
    if (static_cast<unsigned char>(bytes[i]) < 0x80) {
      ++i;
      continue;
    }
    const std::size_t at = i;
    if (!detail::decode_one(bytes, i)) return at;
  }
  return std::nullopt;
}

inline bool is_valid_utf8(std::string_view bytes) { return !find_invalid_utf8(bytes); }

inline std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) {
    const std::size_t at = i;
    auto cp = detail::decode_one(utf8, i);
    if (!cp) throw DecodeError(at, "invalid UTF-8");
    out.push_back(*cp);
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

inline std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) append_utf8(out, c);
  return out;
}

// str.isalpha(): letter categories Lu, Ll, Lt, Lm, Lo.
inline bool is_alpha(char32_t c) {
  if (c < 0x80) return (c | 0x20) >= 'a' && (c | 0x20) <= 'z';
  return detail::in_ranges(detail::kAlpha, c);
}

// re `\w` in str patterns: alphanumeric or underscore.
inline bool is_word(char32_t c) {
  if (c < 0x80)
    return ((c | 0x20) >= 'a' && (c | 0x20) <= 'z') || (c >= '0' && c <= '9') || c == '_';
  return detail::in_ranges(detail::kWord, c);
}

// re `\d`: decimal digits (category Nd).
inline bool is_decimal(char32_t c) {
  if (c < 0x80) return c >= '0' && c <= '9';
  return detail::in_ranges(detail::kDecimal, c);
}

// re `\s` and str.isspace().
inline bool is_space(char32_t c) {
  if (c < 0x80) return c == ' ' || (c >= 0x09 && c <= 0x0D) || (c >= 0x1C && c <= 0x1F);
  return detail::in_ranges(detail::kSpace, c);
}

inline bool is_upper(char32_t c) {
  if (c < 0x80) return c >= 'A' && c <= 'Z';
  return detail::in_ranges(detail::kUpper, c);
}

inline bool is_lower(char32_t c) {
  if (c < 0x80) return c >= 'a' && c <= 'z';
  return detail::in_ranges(detail::kLower, c);
}

/// Simple (single code point, locale-independent) lowercase mapping.
inline char32_t to_lower(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
  const auto& map = detail::kLowerMap;
  auto it = std::lower_bound(std::begin(map), std::end(map), c,
                             [](const detail::CaseMapping& m, char32_t v) { return m.from < v; });
  return (it != std::end(map) && it->from == c) ? it->to : c;
}

inline std::u32string to_lower(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = to_lower(c);
  return out;
}

/// Python's full str.lower(): identical to the simple mapping except for
/// U+0130, which lowercases to "i" followed by U+0307.
inline std::u32string python_lower(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (c == 0x130) {
      out.push_back(U'i');
      out.push_back(0x307);
    } else {
      out.push_back(to_lower(c));
    }
  }
  return out;
}

/// Case-insensitive match of `c` against the ASCII letter `letter`, as Python's
/// re IGNORECASE does it (including the K/k/KELVIN SIGN style equivalences).
inline bool ieq_ascii(char32_t c, char letter) {
  const char32_t l = static_cast<char32_t>(letter | 0x20);
  if (c < 0x80) return (c | 0x20) == l && ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'));
  switch (l) {
    case U'i': return c == 0x130 || c == 0x131;
    case U'k': return c == 0x212A;
    case U's': return c == 0x17F;
    default: return false;
  }
}

/// Python str.splitlines() on already-decoded text.
inline bool is_line_break(char32_t c) {
  switch (c) {
    case U'\n': case U'\r': case 0x0B: case 0x0C: case 0x1C: case 0x1D: case 0x1E:
    case 0x85: case 0x2028: case 0x2029:
      return true;
    default:
      return false;
  }
}

inline std::u32string_view strip(std::u32string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace spgc::unicode
