#pragma once

// Removal of Project Gutenberg boilerplate: produces the "text" level from a
// raw file. The line scan reproduces the long-standing marker-based stripper
// used by the published corpus, including its two quirks: the header scan
// limit and the footer gate count *retained* lines, not input lines.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spgc/detail/embedded_data.hpp"
#include "spgc/error.hpp"
#include "spgc/io.hpp"

namespace spgc::cleanup {

struct MarkerSet {
  std::vector<std::string> text_start;
  std::vector<std::string> text_end;
  std::vector<std::string> legalese_start;
  std::vector<std::string> legalese_end;
  // A start marker resets the output only while at most this many lines have
  // been retained.
  std::size_t header_scan_limit = 600;
  // End markers are honored only once this many lines have been retained.
  std::size_t footer_min_lines = 100;
  int version = 0;

  bool operator==(const MarkerSet&) const = default;
};

/// Parses the sectioned marker file format (see data/markers.ini).
inline MarkerSet parse_markers(std::string_view text) {
  MarkerSet set;
  std::vector<std::string>* list = nullptr;
  bool in_settings = false;
  std::size_t lineno = 0;
  for (std::string_view line : split_view(text, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      const auto name = line.substr(1, line.size() - 2);
      in_settings = false;
      list = nullptr;
      if (name == "settings") in_settings = true;
      else if (name == "text_start") list = &set.text_start;
      else if (name == "text_end") list = &set.text_end;
      else if (name == "legalese_start") list = &set.legalese_start;
      else if (name == "legalese_end") list = &set.legalese_end;
      else throw MalformedMarkerFile("unknown section [" + std::string(name) + "] on line " +
                                     std::to_string(lineno));
      continue;
    }
    if (in_settings) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw MalformedMarkerFile("expected key = value on line " + std::to_string(lineno));
      const auto key = trim_ascii(line.substr(0, eq));
      const auto val = trim_ascii(line.substr(eq + 1));
      long long n = 0;
      auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), n);
      if (ec != std::errc() || ptr != val.data() + val.size() || n < 0)
        throw MalformedMarkerFile("bad integer on line " + std::to_string(lineno));
      if (key == "header_scan_limit") set.header_scan_limit = static_cast<std::size_t>(n);
      else if (key == "footer_min_lines") set.footer_min_lines = static_cast<std::size_t>(n);
      else if (key == "version") set.version = static_cast<int>(n);
      else throw MalformedMarkerFile("unknown setting '" + std::string(key) + "'");
      continue;
    }
    if (!list) throw MalformedMarkerFile("marker outside a section on line " + std::to_string(lineno));
    list->emplace_back(line);
  }
  if (set.header_scan_limit == 0) throw MalformedMarkerFile("header_scan_limit must be positive");
  return set;
}

inline MarkerSet load_markers(const fs::path& path) { return parse_markers(read_file(path)); }

inline const MarkerSet& default_markers() {
  static const MarkerSet set = parse_markers(detail::kMarkersIni);
  return set;
}

/// Splits decoded text into lines the way Python's str.splitlines() does
/// (\n, \r, \r\n, \v, \f, \x1c-\x1e, U+0085, U+2028, U+2029).
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t brk = 0;
    if (c == '\r') {
      brk = (i + 1 < n && text[i + 1] == '\n') ? 2 : 1;
    } else if (c == '\n' || c == 0x0B || c == 0x0C || (c >= 0x1C && c <= 0x1E)) {
      brk = 1;
    } else if (c == 0xC2 && i + 1 < n && static_cast<unsigned char>(text[i + 1]) == 0x85) {
      brk = 2;
    } else if (c == 0xE2 && i + 2 < n && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
               (static_cast<unsigned char>(text[i + 2]) == 0xA8 ||
                static_cast<unsigned char>(text[i + 2]) == 0xA9)) {
      brk = 3;
    }
    if (brk) {
      lines.push_back(text.substr(start, i - start));
      i += brk;
      start = i;
    } else {
      ++i;
    }
  }
  if (start < n) lines.push_back(text.substr(start));
  return lines;
}

namespace detail {

inline bool starts_with_any(std::string_view line, const std::vector<std::string>& markers) {
  return std::any_of(markers.begin(), markers.end(),
                     [&](const std::string& m) { return line.starts_with(m); });
}

}  // namespace detail

/// Drops header, footer and legalese lines. The result is always an
/// order-preserving selection of the input lines.
template <typename Line>
std::vector<Line> strip_headers(const std::vector<Line>& lines, const MarkerSet& markers) {
  std::vector<Line> out;
  std::size_t retained = 0;
  bool ignore_section = false;
  for (const Line& line : lines) {
    const std::string_view view(line);
    if (retained <= markers.header_scan_limit &&
        detail::starts_with_any(view, markers.text_start)) {
      out.clear();
      continue;
    }
    if (retained >= markers.footer_min_lines && detail::starts_with_any(view, markers.text_end))
      break;
    if (detail::starts_with_any(view, markers.legalese_start)) {
      ignore_section = true;
      continue;
    }
    if (detail::starts_with_any(view, markers.legalese_end)) {
      ignore_section = false;
      continue;
    }
    if (!ignore_section) {
      out.push_back(line);
      ++retained;
    }
  }
  return out;
}

/// Whole-file form: split, strip, and rejoin with "\n" (no trailing newline).
inline std::string strip_text(std::string_view raw, const MarkerSet& markers = default_markers()) {
  const auto kept = strip_headers(split_lines(raw), markers);
  std::string out;
  std::size_t total = kept.empty() ? 0 : kept.size() - 1;
  for (auto l : kept) total += l.size();
  out.reserve(total);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i) out += '\n';
    out += kept[i];
  }
  return out;
}

inline bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

struct CleanResult {
  BookId id = 0;
  fs::path text_path;
  bool empty_after_clean = false;
};

/// raw/PG<id>_raw.txt -> text/PG<id>_text.txt under `store`.
inline CleanResult clean_book(const fs::path& raw_path, BookId id, const fs::path& store,
                              const MarkerSet& markers = default_markers()) {
  const std::string raw = read_file(raw_path);
  const std::string text = strip_text(raw, markers);
  CleanResult result;
  result.id = id;
  result.text_path = artifact_path(store, "text", id);
  result.empty_after_clean = is_blank(text);
  write_file_atomic(result.text_path, text);
  return result;
}

}  // namespace spgc::cleanup
