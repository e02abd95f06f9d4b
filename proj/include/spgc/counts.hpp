#pragma once

// The "counts" level: word-type occurrence counts per book.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spgc/error.hpp"
#include "spgc/io.hpp"

namespace spgc::counts {

struct CountsTable {
  std::optional<BookId> book;  // empty for merged tables
  std::map<std::string, std::uint64_t> entries;
  std::uint64_t total_tokens = 0;

  bool operator==(const CountsTable&) const = default;
};

template <typename Range>
CountsTable count_tokens(const Range& tokens, std::optional<BookId> book = std::nullopt) {
  std::unordered_map<std::string_view, std::uint64_t> tally;
  std::uint64_t total = 0;
  for (const auto& tok : tokens) {
    ++tally[std::string_view(tok)];
    ++total;
  }
  CountsTable table;
  table.book = book;
  table.total_tokens = total;
  for (const auto& [word, n] : tally) table.entries.emplace(word, n);
  return table;
}

/// Entries in file order: count descending, then word ascending by bytes.
inline std::vector<std::pair<std::string_view, std::uint64_t>> sorted_entries(const CountsTable& t) {
  std::vector<std::pair<std::string_view, std::uint64_t>> v(t.entries.begin(), t.entries.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return v;
}

inline std::string serialize_counts(const CountsTable& t) {
  std::string out;
  for (const auto& [word, n] : sorted_entries(t)) {
    out += word;
    out += '\t';
    out += std::to_string(n);
    out += '\n';
  }
  return out;
}

enum class ReadMode { Strict, Lenient };

/// Lenient mode accepts any line order; both modes reject malformed lines,
/// non-positive counts and repeated words.
inline CountsTable parse_counts(std::string_view data, ReadMode mode = ReadMode::Strict,
                                std::optional<BookId> book = std::nullopt) {
  CountsTable t;
  t.book = book;
  if (data.empty()) return t;
  if (data.back() != '\n') {
    if (mode == ReadMode::Strict) throw MalformedCountsFile("missing trailing newline");
  } else {
    data.remove_suffix(1);
  }
  std::size_t lineno = 0;
  std::string_view prev_word;
  std::uint64_t prev_count = 0;
  for (auto line : split_view(data, '\n')) {
    ++lineno;
    const auto where = " on line " + std::to_string(lineno);
    if (mode == ReadMode::Lenient && !line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || line.find('\t', tab + 1) != std::string_view::npos)
      throw MalformedCountsFile("expected word<TAB>count" + where);
    const auto word = line.substr(0, tab);
    const auto num = line.substr(tab + 1);
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty())
      throw MalformedCountsFile("bad count" + where);
    if (n == 0) throw MalformedCountsFile("non-positive count" + where);
    if (mode == ReadMode::Strict && lineno > 1) {
      const bool ordered = n < prev_count || (n == prev_count && prev_word < word);
      if (!ordered) throw MalformedCountsFile("lines out of order" + where);
    }
    if (!t.entries.emplace(word, n).second) throw MalformedCountsFile("repeated word" + where);
    t.total_tokens += n;
    prev_word = word;
    prev_count = n;
  }
  return t;
}

inline fs::path write_counts(const CountsTable& t, const fs::path& store) {
  if (!t.book) throw Error("cannot write a merged counts table as a book artifact");
  const auto path = artifact_path(store, "counts", *t.book);
  write_file_atomic(path, serialize_counts(t));
  return path;
}

inline CountsTable read_counts(const fs::path& path, ReadMode mode = ReadMode::Strict,
                               std::optional<BookId> book = std::nullopt) {
  try {
    return parse_counts(read_file(path), mode, book);
  } catch (const MalformedCountsFile& e) {
    throw MalformedCountsFile(path.string() + ": " + e.what());
  }
}

inline void merge_into(CountsTable& acc, const CountsTable& t) {
  for (const auto& [word, n] : t.entries) acc.entries[word] += n;
  acc.total_tokens += t.total_tokens;
}

inline CountsTable merge_counts(const std::vector<CountsTable>& tables) {
  CountsTable acc;
  for (const auto& t : tables) merge_into(acc, t);
  return acc;
}

}  // namespace spgc::counts
