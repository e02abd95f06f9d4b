#pragma once

// Corpus description: length distribution, publication-year proxy, language
// composition and label histograms, plus their TSV exports.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spgc/catalog.hpp"
#include "spgc/io.hpp"

namespace spgc::stats {

using catalog::compatible_years;

struct LengthCcdf {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> points;  // (m, books longer than m)
};

/// Thresholds: 10^(k/per_decade) rounded down, up to the longest book, plus
/// every observed length.
inline LengthCcdf length_ccdf(std::vector<std::uint64_t> lengths, int per_decade = 10) {
  LengthCcdf out;
  if (lengths.empty()) return out;
  std::sort(lengths.begin(), lengths.end());
  std::vector<std::uint64_t> thresholds(lengths.begin(), lengths.end());
  const double top = static_cast<double>(lengths.back());
  for (int k = 0;; ++k) {
    const double m = std::floor(std::pow(10.0, static_cast<double>(k) / per_decade));
    if (m > top) break;
    thresholds.push_back(static_cast<std::uint64_t>(m));
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  for (auto m : thresholds) {
    const auto longer = lengths.end() - std::upper_bound(lengths.begin(), lengths.end(), m);
    out.points.emplace_back(m, static_cast<std::uint64_t>(longer));
  }
  return out;
}

struct YearSeries {
  std::map<int, std::uint64_t> points;
};

/// Books whose compatible-year interval contains t, for every t in [first, last].
inline YearSeries books_per_year(const catalog::Catalog& books, int first = 1700, int last = 2000) {
  YearSeries out;
  if (first > last) return out;
  std::vector<std::int64_t> delta(static_cast<std::size_t>(last - first) + 2, 0);
  for (const auto& [id, m] : books) {
    const auto years = compatible_years(m);
    if (!years) continue;
    const int lo = std::max(years->first, first);
    const int hi = std::min(years->second, last);
    if (lo > hi) continue;
    ++delta[static_cast<std::size_t>(lo - first)];
    --delta[static_cast<std::size_t>(hi - first) + 1];
  }
  std::int64_t running = 0;
  for (int t = first; t <= last; ++t) {
    running += delta[static_cast<std::size_t>(t - first)];
    out.points[t] = static_cast<std::uint64_t>(running);
  }
  return out;
}

struct LanguageShare {
  std::uint64_t n_books = 0;
  std::uint64_t n_tokens = 0;
  bool operator==(const LanguageShare&) const = default;
};

using LanguageComposition = std::map<std::string, LanguageShare>;

/// Each book counts once, under its first listed language. `tokens` maps
/// book ids to counts totals; books without counts contribute 0 tokens.
inline LanguageComposition language_composition(const catalog::Catalog& books,
                                                const std::map<BookId, std::uint64_t>& tokens = {}) {
  LanguageComposition out;
  for (const auto& [id, m] : books) {
    if (m.languages.empty()) continue;
    auto& share = out[m.languages.front()];
    ++share.n_books;
    if (const auto it = tokens.find(id); it != tokens.end()) share.n_tokens += it->second;
  }
  return out;
}

inline double language_book_share(const LanguageComposition& c, const std::string& code) {
  std::uint64_t total = 0;
  for (const auto& [_, s] : c) total += s.n_books;
  const auto it = c.find(code);
  return total == 0 || it == c.end() ? 0.0 : static_cast<double>(it->second.n_books) / static_cast<double>(total);
}

struct LabelHistograms {
  std::map<std::string, std::uint64_t> books_per_label;
  std::map<std::uint64_t, std::uint64_t> labels_with_n_books;  // n -> number of labels
  std::map<std::uint64_t, double> labels_per_book;             // k -> fraction of labeled books
  std::uint64_t labeled_books = 0;
  std::uint64_t catalog_books = 0;
  double unlabeled_fraction = 0.0;  // over all catalog books
};

/// Both histograms count only books present in `books`.
inline LabelHistograms label_histograms(const catalog::LabelCatalog& labels, const catalog::Catalog& books) {
  LabelHistograms h;
  std::map<BookId, std::uint64_t> per_book;
  for (const auto& [label, ids] : labels.assignments) {
    std::uint64_t n = 0;
    for (auto id : ids) {
      if (!books.count(id)) continue;
      ++n;
      ++per_book[id];
    }
    if (n == 0) continue;
    h.books_per_label[label] = n;
    ++h.labels_with_n_books[n];
  }
  h.catalog_books = books.size();
  h.labeled_books = per_book.size();
  std::map<std::uint64_t, std::uint64_t> k_counts;
  for (const auto& [id, k] : per_book) ++k_counts[k];
  for (const auto& [k, n] : k_counts)
    h.labels_per_book[k] = static_cast<double>(n) / static_cast<double>(h.labeled_books);
  if (h.catalog_books > 0)
    h.unlabeled_fraction =
        static_cast<double>(h.catalog_books - h.labeled_books) / static_cast<double>(h.catalog_books);
  return h;
}

/// Fraction of labeled books carrying at least `k` labels.
inline double fraction_with_at_least(const LabelHistograms& h, std::uint64_t k) {
  double f = 0.0;
  for (const auto& [n, frac] : h.labels_per_book)
    if (n >= k) f += frac;
  return f;
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string length_ccdf_tsv(const LengthCcdf& c) {
  std::string out = "m\tn_books\n";
  for (const auto& [m, n] : c.points) out += std::to_string(m) + "\t" + std::to_string(n) + "\n";
  return out;
}

inline std::string books_per_year_tsv(const YearSeries& s) {
  std::string out = "year\tn_books\n";
  for (const auto& [t, n] : s.points) out += std::to_string(t) + "\t" + std::to_string(n) + "\n";
  return out;
}

/// Rows by descending book count, then language code.
inline std::string language_tsv(const LanguageComposition& c) {
  std::vector<std::pair<std::string, LanguageShare>> rows(c.begin(), c.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second.n_books > b.second.n_books; });
  std::string out = "language\tn_books\tn_tokens\n";
  for (const auto& [code, s] : rows)
    out += code + "\t" + std::to_string(s.n_books) + "\t" + std::to_string(s.n_tokens) + "\n";
  return out;
}

/// Long format: `histogram key value`.
inline std::string labels_tsv(const LabelHistograms& h) {
  std::string out = "histogram\tkey\tvalue\n";
  for (const auto& [label, n] : h.books_per_label)
    out += "books_per_label\t" + catalog::detail::tsv_field(label) + "\t" + std::to_string(n) + "\n";
  for (const auto& [n, labels] : h.labels_with_n_books)
    out += "labels_with_n_books\t" + std::to_string(n) + "\t" + std::to_string(labels) + "\n";
  for (const auto& [k, frac] : h.labels_per_book)
    out += "labels_per_book\t" + std::to_string(k) + "\t" + format_real(frac) + "\n";
  out += "summary\tlabeled_books\t" + std::to_string(h.labeled_books) + "\n";
  out += "summary\tcatalog_books\t" + std::to_string(h.catalog_books) + "\n";
  out += "summary\tunlabeled_fraction\t" + format_real(h.unlabeled_fraction) + "\n";
  return out;
}

}  // namespace spgc::stats
