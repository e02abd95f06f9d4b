#pragma once

// Jensen-Shannon divergence between word distributions, and the label,
// author and time experiments built on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "spgc/catalog.hpp"
#include "spgc/counts.hpp"
#include "spgc/error.hpp"
#include "spgc/io.hpp"
#include "spgc/parallel.hpp"
#include "spgc/random.hpp"

namespace spgc::divergence {

/// Normalized counts; words sorted bytewise, zero entries omitted.
struct WordDistribution {
  std::vector<std::string> words;
  std::vector<double> probs;

  bool operator==(const WordDistribution&) const = default;
};

inline WordDistribution to_distribution(const counts::CountsTable& t) {
  if (t.total_tokens == 0)
    throw EmptyBook("book " + (t.book ? std::to_string(*t.book) : std::string("?")) + " has no tokens");
  WordDistribution d;
  d.words.reserve(t.entries.size());
  d.probs.reserve(t.entries.size());
  const auto total = static_cast<double>(t.total_tokens);
  for (const auto& [w, n] : t.entries) {
    d.words.push_back(w);
    d.probs.push_back(static_cast<double>(n) / total);
  }
  return d;
}

namespace detail {

/// Contribution of one word type, in bits. With s = p + q and
/// d = |p - q| / s the term is s * g(d) / (4 ln 2), where
/// g(d) = (1+d) ln(1+d) + (1-d) ln(1-d). Only max/min and the sum enter, so
/// the value does not depend on argument order.
inline double jsd_term(double p, double q) {
  const double s = p + q;
  if (p == 0.0 || q == 0.0) return s / 2;
  const double hi = std::max(p, q);
  const double lo = std::min(p, q);
  const double d = (hi - lo) / s;
  double g;
  if (d < 0.25) {
    // g(d) = sum_k d^(2k) / (k (2k - 1)); avoids cancellation near d = 0.
    const double d2 = d * d;
    double power = d2;
    g = 0.0;
    for (int k = 1; k < 64; ++k) {
      const double t = power / (k * (2.0 * k - 1.0));
      g += t;
      if (t <= g * 1e-18) break;
      power *= d2;
    }
  } else {
    const double a = 2 * hi / s;
    const double b = 2 * lo / s;
    g = a * std::log(a) + b * std::log(b);
  }
  return s * g / (4 * std::numbers::ln2);
}

/// Merge over the union of two key-sorted supports, summed in key order.
template <typename Key>
double jsd_sorted(std::span<const Key> ka, std::span<const double> pa, std::span<const Key> kb,
                  std::span<const double> pb) {
  double sum = 0.0;
  bool overlap = false;
  std::size_t i = 0, j = 0;
  while (i < ka.size() || j < kb.size()) {
    if (j == kb.size() || (i < ka.size() && ka[i] < kb[j])) {
      sum += jsd_term(pa[i++], 0.0);
    } else if (i == ka.size() || kb[j] < ka[i]) {
      sum += jsd_term(0.0, pb[j++]);
    } else {
      overlap = true;
      sum += jsd_term(pa[i++], pb[j++]);
    }
  }
  if (!overlap) return 1.0;
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace detail

/// Base-2 Jensen-Shannon divergence, in [0, 1].
inline double jsd(const WordDistribution& p, const WordDistribution& q) {
  return detail::jsd_sorted<std::string>(p.words, p.probs, q.words, q.probs);
}

/// Distributions re-keyed by rank in their sorted joint vocabulary. Integer
/// keys preserve the bytewise word order, so results equal jsd() exactly.
class IndexedCorpus {
 public:
  IndexedCorpus() = default;

  explicit IndexedCorpus(const std::map<BookId, WordDistribution>& books) {
    std::vector<std::string_view> vocab;
    for (const auto& [id, d] : books) vocab.insert(vocab.end(), d.words.begin(), d.words.end());
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    for (const auto& [id, d] : books) {
      Entry e;
      e.keys.reserve(d.words.size());
      auto it = vocab.begin();
      for (const auto& w : d.words) {
        it = std::lower_bound(it, vocab.end(), std::string_view(w));
        e.keys.push_back(static_cast<std::uint32_t>(it - vocab.begin()));
      }
      e.probs = d.probs;
      entries_.emplace(id, std::move(e));
    }
  }

  bool contains(BookId id) const { return entries_.count(id) != 0; }
  std::size_t size() const { return entries_.size(); }

  double jsd(BookId a, BookId b) const {
    const auto& x = entries_.at(a);
    const auto& y = entries_.at(b);
    return detail::jsd_sorted<std::uint32_t>(x.keys, x.probs, y.keys, y.probs);
  }

 private:
  struct Entry {
    std::vector<std::uint32_t> keys;
    std::vector<double> probs;
  };
  std::map<BookId, Entry> entries_;
};

struct LoadedDistributions {
  std::map<BookId, WordDistribution> books;
  std::vector<std::pair<BookId, std::string>> excluded;
};

/// Reads `counts/PG<id>_counts.txt` for each id; missing or empty books are
/// excluded with a reason.
inline LoadedDistributions load_distributions(const fs::path& store, const std::vector<BookId>& ids,
                                              unsigned workers = 1) {
  std::vector<std::optional<WordDistribution>> slots(ids.size());
  std::vector<std::string> why(ids.size());
  parallel_for(ids.size(), workers, [&](std::size_t i) {
    const auto path = artifact_path(store, "counts", ids[i]);
    std::error_code ec;
    if (!fs::exists(path, ec)) {
      why[i] = "no counts file";
      return;
    }
    try {
      slots[i] = to_distribution(counts::read_counts(path, counts::ReadMode::Strict, ids[i]));
    } catch (const Error& e) {
      why[i] = e.what();
    }
  });
  LoadedDistributions out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (slots[i]) out.books.emplace(ids[i], std::move(*slots[i]));
    else out.excluded.emplace_back(ids[i], why[i]);
  }
  return out;
}

struct DistanceMatrix {
  std::vector<BookId> ids;
  std::vector<double> d;  // row-major, ids.size() squared

  double at(std::size_t i, std::size_t j) const { return d[i * ids.size() + j]; }
};

/// Full symmetric matrix over the ids present in `corpus`, in the given order.
inline DistanceMatrix pairwise_distances(const std::vector<BookId>& ids, const IndexedCorpus& corpus,
                                         unsigned workers = 1) {
  DistanceMatrix m;
  for (auto id : ids)
    if (corpus.contains(id)) m.ids.push_back(id);
  const std::size_t n = m.ids.size();
  m.d.assign(n * n, 0.0);
  parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) m.d[i * n + j] = corpus.jsd(m.ids[i], m.ids[j]);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.d[j * n + i] = m.d[i * n + j];
  return m;
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Header row `id <id>...`, then one row per book.
inline std::string distance_matrix_tsv(const DistanceMatrix& m) {
  std::string out = "id";
  for (auto id : m.ids) out += "\t" + std::to_string(id);
  out += "\n";
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    out += std::to_string(m.ids[i]);
    for (std::size_t j = 0; j < m.ids.size(); ++j) out += "\t" + format_real(m.at(i, j));
    out += "\n";
  }
  return out;
}

inline DistanceMatrix parse_distance_matrix(std::string_view tsv) {
  DistanceMatrix m;
  auto lines = split_view(tsv, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw MalformedSource("empty distance matrix");
  const auto header = split_view(lines[0], '\t');
  if (header.empty() || header[0] != "id") throw MalformedSource("distance matrix header must start with 'id'");
  for (std::size_t k = 1; k < header.size(); ++k) m.ids.push_back(std::stoull(std::string(header[k])));
  const std::size_t n = m.ids.size();
  if (lines.size() != n + 1) throw MalformedSource("distance matrix row count mismatch");
  m.d.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = split_view(lines[i + 1], '\t');
    if (f.size() != n + 1 || std::stoull(std::string(f[0])) != m.ids[i])
      throw MalformedSource("distance matrix row " + std::to_string(i + 1) + " malformed");
    for (std::size_t j = 0; j < n; ++j) m.d[i * n + j] = std::stod(std::string(f[j + 1]));
  }
  return m;
}

// ---------------------------------------------------------------- labels

inline const std::vector<std::string>& default_label_shelves() {
  static const std::vector<std::string> shelves = {"Art", "Biographies", "Fantasy", "Philosophy", "Poetry"};
  return shelves;
}

/// Books carrying any of `shelves`, labeled with the first one listed that
/// they carry. Ascending ids.
inline std::vector<std::pair<BookId, std::string>> label_selection(const catalog::LabelCatalog& bookshelves,
                                                                   const std::vector<std::string>& shelves) {
  std::map<BookId, std::string> chosen;
  for (const auto& shelf : shelves) {
    const auto it = bookshelves.assignments.find(shelf);
    if (it == bookshelves.assignments.end()) continue;
    for (auto id : it->second) chosen.emplace(id, shelf);
  }
  return {chosen.begin(), chosen.end()};
}

inline std::string label_books_tsv(const std::vector<std::pair<BookId, std::string>>& rows) {
  std::string out = "id\tlabel\n";
  for (const auto& [id, label] : rows) out += std::to_string(id) + "\t" + label + "\n";
  return out;
}

// --------------------------------------------------------------- authors

/// Authors of the `pool` most downloaded books, ranked by their number of
/// books in `books`, then total downloads (descending), then name.
inline std::vector<std::string> select_prolific_authors(const catalog::Catalog& books, std::size_t k = 20,
                                                        std::size_t pool = 100) {
  std::vector<const catalog::BookMetadata*> ranked;
  for (const auto& [id, m] : books)
    if (m.downloads) ranked.push_back(&m);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto* a, const auto* b) { return *a->downloads > *b->downloads; });
  if (ranked.size() > pool) ranked.resize(pool);
  std::set<std::string> candidates;
  for (const auto* m : ranked)
    if (m->author_name) candidates.insert(*m->author_name);
  if (candidates.size() < k)
    throw InsufficientAuthors("only " + std::to_string(candidates.size()) + " candidate authors, " +
                              std::to_string(k) + " requested");
  struct Row {
    std::string name;
    std::size_t n_books = 0;
    std::uint64_t downloads = 0;
  };
  std::map<std::string, Row> rows;
  for (const auto& name : candidates) rows[name].name = name;
  for (const auto& [id, m] : books) {
    if (!m.author_name) continue;
    const auto it = rows.find(*m.author_name);
    if (it == rows.end()) continue;
    ++it->second.n_books;
    it->second.downloads += m.downloads.value_or(0);
  }
  std::vector<Row> order;
  for (auto& [_, r] : rows) order.push_back(r);
  std::sort(order.begin(), order.end(), [](const Row& a, const Row& b) {
    if (a.n_books != b.n_books) return a.n_books > b.n_books;
    if (a.downloads != b.downloads) return a.downloads > b.downloads;
    return a.name < b.name;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(order[i].name);
  return out;
}

struct AuthorBooks {
  std::string author;
  std::vector<BookId> books;  // ascending
};

/// Each author's books (by verbatim name) that are present in `corpus`.
inline std::vector<AuthorBooks> author_groups(const catalog::Catalog& books, const std::vector<std::string>& authors,
                                              const IndexedCorpus& corpus) {
  std::vector<AuthorBooks> groups;
  for (const auto& a : authors) {
    AuthorBooks g{a, {}};
    for (const auto& [id, m] : books)
      if (m.author_name == a && corpus.contains(id)) g.books.push_back(id);
    groups.push_back(std::move(g));
  }
  return groups;
}

using Percentiles = std::array<double, 5>;
inline constexpr std::array<double, 5> kPercentileLevels = {5, 25, 50, 75, 95};

/// Linear interpolation between order statistics at rank (n - 1) * q / 100.
inline double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

inline Percentiles summarize(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Percentiles p{};
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = percentile(values, kPercentileLevels[k]);
  return p;
}

struct AuthorSummary {
  std::string author;
  std::size_t n_books = 0;
  Percentiles same{};
  Percentiles cross{};
};

struct AuthorExperimentResult {
  std::vector<AuthorSummary> authors;
  std::vector<std::pair<std::string, std::string>> skipped;
  std::uint64_t seed = 0;
  std::size_t n_pairs = 0;
};

/// Sampling order, one Rng(seed) stream: authors with >= 2 books are taken
/// in the given order; for each, n_pairs same-author pairs
/// (i = U(n), j = U(n - 1), j += j >= i) and then n_pairs cross pairs
/// (i = U(n), j = U(m)) where the m "other" books are the remaining
/// authors' books concatenated in author order. Distances are evaluated
/// after all draws.
inline AuthorExperimentResult author_experiment(const std::vector<AuthorBooks>& groups, const IndexedCorpus& corpus,
                                                std::size_t n_pairs, std::uint64_t seed, unsigned workers = 1) {
  AuthorExperimentResult result;
  result.seed = seed;
  result.n_pairs = n_pairs;
  std::vector<const AuthorBooks*> active;
  for (const auto& g : groups) {
    if (g.books.size() < 2) result.skipped.emplace_back(g.author, "fewer than 2 books with counts");
    else active.push_back(&g);
  }
  if (active.size() < 2) throw InsufficientAuthors("author experiment needs at least 2 authors with >= 2 books");

  Rng rng(seed);
  struct Draw {
    BookId a, b;
  };
  std::vector<Draw> draws;
  draws.reserve(active.size() * n_pairs * 2);
  for (std::size_t ai = 0; ai < active.size(); ++ai) {
    const auto& own = active[ai]->books;
    std::vector<BookId> others;
    for (std::size_t bi = 0; bi < active.size(); ++bi)
      if (bi != ai) others.insert(others.end(), active[bi]->books.begin(), active[bi]->books.end());
    for (std::size_t k = 0; k < n_pairs; ++k) {
      const auto i = rng.below(own.size());
      auto j = rng.below(own.size() - 1);
      if (j >= i) ++j;
      draws.push_back({own[i], own[j]});
    }
    for (std::size_t k = 0; k < n_pairs; ++k) {
      const auto i = rng.below(own.size());
      const auto j = rng.below(others.size());
      draws.push_back({own[i], others[j]});
    }
  }
  std::vector<double> dist(draws.size());
  parallel_for(draws.size(), workers, [&](std::size_t i) { dist[i] = corpus.jsd(draws[i].a, draws[i].b); });

  for (std::size_t ai = 0; ai < active.size(); ++ai) {
    const auto base = dist.begin() + static_cast<std::ptrdiff_t>(ai * 2 * n_pairs);
    AuthorSummary s;
    s.author = active[ai]->author;
    s.n_books = active[ai]->books.size();
    s.same = summarize({base, base + static_cast<std::ptrdiff_t>(n_pairs)});
    s.cross = summarize({base + static_cast<std::ptrdiff_t>(n_pairs), base + static_cast<std::ptrdiff_t>(2 * n_pairs)});
    result.authors.push_back(std::move(s));
  }
  return result;
}

inline std::string author_experiment_tsv(const AuthorExperimentResult& r) {
  std::string out = "# seed=" + std::to_string(r.seed) + "\tn_pairs=" + std::to_string(r.n_pairs) + "\n";
  out += "author\tn_books";
  for (const char* kind : {"same", "cross"})
    for (double q : kPercentileLevels) out += std::string("\t") + kind + "_p" + std::to_string(static_cast<int>(q));
  out += "\n";
  for (const auto& a : r.authors) {
    out += catalog::detail::tsv_field(a.author) + "\t" + std::to_string(a.n_books);
    for (double v : a.same) out += "\t" + format_real(v);
    for (double v : a.cross) out += "\t" + format_real(v);
    out += "\n";
  }
  return out;
}

// ------------------------------------------------------------------ time

struct Window {
  int start = 0;  // inclusive
  int end = 0;    // exclusive
  bool operator==(const Window&) const = default;
};

inline std::vector<Window> default_windows() {
  std::vector<Window> w;
  for (int t = 1800; t < 2000; t += 20) w.push_back({t, t + 20});
  return w;
}

/// Books whose compatible-year interval intersects each window (ascending ids).
inline std::vector<std::vector<BookId>> window_members(const catalog::Catalog& books, const std::vector<Window>& windows,
                                                       const IndexedCorpus& corpus) {
  std::vector<std::vector<BookId>> members(windows.size());
  for (const auto& [id, m] : books) {
    if (!corpus.contains(id)) continue;
    const auto years = catalog::compatible_years(m);
    if (!years) continue;
    for (std::size_t w = 0; w < windows.size(); ++w)
      if (years->first < windows[w].end && years->second >= windows[w].start) members[w].push_back(id);
  }
  return members;
}

struct WindowPairResult {
  Window a, b;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_pairs = 0;
};

struct TimeExperimentResult {
  std::vector<WindowPairResult> pairs;
  std::vector<std::pair<Window, Window>> skipped;  // a window had no books
  std::vector<std::size_t> window_sizes;
  std::uint64_t seed = 0;
  std::size_t n_pairs = 0;
};

/// Sampling order, one Rng(seed) stream: window pairs (i, j) with i <= j in
/// index order; for each non-empty pair, n_pairs draws of
/// (U(|W_i|), U(|W_j|)). Both books are drawn independently, so a pair may
/// repeat a book.
inline TimeExperimentResult time_experiment(const std::vector<Window>& windows,
                                            const std::vector<std::vector<BookId>>& members,
                                            const IndexedCorpus& corpus, std::size_t n_pairs, std::uint64_t seed,
                                            unsigned workers = 1) {
  TimeExperimentResult r;
  r.seed = seed;
  r.n_pairs = n_pairs;
  for (const auto& m : members) r.window_sizes.push_back(m.size());
  Rng rng(seed);
  struct Draw {
    BookId a, b;
  };
  std::vector<Draw> draws;
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = i; j < windows.size(); ++j) {
      if (members[i].empty() || members[j].empty()) {
        r.skipped.emplace_back(windows[i], windows[j]);
        continue;
      }
      kept.emplace_back(i, j);
      for (std::size_t k = 0; k < n_pairs; ++k) {
        const auto a = rng.below(members[i].size());
        const auto b = rng.below(members[j].size());
        draws.push_back({members[i][a], members[j][b]});
      }
    }
  }
  std::vector<double> dist(draws.size());
  parallel_for(draws.size(), workers, [&](std::size_t i) { dist[i] = corpus.jsd(draws[i].a, draws[i].b); });
  for (std::size_t p = 0; p < kept.size(); ++p) {
    const auto first = dist.begin() + static_cast<std::ptrdiff_t>(p * n_pairs);
    WindowPairResult w;
    w.a = windows[kept[p].first];
    w.b = windows[kept[p].second];
    w.n_pairs = n_pairs;
    double sum = 0.0;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(n_pairs); ++it) sum += *it;
    w.mean = n_pairs ? sum / static_cast<double>(n_pairs) : 0.0;
    if (n_pairs > 1) {
      double ss = 0.0;
      for (auto it = first; it != first + static_cast<std::ptrdiff_t>(n_pairs); ++it) ss += (*it - w.mean) * (*it - w.mean);
      w.std_error = std::sqrt(ss / static_cast<double>(n_pairs - 1)) / std::sqrt(static_cast<double>(n_pairs));
    }
    r.pairs.push_back(w);
  }
  return r;
}

inline std::string time_experiment_tsv(const TimeExperimentResult& r) {
  std::string out = "# seed=" + std::to_string(r.seed) + "\tn_pairs=" + std::to_string(r.n_pairs) + "\n";
  out += "window_a\twindow_b\tmean_jsd\tstderr\tn_pairs\n";
  for (const auto& p : r.pairs)
    out += std::to_string(p.a.start) + "\t" + std::to_string(p.b.start) + "\t" + format_real(p.mean) + "\t" +
           format_real(p.std_error) + "\t" + std::to_string(p.n_pairs) + "\n";
  return out;
}

}  // namespace spgc::divergence
