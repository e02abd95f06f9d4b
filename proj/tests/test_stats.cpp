#include <gtest/gtest.h>

#include <random>

#include "spgc/stats.hpp"

namespace {

using namespace spgc;
using namespace spgc::stats;

catalog::BookMetadata book(BookId id, std::optional<int> b, std::optional<int> d, std::vector<std::string> langs = {"en"}) {
  catalog::BookMetadata m;
  m.id = id;
  m.author_birth_year = b;
  m.author_death_year = d;
  m.languages = std::move(langs);
  return m;
}

TEST(Stats, LengthCcdfExamples) {
  EXPECT_TRUE(length_ccdf({}).points.empty());
  const auto c = length_ccdf({5, 50});
  const auto at = [&](std::uint64_t m) {
    for (auto [x, n] : c.points)
      if (x == m) return n;
    return std::uint64_t(999);
  };
  EXPECT_EQ(at(10), 1u);
  EXPECT_EQ(at(5), 1u);
  EXPECT_EQ(at(50), 0u);
  EXPECT_EQ(at(1), 2u);
}

TEST(Stats, LengthCcdfMatchesBruteForce) {
  std::mt19937_64 rng(8);
  std::vector<std::uint64_t> lengths;
  for (int i = 0; i < 100; ++i) lengths.push_back(static_cast<std::uint64_t>(std::exp(std::uniform_real_distribution<>(0, 13)(rng))));
  const auto c = length_ccdf(lengths);
  std::uint64_t prev = lengths.size();
  for (auto [m, n] : c.points) {
    std::uint64_t brute = 0;
    for (auto l : lengths) brute += l > m;
    EXPECT_EQ(n, brute) << m;
    EXPECT_LE(n, prev);
    prev = n;
  }
  for (auto l : lengths)
    EXPECT_TRUE(std::any_of(c.points.begin(), c.points.end(), [&](auto p) { return p.first == l; }));
  // 10 thresholds per decade are present.
  EXPECT_TRUE(std::any_of(c.points.begin(), c.points.end(), [](auto p) { return p.first == 1000; }));
  EXPECT_TRUE(std::any_of(c.points.begin(), c.points.end(), [](auto p) { return p.first == 1258; }));
}

TEST(Stats, CompatibleYears) {
  EXPECT_EQ(compatible_years(book(1, 1860, 1910)), (std::pair{1881, 1909}));
  EXPECT_FALSE(compatible_years(book(1, std::nullopt, 1910)));
  EXPECT_FALSE(compatible_years(book(1, 1900, 1915)));
}

TEST(Stats, BooksPerYear) {
  catalog::Catalog one{{1, book(1, 1860, 1910)}};
  const auto s = books_per_year(one);
  EXPECT_EQ(s.points.size(), 301u);
  for (const auto& [t, n] : s.points) EXPECT_EQ(n, (t >= 1881 && t <= 1909) ? 1u : 0u) << t;
  one[2] = book(2, 1850, 1900);  // 1871..1899
  const auto s2 = books_per_year(one);
  EXPECT_EQ(s2.points.at(1885), 2u);
  EXPECT_EQ(s2.points.at(1889), 2u);
  EXPECT_EQ(s2.points.at(1900), 1u);
  EXPECT_EQ(s2.points.at(1875), 1u);
}

TEST(Stats, BooksPerYearMatchesNestedLoop) {
  std::mt19937_64 rng(5);
  catalog::Catalog books;
  for (BookId id = 1; id <= 50; ++id) {
    std::optional<int> b, d;
    if (rng() % 5) b = 1600 + static_cast<int>(rng() % 380);
    if (rng() % 5) d = b.value_or(1650) + static_cast<int>(rng() % 100);
    books[id] = book(id, b, d);
  }
  const auto s = books_per_year(books, 1650, 2050);
  for (const auto& [t, n] : s.points) {
    std::uint64_t brute = 0;
    for (const auto& [id, m] : books)
      if (m.author_birth_year && m.author_death_year && *m.author_birth_year + 20 < t && t < *m.author_death_year) ++brute;
    EXPECT_EQ(n, brute) << t;
    EXPECT_LE(n, books.size());
  }
}

TEST(Stats, LanguageComposition) {
  catalog::Catalog books{{1, book(1, {}, {}, {"en"})}, {2, book(2, {}, {}, {"en"})}, {3, book(3, {}, {}, {"fi", "sv"})},
                         {4, book(4, {}, {}, {})}};
  const auto c = language_composition(books, {{1, 10}, {2, 20}, {3, 7}, {4, 100}});
  EXPECT_EQ(c.at("en"), (LanguageShare{2, 30}));
  EXPECT_EQ(c.at("fi"), (LanguageShare{1, 7}));
  EXPECT_FALSE(c.count("sv"));
  EXPECT_DOUBLE_EQ(language_book_share(c, "en"), 2.0 / 3.0);
  EXPECT_EQ(language_tsv(c), "language\tn_books\tn_tokens\nen\t2\t30\nfi\t1\t7\n");
}

TEST(Stats, LabelHistograms) {
  catalog::Catalog books{{1, book(1, {}, {})}, {2, book(2, {}, {})}, {3, book(3, {}, {})}, {4, book(4, {}, {})}};
  catalog::LabelCatalog one;
  one.assignments = {{"L", {1, 2, 3}}};
  auto h = label_histograms(one, books);
  EXPECT_EQ(h.books_per_label, (std::map<std::string, std::uint64_t>{{"L", 3}}));
  EXPECT_EQ(h.labels_per_book, (std::map<std::uint64_t, double>{{1, 1.0}}));
  EXPECT_DOUBLE_EQ(h.unlabeled_fraction, 0.25);

  catalog::LabelCatalog two;
  two.kind = catalog::LabelKind::Subject;
  two.assignments = {{"A", {1}}, {"B", {1, 2}}, {"Ghost", {999}}};
  h = label_histograms(two, books);
  EXPECT_EQ(h.labels_per_book, (std::map<std::uint64_t, double>{{1, 0.5}, {2, 0.5}}));
  EXPECT_FALSE(h.books_per_label.count("Ghost"));
  EXPECT_DOUBLE_EQ(fraction_with_at_least(h, 2), 0.5);
  EXPECT_EQ(h.labels_with_n_books, (std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 1}}));
  EXPECT_EQ(labels_tsv(h),
            "histogram\tkey\tvalue\n"
            "books_per_label\tA\t1\nbooks_per_label\tB\t2\n"
            "labels_with_n_books\t1\t1\nlabels_with_n_books\t2\t1\n"
            "labels_per_book\t1\t0.5\nlabels_per_book\t2\t0.5\n"
            "summary\tlabeled_books\t2\nsummary\tcatalog_books\t4\nsummary\tunlabeled_fraction\t0.5\n");
}

TEST(Stats, TsvHeaders) {
  EXPECT_EQ(length_ccdf_tsv(length_ccdf({3})), "m\tn_books\n1\t1\n2\t1\n3\t0\n");
  EXPECT_TRUE(books_per_year_tsv(books_per_year({}, 1990, 1991)).starts_with("year\tn_books\n1990\t0\n"));
}

}  // namespace
