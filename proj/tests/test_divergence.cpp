#include <gtest/gtest.h>

#include <random>

#include "spgc/divergence.hpp"

namespace {

using namespace spgc;
using namespace spgc::divergence;
using counts::CountsTable;

const fs::path kExp = fs::path(SPGC_FIXTURES) / "experiments";

CountsTable table(std::map<std::string, std::uint64_t> entries) {
  CountsTable t;
  for (const auto& [w, n] : entries) t.total_tokens += n;
  t.entries = std::move(entries);
  return t;
}

WordDistribution dist(std::map<std::string, double> probs) {
  WordDistribution d;
  for (const auto& [w, p] : probs) {
    d.words.push_back(w);
    d.probs.push_back(p);
  }
  return d;
}

long double oracle_jsd(const WordDistribution& p, const WordDistribution& q) {
  std::map<std::string, std::pair<long double, long double>> u;
  for (std::size_t i = 0; i < p.words.size(); ++i) u[p.words[i]].first = p.probs[i];
  for (std::size_t i = 0; i < q.words.size(); ++i) u[q.words[i]].second = q.probs[i];
  auto h = [](long double x) { return x > 0 ? -x * std::log2(x) : 0.0L; };
  long double hm = 0, hp = 0, hq = 0;
  for (const auto& [w, pq] : u) {
    hm += h((pq.first + pq.second) / 2);
    hp += h(pq.first);
    hq += h(pq.second);
  }
  return hm - (hp + hq) / 2;
}

std::map<BookId, WordDistribution> fixture_distributions() {
  std::map<BookId, WordDistribution> out;
  for (const auto& e : fs::directory_iterator(kExp / "store" / "counts")) {
    const auto name = e.path().stem().string();  // PG<id>_counts
    const BookId id = std::stoull(name.substr(2, name.find('_') - 2));
    out[id] = to_distribution(counts::read_counts(e.path()));
  }
  return out;
}

catalog::Catalog fixture_catalog() {
  catalog::Catalog books;
  const auto data = read_file(kExp / "books.tsv");
  const auto rows = split_view(data, '\n');
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    const auto f = split_view(rows[i], '\t');
    catalog::BookMetadata m;
    m.id = std::stoull(std::string(f[0]));
    m.author_name = std::string(f[1]);
    m.author_birth_year = std::stoi(std::string(f[2]));
    m.author_death_year = std::stoi(std::string(f[3]));
    m.languages = {"en"};
    books[m.id] = m;
  }
  return books;
}

std::vector<std::vector<std::string>> read_tsv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  const auto data = read_file(p);
  for (auto line : split_view(data, '\n')) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> f;
    for (auto x : split_view(line, '\t')) f.emplace_back(x);
    rows.push_back(std::move(f));
  }
  return rows;
}

TEST(Divergence, ToDistribution) {
  EXPECT_EQ(to_distribution(table({{"a", 3}})), dist({{"a", 1.0}}));
  EXPECT_EQ(to_distribution(table({{"a", 1}, {"b", 1}})), dist({{"a", 0.5}, {"b", 0.5}}));
  EXPECT_EQ(to_distribution(table({{"a", 2}, {"b", 6}})), dist({{"a", 0.25}, {"b", 0.75}}));
  EXPECT_THROW(to_distribution(CountsTable{}), EmptyBook);
}

TEST(Divergence, SpotValues) {
  const auto p = dist({{"a", 1.0}});
  const auto q = dist({{"a", 0.5}, {"b", 0.5}});
  EXPECT_NEAR(jsd(p, q), 0.311278, 1e-6);
  // H({0.75, 0.25}) - (0 + 1) / 2, evaluated by hand.
  const double direct = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25)) - 0.5;
  EXPECT_NEAR(jsd(p, q), direct, 1e-15);
  EXPECT_EQ(jsd(p, p), 0.0);
  EXPECT_EQ(jsd(dist({{"a", 1}}), dist({{"b", 1}})), 1.0);
  EXPECT_EQ(jsd(dist({{"a", 0.3}, {"c", 0.7}}), dist({{"b", 0.1}, {"d", 0.9}})), 1.0);
}

TEST(Divergence, PropertiesOnFuzzedPairs) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 3000; ++trial) {
    auto random_counts = [&] {
      std::map<std::string, std::uint64_t> m;
      const auto n = 1 + rng() % 30;
      for (std::size_t i = 0; i < n; ++i) m["w" + std::to_string(rng() % 40)] += 1 + rng() % (trial % 7 ? 5 : 100000);
      return table(m);
    };
    const auto cp = random_counts(), cq = random_counts();
    const auto p = to_distribution(cp), q = to_distribution(cq);
    const double d = jsd(p, q);
    ASSERT_EQ(d, jsd(q, p));
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, 1.0);
    ASSERT_NEAR(d, static_cast<double>(oracle_jsd(p, q)), 1e-12);
    ASSERT_EQ(jsd(p, p), 0.0);
    auto scaled = cp;
    const auto k = 1 + rng() % 1000;
    for (auto& [w, n] : scaled.entries) n *= k;
    scaled.total_tokens *= k;
    ASSERT_NEAR(jsd(to_distribution(scaled), q), d, 1e-12);
    if (d == 0.0) {
      ASSERT_EQ(p, q);
    }
  }
}

TEST(Divergence, TinyDifferencesAreAccurate) {
  // Near-identical distributions stress cancellation in the direct formula.
  const auto p = dist({{"a", 0.5}, {"b", 0.5}});
  const auto q = dist({{"a", 0.5 + 1e-7}, {"b", 0.5 - 1e-7}});
  const long double expect = oracle_jsd(p, q);
  EXPECT_GT(jsd(p, q), 0.0);
  EXPECT_NEAR(jsd(p, q) / static_cast<double>(expect), 1.0, 1e-3);
}

TEST(Divergence, PairwiseMatchesScalarAndScipy) {
  const auto books = fixture_distributions();
  const IndexedCorpus corpus(books);
  std::vector<BookId> ids;
  for (const auto& [id, _] : books) ids.push_back(id);
  const auto m = pairwise_distances(ids, corpus, 4);
  ASSERT_EQ(m.ids, ids);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    EXPECT_EQ(m.at(i, i), 0.0);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      EXPECT_EQ(m.at(i, j), jsd(books.at(ids[i]), books.at(ids[j])));
      EXPECT_EQ(m.at(i, j), m.at(j, i));
    }
  }
  for (const auto& row : read_tsv(kExp / "pairwise_expected.tsv")) {
    if (row[0] == "a") continue;
    const BookId a = std::stoull(row[0]), b = std::stoull(row[1]);
    EXPECT_NEAR(corpus.jsd(a, b), std::stod(row[2]), 1e-12) << a << " " << b;
  }
  EXPECT_EQ(pairwise_distances(ids, corpus, 1).d, m.d);
}

TEST(Divergence, MatrixEdgeCasesAndTsv) {
  std::map<BookId, WordDistribution> books = {{1, dist({{"a", 0.5}, {"b", 0.5}})},
                                              {2, dist({{"a", 0.5}, {"b", 0.5}})},
                                              {3, dist({{"c", 1.0}})}};
  const IndexedCorpus corpus(books);
  const auto one = pairwise_distances({3}, corpus);
  EXPECT_EQ(one.d, std::vector<double>{0.0});
  const auto m = pairwise_distances({1, 2, 3, 99}, corpus);
  EXPECT_EQ(m.ids, (std::vector<BookId>{1, 2, 3}));
  EXPECT_EQ(m.at(0, 1), 0.0);
  EXPECT_EQ(m.at(0, 2), 1.0);
  const auto tsv = distance_matrix_tsv(m);
  EXPECT_EQ(tsv, "id\t1\t2\t3\n1\t0\t0\t1\n2\t0\t0\t1\n3\t1\t1\t0\n");
  const auto back = parse_distance_matrix(tsv);
  EXPECT_EQ(back.ids, m.ids);
  EXPECT_EQ(back.d, m.d);
}

TEST(Divergence, LoadDistributionsExcludesEmptyAndMissing) {
  const auto store = fs::temp_directory_path() / "spgc_div_load";
  fs::remove_all(store);
  write_file_atomic(artifact_path(store, "counts", 1), "a\t2\n");
  write_file_atomic(artifact_path(store, "counts", 2), "");
  const auto loaded = load_distributions(store, {1, 2, 3});
  EXPECT_EQ(loaded.books.size(), 1u);
  ASSERT_EQ(loaded.excluded.size(), 2u);
  EXPECT_EQ(loaded.excluded[0].first, 2u);
  EXPECT_EQ(loaded.excluded[1].first, 3u);
  fs::remove_all(store);
}

catalog::BookMetadata book(BookId id, const std::string& author, std::uint64_t downloads) {
  catalog::BookMetadata m;
  m.id = id;
  m.author_name = author;
  m.downloads = downloads;
  return m;
}

TEST(Divergence, SelectProlificAuthors) {
  catalog::Catalog books;
  BookId id = 1;
  for (int i = 0; i < 30; ++i, ++id) books[id] = book(id, "Many", 10);
  for (const char* a : {"B", "C", "D"})
    for (int i = 0; i < 5; ++i, ++id) books[id] = book(id, a, 1000);
  EXPECT_EQ(select_prolific_authors(books, 1), std::vector<std::string>{"Many"});
  EXPECT_THROW(select_prolific_authors(books, 5), InsufficientAuthors);

  // Book counts {9, 7, 7, 3, 1}; "Seven-b" has more downloads than "Seven-a".
  catalog::Catalog five;
  id = 1;
  const std::vector<std::tuple<std::string, int, std::uint64_t>> authors = {
      {"Nine", 9, 5}, {"Seven-a", 7, 5}, {"Seven-b", 7, 8}, {"Three", 3, 100}, {"One", 1, 1000}};
  for (const auto& [name, n, dl] : authors)
    for (int i = 0; i < n; ++i, ++id) five[id] = book(id, name, dl);
  EXPECT_EQ(select_prolific_authors(five, 3), (std::vector<std::string>{"Nine", "Seven-b", "Seven-a"}));
  // With a pool of the 10 most downloaded books "Nine" (5 downloads each) drops out.
  EXPECT_EQ(select_prolific_authors(five, 2, 10), (std::vector<std::string>{"Seven-b", "Three"}));
}

TEST(Divergence, AuthorExperimentMatchesIndependentSampler) {
  const auto books = fixture_distributions();
  const IndexedCorpus corpus(books);
  const auto cat = fixture_catalog();
  const auto groups = author_groups(cat, {"Alpha, A.", "Beta, B.", "Gamma, G.", "Solo, S."}, corpus);
  const auto r = author_experiment(groups, corpus, 50, 20180718, 3);
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].first, "Solo, S.");
  const auto expected = read_tsv(kExp / "authors_expected.tsv");
  ASSERT_EQ(r.authors.size(), expected.size());
  for (std::size_t a = 0; a < expected.size(); ++a) {
    EXPECT_EQ(r.authors[a].author, expected[a][0]);
    EXPECT_EQ(std::to_string(r.authors[a].n_books), expected[a][1]);
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_NEAR(r.authors[a].same[k], std::stod(expected[a][2 + k]), 1e-12);
      EXPECT_NEAR(r.authors[a].cross[k], std::stod(expected[a][7 + k]), 1e-12);
    }
  }
  const auto again = author_experiment(groups, corpus, 50, 20180718, 1);
  EXPECT_EQ(author_experiment_tsv(again), author_experiment_tsv(r));
  EXPECT_TRUE(author_experiment_tsv(r).starts_with("# seed=20180718\tn_pairs=50\nauthor\tn_books\tsame_p5"));
}

TEST(Divergence, AuthorWithIdenticalBooks) {
  std::map<BookId, WordDistribution> books = {{1, dist({{"a", 1}})}, {2, dist({{"a", 1}})},
                                              {3, dist({{"b", 1}})}, {4, dist({{"c", 1}})}};
  const IndexedCorpus corpus(books);
  const auto r = author_experiment({{"Twin", {1, 2}}, {"Other", {3, 4}}}, corpus, 20, 1);
  for (double v : r.authors[0].same) EXPECT_EQ(v, 0.0);
  for (double v : r.authors[0].cross) EXPECT_EQ(v, 1.0);
  EXPECT_THROW(author_experiment({{"Twin", {1, 2}}}, corpus, 20, 1), InsufficientAuthors);
}

TEST(Divergence, TimeExperimentMatchesIndependentSampler) {
  const auto books = fixture_distributions();
  const IndexedCorpus corpus(books);
  const std::vector<Window> windows = {{1820, 1840}, {1960, 1980}};
  const auto members = window_members(fixture_catalog(), windows, corpus);
  const auto r = time_experiment(windows, members, corpus, 10, 7, 4);
  const auto expected = read_tsv(kExp / "time_expected.tsv");
  ASSERT_EQ(r.pairs.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(std::to_string(r.pairs[i].a.start), expected[i][0]);
    EXPECT_EQ(std::to_string(r.pairs[i].b.start), expected[i][1]);
    EXPECT_NEAR(r.pairs[i].mean, std::stod(expected[i][2]), 1e-12);
    EXPECT_NEAR(r.pairs[i].std_error, std::stod(expected[i][3]), 1e-12);
  }
  EXPECT_EQ(time_experiment_tsv(time_experiment(windows, members, corpus, 10, 7, 1)), time_experiment_tsv(r));
}

TEST(Divergence, TimeWindowsEligibilityAndEdgeCases) {
  catalog::Catalog cat;
  auto add = [&](BookId id, int b, int d) {
    catalog::BookMetadata m;
    m.id = id;
    m.author_birth_year = b;
    m.author_death_year = d;
    cat[id] = m;
  };
  add(1, 1780, 1845);  // 1801..1844: windows 1800, 1820, 1840
  add(2, 1900, 1915);  // empty interval
  add(3, 1960, 2010);  // 1981..2009: window 1980
  std::map<BookId, WordDistribution> books = {{1, dist({{"a", 1}})}, {2, dist({{"a", 1}})}, {3, dist({{"b", 1}})}};
  const IndexedCorpus corpus(books);
  const auto windows = default_windows();
  ASSERT_EQ(windows.size(), 10u);
  const auto members = window_members(cat, windows, corpus);
  EXPECT_EQ(members[0], std::vector<BookId>{1});
  EXPECT_EQ(members[1], std::vector<BookId>{1});
  EXPECT_EQ(members[2], std::vector<BookId>{1});
  EXPECT_TRUE(members[3].empty());
  EXPECT_EQ(members[9], std::vector<BookId>{3});
  const auto r = time_experiment(windows, members, corpus, 5, 3);
  // Non-empty windows 0, 1, 2, 9 give 4 * 5 / 2 = 10 pairs out of 55.
  EXPECT_EQ(r.pairs.size(), 10u);
  EXPECT_EQ(r.skipped.size(), 45u);
  EXPECT_EQ(r.pairs[0].mean, 0.0);
  EXPECT_EQ(r.pairs[0].std_error, 0.0);
  EXPECT_EQ(r.pairs.back().a.start, 1980);
}

TEST(Divergence, LabelSelectionUsesFirstListedShelf) {
  catalog::LabelCatalog shelves;
  shelves.assignments = {{"Poetry", {1, 2}}, {"Art", {2, 3}}, {"Fantasy", {4}}, {"Cooking", {5}}};
  const auto sel = label_selection(shelves, default_label_shelves());
  EXPECT_EQ(sel, (std::vector<std::pair<BookId, std::string>>{{1, "Poetry"}, {2, "Art"}, {3, "Art"}, {4, "Fantasy"}}));
  EXPECT_EQ(label_books_tsv(sel), "id\tlabel\n1\tPoetry\n2\tArt\n3\tArt\n4\tFantasy\n");
}

TEST(Divergence, RngBoundedDrawIsUniformAndReproducible) {
  Rng a(99), b(99);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto x = a.below(7);
    ASSERT_EQ(x, b.below(7));
    ++hist[x];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 400);
  std::mt19937_64 ref;
  for (int i = 0; i < 9999; ++i) ref();
  EXPECT_EQ(ref(), 9981545732273789042ull);
}

}  // namespace
