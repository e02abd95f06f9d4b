// Acceptance run: one PASS / FAIL / BLOCKED line per criterion.
//
// Criteria 5, 6 and 9 need real Project Gutenberg data and run only when
// the matching environment variable points at it:
//   SPGC_FROZEN_DIR    raw/PG<id>_raw.txt and published counts/PG<id>_counts.txt
//                      (optional metadata/ of RDF records for languages)
//   SPGC_METADATA_DIR  RDF records of the whole catalog
//   SPGC_BOOKSHELVES   optional bookshelf pages or mapping for criterion 6
//   SPGC_FULL_STORE    store produced by get-data + process-data on a full mirror
// Exit status is 1 if any criterion fails, 0 otherwise.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>

#include "spgc/pipeline.hpp"
#include "synthetic_corpus.hpp"

namespace {

using namespace spgc;
using Clock = std::chrono::steady_clock;

enum class Verdict { Pass, Fail, Blocked };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& name, const Outcome& o, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "BLOCKED";
  if (o.verdict == Verdict::Fail) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.1fs", secs);
  std::cout << tag << "\tcriterion " << n << "\t" << name << "\t" << o.detail << " (" << timing << ")" << std::endl;
}

template <typename Fn>
void criterion(int n, const std::string& name, Fn&& fn) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {Verdict::Fail, std::string("exception: ") + e.what()};
  }
  report(n, name, o, start);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

// ------------------------------------------------------------------- 1

Outcome jsd_properties() {
  using divergence::jsd;
  using divergence::to_distribution;
  constexpr double tol = 1e-12;
  std::mt19937_64 rng(1);
  std::size_t violations = 0, pairs = 0;
  auto random_table = [&](std::size_t vocab) {
    counts::CountsTable t;
    const auto n = 1 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = 1 + rng() % (rng() % 4 == 0 ? 1000000 : 20);
      t.entries["w" + std::to_string(rng() % vocab)] += c;
      t.total_tokens += c;
    }
    return t;
  };
  for (int trial = 0; trial < 12000; ++trial) {
    const std::size_t vocab = trial % 3 == 0 ? 500 : 80;
    auto a = random_table(vocab), b = random_table(vocab);
    // Every tenth pair is disjoint by construction.
    if (trial % 10 == 0) {
      counts::CountsTable moved;
      for (const auto& [w, c] : b.entries) moved.entries["x" + w] = c;
      moved.total_tokens = b.total_tokens;
      b = moved;
    }
    const auto p = to_distribution(a), q = to_distribution(b);
    const double d = jsd(p, q);
    ++pairs;
    bool ok = d == jsd(q, p) && d >= 0.0 && d <= 1.0 && jsd(p, p) == 0.0 && jsd(q, q) == 0.0;
    ok = ok && ((d == 0.0) == (p == q));
    if (trial % 10 == 0) ok = ok && d == 1.0;
    auto scaled = a;
    const auto k = 2 + rng() % 5000;
    for (auto& [w, c] : scaled.entries) c *= k;
    scaled.total_tokens *= k;
    ok = ok && std::abs(jsd(to_distribution(scaled), q) - d) <= tol;
    if (!ok) ++violations;
  }
  divergence::WordDistribution one{{"a"}, {1.0}}, two{{"a", "b"}, {0.5, 0.5}};
  const double spot = jsd(one, two);
  const bool spot_ok = std::abs(spot - 0.311278) <= 1e-6;
  return {violations == 0 && spot_ok ? Verdict::Pass : Verdict::Fail,
          std::to_string(pairs) + " fuzzed pairs, " + std::to_string(violations) + " violations; spot value " +
              fmt(spot)};
}

// ------------------------------------------------------------ 2, 7, 8

struct DeskCorpus {
  fs::path root;
  pipeline::Config config;
  bool deterministic = false;
  std::size_t books = 0;
  std::string detail;
};

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
  return files;
}

DeskCorpus build_desk_corpus() {
  DeskCorpus d;
  d.root = fs::temp_directory_path() / "spgc_acceptance";
  fs::remove_all(d.root);
  const auto mirror = d.root / "mirror";
  testing::write_mirror(mirror, testing::desk_corpus());
  pipeline::Config one;
  one.mirror = mirror.string();
  one.store = d.root / "store1";
  one.jobs = 1;
  pipeline::Config eight = one;
  eight.store = d.root / "store8";
  eight.jobs = 8;
  Logger& quiet = Logger::null();
  pipeline::get_data(one, quiet);
  pipeline::get_data(eight, quiet);
  d.books = acquisition::RawStore::open(one.store).layout.size();
  pipeline::process_data(one, quiet);
  pipeline::process_data(eight, quiet);
  d.deterministic = true;
  std::size_t files = 0;
  for (const char* level : {"text", "tokens", "counts"}) {
    const auto a = snapshot(one.store / level), b = snapshot(eight.store / level);
    files += a.size();
    if (a != b) {
      d.deterministic = false;
      d.detail += std::string(level) + " differs; ";
    }
  }
  d.detail += std::to_string(d.books) + " raw books, " + std::to_string(files) + " files compared at 1 and 8 workers";
  d.config = eight;
  return d;
}

Outcome author_property(const DeskCorpus& d) {
  const auto ec = pipeline::experiment_corpus(d.config, Logger::null());
  const auto authors = divergence::select_prolific_authors(ec.books, 5);
  const auto groups = divergence::author_groups(ec.books, authors, ec.corpus);
  for (const auto& g : groups)
    if (g.books.size() < 5) return {Verdict::Fail, g.author + " has only " + std::to_string(g.books.size()) + " books"};
  const auto r = divergence::author_experiment(groups, ec.corpus, 200, 20180718, 8);
  int smaller = 0;
  std::string medians;
  for (const auto& a : r.authors) {
    smaller += a.same[2] < a.cross[2];
    medians += " " + fmt(a.same[2]) + "<" + fmt(a.cross[2]);
  }
  return {smaller >= 4 ? Verdict::Pass : Verdict::Fail,
          std::to_string(smaller) + "/5 authors with same-author median below cross-author median;" + medians};
}

Outcome time_property(const DeskCorpus& d) {
  const auto ec = pipeline::experiment_corpus(d.config, Logger::null());
  const std::vector<divergence::Window> windows = {{1800, 1820}, {1820, 1840}, {1980, 2000}};
  const auto members = divergence::window_members(ec.books, windows, ec.corpus);
  const auto r = divergence::time_experiment(windows, members, ec.corpus, 200, 20180718, 8);
  std::optional<double> near, far;
  for (const auto& p : r.pairs) {
    if (p.a.start == 1800 && p.b.start == 1820) near = p.mean;
    if (p.a.start == 1800 && p.b.start == 1980) far = p.mean;
  }
  if (!near || !far) return {Verdict::Fail, "a window had no eligible books"};
  return {*far > *near ? Verdict::Pass : Verdict::Fail,
          "mean JSD 1800-1820 vs 1820-1840 = " + fmt(*near) + ", vs 1980-2000 = " + fmt(*far) + " (window sizes " +
              std::to_string(members[0].size()) + ", " + std::to_string(members[1].size()) + ", " +
              std::to_string(members[2].size()) + ")"};
}

// ---------------------------------------------------------------- 3, 4

Outcome tokenizer_parity() {
  std::size_t cases = 0, mismatches = 0;
  std::set<std::string> languages;
  for (const auto& lang : fs::directory_iterator(fs::path(SPGC_FIXTURES) / "tokenizer")) {
    for (const auto& c : fs::directory_iterator(lang.path())) {
      const auto code = lang.path().filename().string();
      const auto raw = tokenizer::tokenize_raw(read_file(c.path() / "input.txt"), code);
      const bool ok = tokenizer::serialize_tokens(raw) == read_file(c.path() / "raw_tokens.txt") &&
                      tokenizer::serialize_tokens(tokenizer::filter_tokens(raw)) ==
                          read_file(c.path() / "expected_tokens.txt");
      ++cases;
      mismatches += !ok;
      languages.insert(code);
    }
  }
  const bool pass = mismatches == 0 && cases >= 200 && languages.size() >= 6;
  return {pass ? Verdict::Pass : Verdict::Fail, std::to_string(cases - mismatches) + "/" + std::to_string(cases) +
                                                    " byte-exact across " + std::to_string(languages.size()) +
                                                    " languages"};
}

Outcome cleanup_parity() {
  std::size_t cases = 0, mismatches = 0;
  std::set<std::string> names;
  for (const auto& c : fs::directory_iterator(fs::path(SPGC_FIXTURES) / "cleanup")) {
    ++cases;
    names.insert(c.path().filename().string());
    if (cleanup::strip_text(read_file(c.path() / "raw.txt")) != read_file(c.path() / "expected_text.txt")) ++mismatches;
  }
  const bool kinds = names.count("no_markers") && names.count("start_only") && names.count("legalese_block");
  const bool pass = mismatches == 0 && cases >= 25 && kinds;
  return {pass ? Verdict::Pass : Verdict::Fail,
          std::to_string(cases - mismatches) + "/" + std::to_string(cases) + " byte-identical" +
              (kinds ? "" : "; missing marker-less, start-only or legalese case")};
}

// ----------------------------------------------------------- 5, 6, 9

Outcome frozen_spot_check() {
  const char* dir = env("SPGC_FROZEN_DIR");
  if (!dir) return {Verdict::Blocked, "needs SPGC_FROZEN_DIR with raw files and published counts of the 2018-07-18 release"};
  const fs::path root(dir);
  const auto raw = acquisition::RawStore::open(root);
  catalog::Catalog books;
  if (fs::is_directory(root / "metadata")) books = catalog::load_catalog(root / "metadata").books;
  const auto scratch = fs::temp_directory_path() / "spgc_acceptance_frozen";
  fs::remove_all(scratch);
  std::size_t compared = 0, passing = 0;
  double worst = 1.0;
  for (const auto& [id, path] : raw.layout) {
    const auto published_path = artifact_path(root, "counts", id);
    if (!fs::exists(published_path)) continue;
    const auto published = counts::read_counts(published_path, counts::ReadMode::Lenient, id);
    const auto meta = books.find(id);
    const std::vector<std::string> langs =
        meta != books.end() && !meta->second.languages.empty() ? meta->second.languages : std::vector<std::string>{"en"};
    const auto cleaned = cleanup::clean_book(path, id, scratch);
    const auto seq = tokenizer::tokenize_book(cleaned.text_path, id, langs, scratch);
    const auto ours = counts::count_tokens(seq.tokens, id);
    std::uint64_t shared = 0;
    for (const auto& [w, n] : published.entries)
      if (const auto it = ours.entries.find(w); it != ours.entries.end()) shared += std::min(n, it->second);
    const double agreement =
        static_cast<double>(shared) / static_cast<double>(std::max(ours.total_tokens, published.total_tokens));
    ++compared;
    passing += agreement >= 0.99;
    worst = std::min(worst, agreement);
  }
  fs::remove_all(scratch);
  if (compared < 5) return {Verdict::Fail, "only " + std::to_string(compared) + " books with published counts"};
  return {passing == compared ? Verdict::Pass : Verdict::Fail,
          std::to_string(passing) + "/" + std::to_string(compared) + " books at >= 99% token mass; worst " + fmt(worst)};
}

Outcome metadata_statistics() {
  const char* dir = env("SPGC_METADATA_DIR");
  if (!dir) return {Verdict::Blocked, "needs SPGC_METADATA_DIR with the full catalog of RDF records"};
  const auto all = catalog::load_catalog(dir, std::max(1u, std::thread::hardware_concurrency())).books;
  catalog::Catalog books;
  for (const auto& [id, m] : all)
    if (m.media_type == catalog::MediaType::Text) books.emplace(id, m);
  const char* shelves_src = env("SPGC_BOOKSHELVES");
  const auto shelves = shelves_src ? catalog::load_bookshelves(shelves_src)
                                   : catalog::labels_from_metadata(books, catalog::LabelKind::Bookshelf);
  const auto shelf_h = stats::label_histograms(shelves, books);
  const auto subject_h =
      stats::label_histograms(catalog::labels_from_metadata(books, catalog::LabelKind::Subject), books);
  const double unique_shelf = shelf_h.labels_per_book.count(1) ? shelf_h.labels_per_book.at(1) : 0.0;
  const double multi_subject = stats::fraction_with_at_least(subject_h, 2);
  const double english = stats::language_book_share(stats::language_composition(books), "en");
  const bool pass = std::abs(unique_shelf - 0.85) <= 0.05 && std::abs(multi_subject - 0.50) <= 0.05 &&
                    std::abs(english - 0.81) <= 0.02;
  return {pass ? Verdict::Pass : Verdict::Fail,
          std::to_string(books.size()) + " Text records; unique bookshelf " + fmt(unique_shelf) +
              ", >=2 subjects " + fmt(multi_subject) + ", english " + fmt(english)};
}

Outcome full_corpus() {
  const char* dir = env("SPGC_FULL_STORE");
  if (!dir) return {Verdict::Blocked, "needs SPGC_FULL_STORE processed from a complete mirror"};
  const auto ids = pipeline::processed_ids(dir);
  std::vector<std::uint64_t> totals(ids.size());
  parallel_for(ids.size(), std::max(1u, std::thread::hardware_concurrency()), [&](std::size_t i) {
    totals[i] = counts::read_counts(artifact_path(dir, "counts", ids[i]), counts::ReadMode::Lenient, ids[i]).total_tokens;
  });
  std::uint64_t tokens = 0;
  for (auto t : totals) tokens += t;
  const bool pass = ids.size() >= 50000 && static_cast<double>(tokens) > 3e9;
  return {pass ? Verdict::Pass : Verdict::Fail,
          std::to_string(ids.size()) + " processed books, " + std::to_string(tokens) +
              " tokens (wall time is not measured here)"};
}

}  // namespace

int main() {
  criterion(1, "JSD correctness", jsd_properties);

  std::optional<DeskCorpus> desk;
  criterion(2, "pipeline determinism", [&] {
    desk = build_desk_corpus();
    return Outcome{desk->deterministic && desk->books >= 50 ? Verdict::Pass : Verdict::Fail, desk->detail};
  });
  criterion(3, "tokenizer parity", tokenizer_parity);
  criterion(4, "cleanup parity", cleanup_parity);
  criterion(5, "frozen-corpus spot check", frozen_spot_check);
  criterion(6, "metadata-scale statistics", metadata_statistics);
  criterion(7, "author experiment property", [&] {
    return desk ? author_property(*desk) : Outcome{Verdict::Fail, "desk corpus unavailable"};
  });
  criterion(8, "time experiment property", [&] {
    return desk ? time_property(*desk) : Outcome{Verdict::Fail, "desk corpus unavailable"};
  });
  criterion(9, "full-corpus run", full_corpus);
  if (desk) fs::remove_all(desk->root);
  return failures == 0 ? 0 : 1;
}
