#pragma once

// End-to-end drivers behind the command-line tool: acquisition, per-book
// processing, corpus statistics and the divergence experiments.

#include <chrono>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spgc/acquisition.hpp"
#include "spgc/catalog.hpp"
#include "spgc/cleanup.hpp"
#include "spgc/counts.hpp"
#include "spgc/divergence.hpp"
#include "spgc/parallel.hpp"
#include "spgc/stats.hpp"
#include "spgc/tokenizer.hpp"

namespace spgc::pipeline {

inline constexpr std::string_view kVersion = "0.1.0";

struct Config {
  fs::path store = "store";
  std::string mirror;
  fs::path ids_file;
  std::optional<std::string> lang;
  unsigned jobs = 1;
  std::uint64_t seed = 20180718;
  fs::path markers;
  fs::path out;          // defaults to <store>/analysis
  fs::path metadata;     // defaults to <store>/metadata
  fs::path bookshelves;  // html pages or mapping file; metadata shelves when empty
  bool offline = false;
  std::size_t n_pairs = 1000;
  std::size_t n_authors = 20;
  std::size_t author_pool = 100;

  fs::path out_dir() const { return out.empty() ? store / "analysis" : out; }
  fs::path metadata_dir() const { return metadata.empty() ? store / "metadata" : metadata; }
  fs::path reports_dir() const { return store / "reports"; }
};

inline nlohmann::json to_json(const Config& c) {
  nlohmann::json j;
  j["store"] = c.store.generic_string();
  j["mirror"] = c.mirror;
  j["ids"] = c.ids_file.generic_string();
  j["lang"] = c.lang ? nlohmann::json(*c.lang) : nlohmann::json(nullptr);
  j["jobs"] = c.jobs;
  j["seed"] = c.seed;
  j["markers"] = c.markers.generic_string();
  j["out"] = c.out_dir().generic_string();
  j["metadata"] = c.metadata_dir().generic_string();
  j["bookshelves"] = c.bookshelves.generic_string();
  j["offline"] = c.offline;
  j["pairs"] = c.n_pairs;
  j["authors"] = c.n_authors;
  j["author_pool"] = c.author_pool;
  return j;
}

/// Config file keys are the long flag names. Unknown keys are rejected.
inline Config config_from_json(const nlohmann::json& j, Config c = {}) {
  if (!j.is_object()) throw InvalidQuery("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "store") c.store = v.get<std::string>();
    else if (key == "mirror") c.mirror = v.get<std::string>();
    else if (key == "ids") c.ids_file = v.get<std::string>();
    else if (key == "lang") c.lang = v.is_null() ? std::nullopt : std::optional(v.get<std::string>());
    else if (key == "jobs") c.jobs = v.get<unsigned>();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "markers") c.markers = v.get<std::string>();
    else if (key == "out") c.out = v.get<std::string>();
    else if (key == "metadata") c.metadata = v.get<std::string>();
    else if (key == "bookshelves") c.bookshelves = v.get<std::string>();
    else if (key == "offline") c.offline = v.get<bool>();
    else if (key == "pairs") c.n_pairs = v.get<std::size_t>();
    else if (key == "authors") c.n_authors = v.get<std::size_t>();
    else if (key == "author_pool") c.author_pool = v.get<std::size_t>();
    else throw InvalidQuery("unknown config key '" + key + "'");
  }
  return c;
}

inline Config load_config(const fs::path& path) {
  try {
    return config_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidQuery("config " + path.string() + ": " + e.what());
  }
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Provenance record for one run. The only output carrying a timestamp.
inline fs::path write_manifest(const fs::path& dir, const std::string& command, const Config& c) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["timestamp"] = utc_timestamp();
  j["config"] = to_json(c);
  std::string name = command;
  std::replace(name.begin(), name.end(), ' ', '-');
  const auto path = dir / (name + ".manifest.json");
  write_file_atomic(path, j.dump(2) + "\n");
  return path;
}

inline std::optional<std::set<BookId>> load_ids(const Config& c) {
  if (c.ids_file.empty()) return std::nullopt;
  return acquisition::parse_id_list(read_file(c.ids_file));
}

// ------------------------------------------------------------- get-data

inline std::string sync_report_tsv(const acquisition::SyncReport& r) {
  std::string out = "key\tvalue\n";
  out += "downloaded\t" + std::to_string(r.downloaded) + "\n";
  out += "skipped_up_to_date\t" + std::to_string(r.skipped_up_to_date) + "\n";
  out += "duplicates_resolved\t" + std::to_string(r.duplicates_resolved) + "\n";
  out += "rejected_non_utf8\t" + std::to_string(r.rejected_non_utf8) + "\n";
  out += "metadata_fetched\t" + std::to_string(r.metadata_fetched) + "\n";
  for (const auto& [id, why] : r.failures) out += "failure\t" + std::to_string(id) + " " + why + "\n";
  for (const auto& [id, src] : r.rejected) out += "rejected\t" + std::to_string(id) + " " + src + "\n";
  return out;
}

inline bool is_http(std::string_view mirror) {
  return mirror.starts_with("http://") || mirror.starts_with("https://");
}

inline acquisition::SyncReport get_data(const Config& c, Logger& log) {
  if (c.mirror.empty()) throw InvalidQuery("get-data needs --mirror");
  acquisition::SyncOptions opt;
  opt.ids = load_ids(c);
  opt.max_parallel = c.jobs;
  acquisition::SyncReport r;
  if (is_http(c.mirror)) {
    if (c.offline) throw InvalidQuery("--offline forbids the HTTP mirror " + c.mirror);
    r = acquisition::sync_http_mirror(c.mirror, c.store, opt, log);
  } else {
    r = acquisition::sync_mirror(c.mirror, c.store, opt, log);
  }
  for (const auto& [id, why] : r.failures) log.warn(std::to_string(id), why);
  write_file_atomic(c.reports_dir() / "sync_report.tsv", sync_report_tsv(r));
  return r;
}

// --------------------------------------------------------- process-data

enum class BookStatus { Processed, EmptyAfterClean, NotText, Filtered, Failed };

inline std::string_view to_string(BookStatus s) {
  switch (s) {
    case BookStatus::Processed: return "processed";
    case BookStatus::EmptyAfterClean: return "empty_after_clean";
    case BookStatus::NotText: return "not_text";
    case BookStatus::Filtered: return "filtered";
    case BookStatus::Failed: return "failed";
  }
  return "failed";
}

struct BookOutcome {
  BookId id = 0;
  BookStatus status = BookStatus::Failed;
  std::string language;
  std::uint64_t n_tokens = 0;
  std::string detail;
};

struct ProcessReport {
  std::vector<BookOutcome> books;  // ascending ids
  std::size_t count(BookStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(books.begin(), books.end(), [&](const BookOutcome& b) { return b.status == s; }));
  }
  std::uint64_t total_tokens() const {
    std::uint64_t n = 0;
    for (const auto& b : books) n += b.n_tokens;
    return n;
  }
};

inline std::string process_report_tsv(const ProcessReport& r) {
  std::string out = "id\tstatus\tlanguage\tn_tokens\tdetail\n";
  for (const auto& b : r.books)
    out += std::to_string(b.id) + "\t" + std::string(to_string(b.status)) + "\t" + b.language + "\t" +
           std::to_string(b.n_tokens) + "\t" + catalog::detail::tsv_field(b.detail) + "\n";
  return out;
}

/// Catalog records under the metadata directory, or an empty catalog when
/// there is none.
inline catalog::Catalog optional_catalog(const Config& c, Logger& log) {
  std::error_code ec;
  if (!fs::is_directory(c.metadata_dir(), ec)) {
    log.warn("", "no metadata directory at " + c.metadata_dir().string());
    return {};
  }
  auto load = catalog::load_catalog(c.metadata_dir(), c.jobs, log);
  for (const auto& s : load.skipped) log.warn("", "skipped record " + s.path.string() + ": " + s.reason);
  return std::move(load.books);
}

inline void ensure_writable(const fs::path& dir) {
  try {
    fs::create_directories(dir);
    write_file_atomic(dir / ".write_probe", "");
    fs::remove(dir / ".write_probe");
  } catch (const std::exception& e) {
    throw IoError("store is not writable: " + dir.string() + ": " + e.what());
  }
}

/// Removes temporaries left in `dir` by an interrupted atomic write.
inline void sweep_temporaries(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename().string().find(".txt.tmp.") != std::string::npos)
      fs::remove(e.path(), ec);
}

/// raw -> text -> tokens -> counts for every book in the raw store.
inline ProcessReport process_data(const Config& c, Logger& log) {
  const auto raw = acquisition::RawStore::open(c.store);
  if (raw.layout.empty()) throw MissingArtifacts("no raw files under " + (c.store / "raw").string() + "; run get-data first");
  for (const char* level : {"text", "tokens", "counts"}) {
    ensure_writable(c.store / level);
    sweep_temporaries(c.store / level);
  }
  ensure_writable(c.reports_dir());

  const auto markers = c.markers.empty() ? cleanup::default_markers() : cleanup::load_markers(c.markers);
  const auto books = optional_catalog(c, log);
  const auto allow = load_ids(c);

  std::vector<BookId> ids;
  for (const auto& [id, _] : raw.layout)
    if (!allow || allow->count(id)) ids.push_back(id);

  std::vector<BookOutcome> outcomes(ids.size());
  parallel_for(ids.size(), c.jobs, [&](std::size_t i) {
    const BookId id = ids[i];
    const auto tag = std::to_string(id);
    BookOutcome& o = outcomes[i];
    o.id = id;
    const auto meta = books.find(id);
    std::vector<std::string> languages;
    if (meta != books.end()) {
      if (meta->second.media_type != catalog::MediaType::Text) {
        o.status = BookStatus::NotText;
        return;
      }
      languages = meta->second.languages;
    }
    if (c.lang && std::find(languages.begin(), languages.end(), *c.lang) == languages.end()) {
      o.status = BookStatus::Filtered;
      return;
    }
    if (languages.empty()) {
      log.warn(tag, "no language metadata, tokenizing as english");
      o.detail = "no language metadata";
      languages = {"en"};
    }
    try {
      const auto cleaned = cleanup::clean_book(raw.layout.at(id), id, c.store, markers);
      if (cleaned.empty_after_clean) {
        std::error_code ec;
        fs::remove(artifact_path(c.store, "tokens", id), ec);
        fs::remove(artifact_path(c.store, "counts", id), ec);
        o.status = BookStatus::EmptyAfterClean;
        return;
      }
      const auto seq = tokenizer::tokenize_book(cleaned.text_path, id, languages, c.store, log);
      const auto table = counts::count_tokens(seq.tokens, id);
      counts::write_counts(table, c.store);
      o.language = seq.language_used;
      o.n_tokens = table.total_tokens;
      o.status = BookStatus::Processed;
    } catch (const std::exception& e) {
      log.error(tag, e.what());
      o.status = BookStatus::Failed;
      o.detail = e.what();
    }
  });

  ProcessReport report{std::move(outcomes)};
  write_file_atomic(c.reports_dir() / "process_report.tsv", process_report_tsv(report));
  return report;
}

// ---------------------------------------------------------------- stats

/// Ids with a counts file in the store, ascending.
inline std::vector<BookId> processed_ids(const fs::path& store) {
  static const std::regex name("PG([0-9]+)_counts\\.txt");
  std::vector<BookId> ids;
  std::error_code ec;
  if (!fs::is_directory(store / "counts", ec)) return ids;
  for (const auto& e : fs::directory_iterator(store / "counts")) {
    std::smatch m;
    const auto fname = e.path().filename().string();
    if (e.is_regular_file() && std::regex_match(fname, m, name)) ids.push_back(std::stoull(m[1].str()));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline catalog::Catalog required_catalog(const Config& c, Logger& log) {
  std::error_code ec;
  if (!fs::is_directory(c.metadata_dir(), ec))
    throw MissingArtifacts("no metadata under " + c.metadata_dir().string() + "; run get-data first");
  auto books = optional_catalog(c, log);
  if (books.empty()) throw MissingArtifacts("no readable metadata records under " + c.metadata_dir().string());
  return books;
}

inline std::vector<BookId> required_processed(const Config& c) {
  auto ids = processed_ids(c.store);
  if (ids.empty())
    throw MissingArtifacts("no counts files under " + (c.store / "counts").string() + "; run process-data first");
  return ids;
}

inline catalog::LabelCatalog bookshelf_labels(const Config& c, const catalog::Catalog& books) {
  auto lc = c.bookshelves.empty() ? catalog::labels_from_metadata(books, catalog::LabelKind::Bookshelf)
                                  : catalog::load_bookshelves(c.bookshelves);
  catalog::flag_unresolved(lc, books);
  return lc;
}

inline catalog::Catalog text_only(const catalog::Catalog& books) {
  catalog::Catalog out;
  for (const auto& [id, m] : books)
    if (m.media_type == catalog::MediaType::Text) out.emplace(id, m);
  return out;
}

/// Writes the corpus description tables into the output directory and
/// returns their paths. Metadata tables cover every Text record; lengths
/// and token totals cover processed books.
inline std::vector<fs::path> run_stats(const Config& c, Logger& log) {
  const auto books = text_only(required_catalog(c, log));
  const auto ids = required_processed(c);
  std::vector<std::optional<std::uint64_t>> totals(ids.size());
  parallel_for(ids.size(), c.jobs, [&](std::size_t i) {
    try {
      totals[i] = counts::read_counts(artifact_path(c.store, "counts", ids[i]), counts::ReadMode::Strict, ids[i])
                      .total_tokens;
    } catch (const Error& e) {
      log.warn(std::to_string(ids[i]), e.what());
    }
  });
  std::vector<std::uint64_t> lengths;
  std::map<BookId, std::uint64_t> tokens;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!totals[i]) continue;
    lengths.push_back(*totals[i]);
    tokens[ids[i]] = *totals[i];
  }

  const auto out = c.out_dir();
  std::vector<fs::path> written;
  const auto emit = [&](const std::string& name, const std::string& data) {
    write_file_atomic(out / name, data);
    written.push_back(out / name);
  };
  emit("length_ccdf.tsv", stats::length_ccdf_tsv(stats::length_ccdf(lengths)));
  emit("books_per_year.tsv", stats::books_per_year_tsv(stats::books_per_year(books)));
  emit("languages.tsv", stats::language_tsv(stats::language_composition(books, tokens)));
  emit("labels_subjects.tsv",
       stats::labels_tsv(stats::label_histograms(catalog::labels_from_metadata(books, catalog::LabelKind::Subject), books)));
  const auto shelves = bookshelf_labels(c, books);
  if (!shelves.unresolved.empty())
    log.warn("", std::to_string(shelves.unresolved.size()) + " bookshelf entries reference unknown books");
  emit("labels_bookshelves.tsv", stats::labels_tsv(stats::label_histograms(shelves, books)));
  emit("metadata.csv", catalog::export_csv(books));
  return written;
}

// ----------------------------------------------------------- experiments

/// Processed Text books with metadata, loaded as distributions.
struct ExperimentCorpus {
  catalog::Catalog books;
  divergence::IndexedCorpus corpus;
};

inline ExperimentCorpus experiment_corpus(const Config& c, Logger& log) {
  const auto all = text_only(required_catalog(c, log));
  std::vector<BookId> ids;
  for (BookId id : required_processed(c))
    if (all.count(id)) ids.push_back(id);
  auto loaded = divergence::load_distributions(c.store, ids, c.jobs);
  for (const auto& [id, why] : loaded.excluded) log.warn(std::to_string(id), "excluded: " + why);
  catalog::Catalog books;
  for (const auto& [id, _] : loaded.books) books.emplace(id, all.at(id));
  if (books.empty()) throw MissingArtifacts("no processed books with metadata; run process-data first");
  return {std::move(books), divergence::IndexedCorpus(loaded.books)};
}

inline std::vector<fs::path> run_labels_experiment(const Config& c, Logger& log) {
  const auto ec = experiment_corpus(c, log);
  auto selection = divergence::label_selection(bookshelf_labels(c, ec.books), divergence::default_label_shelves());
  std::erase_if(selection, [&](const auto& row) { return !ec.corpus.contains(row.first); });
  if (selection.empty()) throw MissingArtifacts("no processed books on the selected bookshelves");
  std::vector<BookId> ids;
  for (const auto& [id, _] : selection) ids.push_back(id);
  const auto m = divergence::pairwise_distances(ids, ec.corpus, c.jobs);
  const auto out = c.out_dir();
  write_file_atomic(out / "label_books.tsv", divergence::label_books_tsv(selection));
  write_file_atomic(out / "distances_labels.tsv", divergence::distance_matrix_tsv(m));
  return {out / "label_books.tsv", out / "distances_labels.tsv"};
}

inline std::vector<fs::path> run_authors_experiment(const Config& c, Logger& log) {
  const auto ec = experiment_corpus(c, log);
  const auto authors = divergence::select_prolific_authors(ec.books, c.n_authors, c.author_pool);
  const auto groups = divergence::author_groups(ec.books, authors, ec.corpus);
  const auto r = divergence::author_experiment(groups, ec.corpus, c.n_pairs, c.seed, c.jobs);
  for (const auto& [name, why] : r.skipped) log.warn("", "author " + name + " skipped: " + why);
  std::vector<std::pair<BookId, std::string>> rows;
  for (const auto& g : groups)
    for (BookId id : g.books) rows.emplace_back(id, g.author);
  std::sort(rows.begin(), rows.end());
  std::vector<BookId> ids;
  for (const auto& [id, _] : rows) ids.push_back(id);
  const auto out = c.out_dir();
  write_file_atomic(out / "authors.tsv", divergence::author_experiment_tsv(r));
  write_file_atomic(out / "author_books.tsv", divergence::label_books_tsv(rows));
  write_file_atomic(out / "distances_authors.tsv",
                    divergence::distance_matrix_tsv(divergence::pairwise_distances(ids, ec.corpus, c.jobs)));
  return {out / "authors.tsv", out / "author_books.tsv", out / "distances_authors.tsv"};
}

inline std::vector<fs::path> run_time_experiment(const Config& c, Logger& log) {
  const auto ec = experiment_corpus(c, log);
  const auto windows = divergence::default_windows();
  const auto members = divergence::window_members(ec.books, windows, ec.corpus);
  const auto r = divergence::time_experiment(windows, members, ec.corpus, c.n_pairs, c.seed, c.jobs);
  for (const auto& [a, b] : r.skipped)
    log.warn("", "windows " + std::to_string(a.start) + "/" + std::to_string(b.start) + " skipped: empty window");
  const auto out = c.out_dir();
  write_file_atomic(out / "time.tsv", divergence::time_experiment_tsv(r));
  return {out / "time.tsv"};
}

}  // namespace spgc::pipeline
