// spgc: acquire, process and analyse a Project Gutenberg mirror.
//
// Exit codes: 0 success, 1 systemic failure, 2 usage error.

#include <iostream>

#include "CLI11.hpp"
#include "spgc/pipeline.hpp"

namespace {

using namespace spgc;
using pipeline::Config;

struct Flags {
  std::string config, store, mirror, ids, lang, markers, out, metadata, bookshelves;
  unsigned jobs = 0;
  std::uint64_t seed = 0;
  std::size_t pairs = 0, authors = 0, author_pool = 0;
  bool offline = false;
  bool verbose = false;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override its keys");
  app.add_option("--store", f.store, "store root holding raw/ text/ tokens/ counts/");
  app.add_option("--mirror", f.mirror, "mirror directory or http(s) URL");
  app.add_option("--ids", f.ids, "file of book ids to restrict to");
  app.add_option("--lang", f.lang, "only process books listing this language code");
  app.add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "experiment seed");
  app.add_option("--markers", f.markers, "header/footer marker file");
  app.add_option("--out", f.out, "output directory for stats and experiments");
  app.add_option("--metadata", f.metadata, "directory of RDF records (default <store>/metadata)");
  app.add_option("--bookshelves", f.bookshelves, "bookshelf pages directory or mapping file");
  app.add_option("--pairs", f.pairs, "pairs drawn per author or window pair")->check(CLI::PositiveNumber);
  app.add_option("--authors", f.authors, "number of prolific authors")->check(CLI::PositiveNumber);
  app.add_option("--author-pool", f.author_pool, "most downloaded books considered for authors")
      ->check(CLI::PositiveNumber);
  app.add_flag("--offline", f.offline, "never contact a network mirror");
  app.add_flag("-v,--verbose", f.verbose, "debug logging");
}

Config resolve(const CLI::App& app, const Flags& f) {
  Config c = f.config.empty() ? Config{} : pipeline::load_config(f.config);
  const auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--store")) c.store = f.store;
  if (given("--mirror")) c.mirror = f.mirror;
  if (given("--ids")) c.ids_file = f.ids;
  if (given("--lang")) c.lang = f.lang;
  if (given("--jobs")) c.jobs = f.jobs;
  if (given("--seed")) c.seed = f.seed;
  if (given("--markers")) c.markers = f.markers;
  if (given("--out")) c.out = f.out;
  if (given("--metadata")) c.metadata = f.metadata;
  if (given("--bookshelves")) c.bookshelves = f.bookshelves;
  if (given("--pairs")) c.n_pairs = f.pairs;
  if (given("--authors")) c.n_authors = f.authors;
  if (given("--author-pool")) c.author_pool = f.author_pool;
  if (given("--offline")) c.offline = f.offline;
  if (c.jobs < 1) throw InvalidQuery("--jobs must be at least 1");
  for (const fs::path* p : {&c.ids_file, &c.markers})
    if (!p->empty() && !fs::exists(*p)) throw InvalidQuery("file not found: " + p->string());
  return c;
}

void print_paths(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Project Gutenberg corpus tool"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  add_flags(app, f);

  auto* get = app.add_subcommand("get-data", "sync raw texts and metadata from a mirror");
  auto* process = app.add_subcommand("process-data", "clean, tokenize and count every raw book");
  auto* stats = app.add_subcommand("stats", "corpus description tables");
  auto* experiment = app.add_subcommand("experiment", "divergence experiments");
  std::string which;
  experiment->add_option("which", which, "labels, authors or time")
      ->required()
      ->check(CLI::IsMember({"labels", "authors", "time"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Config cfg;
  try {
    cfg = resolve(app, f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  Logger log(&std::cerr, f.verbose ? Logger::Level::Debug : Logger::Level::Info);
  try {
    if (*get) {
      const auto r = pipeline::get_data(cfg, log);
      std::cout << pipeline::sync_report_tsv(r);
      if (!r.failures.empty()) log.warn("", std::to_string(r.failures.size()) + " books failed; see reports/sync_report.tsv");
      pipeline::write_manifest(cfg.reports_dir(), "get-data", cfg);
    } else if (*process) {
      const auto r = pipeline::process_data(cfg, log);
      using pipeline::BookStatus;
      std::cout << "processed\t" << r.count(BookStatus::Processed) << "\n"
                << "empty_after_clean\t" << r.count(BookStatus::EmptyAfterClean) << "\n"
                << "not_text\t" << r.count(BookStatus::NotText) << "\n"
                << "filtered\t" << r.count(BookStatus::Filtered) << "\n"
                << "failed\t" << r.count(BookStatus::Failed) << "\n"
                << "total_tokens\t" << r.total_tokens() << "\n";
      pipeline::write_manifest(cfg.reports_dir(), "process-data", cfg);
    } else if (*stats) {
      print_paths(pipeline::run_stats(cfg, log));
      pipeline::write_manifest(cfg.out_dir(), "stats", cfg);
    } else if (*experiment) {
      if (which == "labels") print_paths(pipeline::run_labels_experiment(cfg, log));
      else if (which == "authors") print_paths(pipeline::run_authors_experiment(cfg, log));
      else print_paths(pipeline::run_time_experiment(cfg, log));
      pipeline::write_manifest(cfg.out_dir(), "experiment " + which, cfg);
    }
  } catch (const InvalidQuery& e) {
    log.error("", e.what());
    return 2;
  } catch (const std::exception& e) {
    log.error("", e.what());
    return 1;
  }
  return 0;
}
