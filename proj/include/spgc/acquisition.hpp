#pragma once

// Raw-level acquisition: mirror Project Gutenberg plain-text files into
// `<store>/raw/PG<id>_raw.txt`, one UTF-8 file per book id.
//
// Two transports share the selection logic. A filesystem mirror is walked
// directly; an HTTP mirror is probed per book at the standard PG layout
// (`1/2/3/123/123-0.txt`). Sync state lives in `raw/.sync_state.tsv`: one
// `id source size stamp` row per stored book, appended as books complete and
// compacted at the end, so an interrupted sync resumes where it stopped.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <compare>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <httplib.h>

#include "spgc/error.hpp"
#include "spgc/io.hpp"
#include "spgc/parallel.hpp"
#include "spgc/unicode.hpp"

namespace spgc::acquisition {

/// Ordering used to pick "the latest" of several files for one id. Compared
/// lexicographically: deeper mirror paths win, then the larger numeric suffix
/// (no suffix sorts lowest), then the newer upstream stamp, then the path.
struct VersionKey {
  int depth = 0;
  std::optional<std::uint64_t> suffix;
  std::int64_t stamp = 0;
  std::string path;

  std::strong_ordering operator<=>(const VersionKey& o) const {
    if (auto c = depth <=> o.depth; c != 0) return c;
    if (suffix.has_value() != o.suffix.has_value()) return suffix.has_value() <=> o.suffix.has_value();
    if (suffix)
      if (auto c = *suffix <=> *o.suffix; c != 0) return c;
    if (auto c = stamp <=> o.stamp; c != 0) return c;
    return path.compare(o.path) <=> 0;
  }
  bool operator==(const VersionKey&) const = default;
};

struct Candidate {
  std::string source;  // mirror-relative path
  VersionKey key;
  std::uint64_t size = 0;
};

/// The maximal candidate under VersionKey.
inline const Candidate& resolve_duplicate(const std::vector<Candidate>& candidates) {
  if (candidates.empty()) throw Error("resolve_duplicate needs at least one candidate");
  return *std::max_element(candidates.begin(), candidates.end(),
                           [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
}

struct Accept {};
struct Reject {
  std::string reason;
};
using Validation = std::variant<Accept, Reject>;

inline Validation validate_bytes(std::string_view bytes) {
  if (const auto bad = unicode::find_invalid_utf8(bytes))
    return Reject{"invalid UTF-8 at byte " + std::to_string(*bad)};
  return Accept{};
}

inline Validation validate_encoding(const fs::path& file) { return validate_bytes(read_file(file)); }

inline bool accepted(const Validation& v) { return std::holds_alternative<Accept>(v); }

struct SyncReport {
  std::size_t downloaded = 0;
  std::size_t skipped_up_to_date = 0;
  std::size_t duplicates_resolved = 0;
  std::size_t rejected_non_utf8 = 0;
  std::size_t metadata_fetched = 0;
  std::vector<std::pair<BookId, std::string>> failures;
  std::vector<std::pair<BookId, std::string>> rejected;  // (id, source)
};

struct RetryPolicy {
  int retries = 3;
  std::chrono::milliseconds initial_backoff{500};
};

struct SyncOptions {
  std::optional<std::set<BookId>> ids;  // all ids on the mirror when empty
  unsigned max_parallel = 4;
  RetryPolicy retry;
  bool text = true;
  bool metadata = true;
};

/// A local store's raw level.
struct RawStore {
  fs::path root;
  std::map<BookId, fs::path> layout;

  static RawStore open(const fs::path& root) {
    static const std::regex name("PG([0-9]+)_raw\\.txt");
    RawStore s;
    s.root = root;
    std::error_code ec;
    if (!fs::is_directory(root / "raw", ec)) return s;
    for (const auto& e : fs::directory_iterator(root / "raw")) {
      std::smatch m;
      const auto fname = e.path().filename().string();
      if (e.is_regular_file() && std::regex_match(fname, m, name)) s.layout[std::stoull(m[1].str())] = e.path();
    }
    return s;
  }
};

/// Allow-list file: one id per line; blank lines and `#` comments ignored.
inline std::set<BookId> parse_id_list(std::string_view data) {
  std::set<BookId> ids;
  std::size_t lineno = 0;
  for (auto line : split_view(data, '\n')) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim_ascii(line);
    if (line.empty()) continue;
    BookId id = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), id);
    if (ec != std::errc() || ptr != line.data() + line.size() || id == 0)
      throw InvalidQuery("bad book id on line " + std::to_string(lineno) + " of id list");
    ids.insert(id);
  }
  return ids;
}

namespace detail {

struct StateRow {
  std::string source;
  std::uint64_t size = 0;
  std::int64_t stamp = 0;
  bool operator==(const StateRow&) const = default;
};

inline fs::path state_path(const fs::path& store) { return store / "raw" / ".sync_state.tsv"; }

inline std::map<BookId, StateRow> load_state(const fs::path& store) {
  std::map<BookId, StateRow> rows;
  std::ifstream in(state_path(store), std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    const auto f = split_view(line, '\t');
    if (f.size() != 4) continue;  // torn final line of an interrupted run
    try {
      rows[std::stoull(std::string(f[0]))] = {std::string(f[1]), std::stoull(std::string(f[2])),
                                              std::stoll(std::string(f[3]))};
    } catch (const std::exception&) {
    }
  }
  return rows;
}

inline std::string state_line(BookId id, const StateRow& r) {
  return std::to_string(id) + "\t" + r.source + "\t" + std::to_string(r.size) + "\t" + std::to_string(r.stamp) + "\n";
}

/// Appends completed books to the journal as they finish.
class StateJournal {
 public:
  explicit StateJournal(const fs::path& store) {
    const auto path = state_path(store);
    std::error_code ec;
    const bool torn = fs::exists(path, ec) && fs::file_size(path, ec) > 0 && read_file(path).back() != '\n';
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) throw IoError("cannot open " + path.string());
    if (torn) out_ << '\n';
  }
  void record(BookId id, const StateRow& r) {
    std::lock_guard lock(mu_);
    out_ << state_line(id, r);
    out_.flush();
  }

 private:
  std::ofstream out_;
  std::mutex mu_;
};

inline void compact_state(const fs::path& store, const std::map<BookId, StateRow>& rows) {
  std::string out;
  for (const auto& [id, r] : rows) out += state_line(id, r);
  write_file_atomic(state_path(store), out);
}

/// `123.txt` -> (123, none), `123-0.txt` -> (123, 0).
inline std::optional<std::pair<BookId, std::optional<std::uint64_t>>> parse_stem(const fs::path& p) {
  static const std::regex stem("([0-9]+)(?:-([0-9]+))?");
  if (p.extension() != ".txt") return std::nullopt;
  const auto s = p.stem().string();
  std::smatch m;
  if (!std::regex_match(s, m, stem)) return std::nullopt;
  try {
    const BookId id = std::stoull(m[1].str());
    if (id == 0) return std::nullopt;
    std::optional<std::uint64_t> suffix;
    if (m[2].matched) suffix = std::stoull(m[2].str());
    return std::pair{id, suffix};
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

inline std::int64_t file_stamp(const fs::path& p) {
  const auto sys = std::chrono::file_clock::to_sys(fs::last_write_time(p));
  return static_cast<std::int64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch()).count());
}

/// PG mirror directory of a book: digits except the last, then the id.
inline std::string book_dir(BookId id) {
  const auto s = std::to_string(id);
  if (s.size() == 1) return "0/" + s;
  std::string dir;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    dir += s[i];
    dir += '/';
  }
  return dir + s;
}

inline std::string metadata_source(BookId id) {
  return "cache/epub/" + std::to_string(id) + "/pg" + std::to_string(id) + ".rdf";
}

inline fs::path metadata_target(const fs::path& store, BookId id) {
  return store / "metadata" / ("pg" + std::to_string(id) + ".rdf");
}

inline bool skipped_component(const fs::path& rel) {
  for (const auto& part : rel) {
    const auto s = part.string();
    if (s.empty()) continue;
    if (s.front() == '.' && s != "." && s != "..") return true;
    if (s == "old") return true;
  }
  return false;
}

/// Writes `data` unless the target already holds exactly these bytes.
inline bool write_if_changed(const fs::path& path, std::string_view data) {
  std::error_code ec;
  if (fs::exists(path, ec) && fs::file_size(path, ec) == data.size() && read_file(path) == data) return false;
  write_file_atomic(path, data);
  return true;
}

/// Shared per-book selection. `fetch(c)` returns the bytes of candidate c or
/// throws; candidates are tried from the best version down until one is UTF-8.
template <typename Fetch>
void sync_book(BookId id, std::vector<Candidate> cands, const fs::path& store,
               const std::map<BookId, StateRow>& state, StateJournal& journal, SyncReport& report,
               std::mutex& report_mu, Fetch&& fetch, Logger& log) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return b.key < a.key; });
  const auto target = artifact_path(store, "raw", id);
  const auto known = state.find(id);
  std::size_t rejected_here = 0;
  std::vector<std::pair<BookId, std::string>> rejected;
  for (const auto& c : cands) {
    const StateRow row{c.source, c.size, c.key.stamp};
    std::error_code ec;
    if (known != state.end() && known->second == row && fs::exists(target, ec)) {
      std::lock_guard lock(report_mu);
      ++report.skipped_up_to_date;
      report.duplicates_resolved += cands.size() - 1;
      report.rejected_non_utf8 += rejected_here;
      report.rejected.insert(report.rejected.end(), rejected.begin(), rejected.end());
      return;
    }
    const std::string bytes = fetch(c);
    if (const auto v = validate_bytes(bytes); !accepted(v)) {
      log.warn(std::to_string(id), "rejected " + c.source + ": " + std::get<Reject>(v).reason);
      ++rejected_here;
      rejected.emplace_back(id, c.source);
      continue;
    }
    write_file_atomic(target, bytes);
    journal.record(id, {c.source, bytes.size(), c.key.stamp});
    std::lock_guard lock(report_mu);
    ++report.downloaded;
    report.duplicates_resolved += cands.size() - 1;
    report.rejected_non_utf8 += rejected_here;
    report.rejected.insert(report.rejected.end(), rejected.begin(), rejected.end());
    return;
  }
  std::lock_guard lock(report_mu);
  report.rejected_non_utf8 += rejected_here;
  report.rejected.insert(report.rejected.end(), rejected.begin(), rejected.end());
  report.failures.emplace_back(id, cands.empty() ? "not found on mirror" : "no UTF-8 version on mirror");
}

inline void finish(const fs::path& store, SyncReport& report) {
  std::sort(report.failures.begin(), report.failures.end());
  std::sort(report.rejected.begin(), report.rejected.end());
  compact_state(store, load_state(store));
}

}  // namespace detail

/// Filesystem mirror: every `<id>.txt` / `<id>-<n>.txt` below `mirror`
/// (hidden entries and `old/` directories excluded), plus
/// `cache/epub/<id>/pg<id>.rdf` metadata.
inline SyncReport sync_mirror(const fs::path& mirror, const fs::path& store, const SyncOptions& opt = {},
                              Logger& log = Logger::null()) {
  std::error_code ec;
  if (!fs::is_directory(mirror, ec)) throw EndpointUnreachable("mirror directory not found: " + mirror.string());
  fs::create_directories(store / "raw");

  std::map<BookId, std::vector<Candidate>> found;
  std::set<BookId> with_metadata;
  auto it = fs::recursive_directory_iterator(mirror, fs::directory_options::skip_permission_denied);
  for (; it != fs::recursive_directory_iterator(); ++it) {
    const auto rel = fs::relative(it->path(), mirror);
    if (detail::skipped_component(rel)) {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    const auto name = it->path().filename().string();
    if (name.starts_with("pg") && it->path().extension() == ".rdf") {
      BookId id = 0;
      const auto digits = std::string_view(name).substr(2, name.size() - 6);
      auto [p, e] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
      if (e == std::errc() && p == digits.data() + digits.size() && rel.generic_string() == detail::metadata_source(id))
        with_metadata.insert(id);
      continue;
    }
    const auto parsed = detail::parse_stem(it->path());
    if (!parsed) continue;
    if (opt.ids && !opt.ids->count(parsed->first)) continue;
    Candidate c;
    c.source = rel.generic_string();
    c.size = it->file_size();
    c.key = {static_cast<int>(std::distance(rel.begin(), rel.end())), parsed->second,
             detail::file_stamp(it->path()), c.source};
    found[parsed->first].push_back(std::move(c));
  }

  SyncReport report;
  std::mutex report_mu;
  if (opt.metadata) {
    std::vector<BookId> meta_ids;
    for (BookId id : with_metadata)
      if (!opt.ids || opt.ids->count(id)) meta_ids.push_back(id);
    std::atomic<std::size_t> fetched{0};
    parallel_for(meta_ids.size(), opt.max_parallel, [&](std::size_t i) {
      const BookId id = meta_ids[i];
      if (detail::write_if_changed(detail::metadata_target(store, id),
                                   read_file(mirror / detail::metadata_source(id))))
        ++fetched;
    });
    report.metadata_fetched = fetched;
  }
  if (!opt.text) return report;

  std::vector<BookId> ids;
  if (opt.ids) {
    ids.assign(opt.ids->begin(), opt.ids->end());
  } else {
    for (const auto& [id, _] : found) ids.push_back(id);
  }
  const auto state = detail::load_state(store);
  detail::StateJournal journal(store);
  parallel_for(ids.size(), opt.max_parallel, [&](std::size_t i) {
    const BookId id = ids[i];
    const auto f = found.find(id);
    auto cands = f == found.end() ? std::vector<Candidate>{} : f->second;
    try {
      detail::sync_book(id, std::move(cands), store, state, journal, report, report_mu,
                        [&](const Candidate& c) { return read_file(mirror / c.source); }, log);
    } catch (const Error& e) {
      std::lock_guard lock(report_mu);
      report.failures.emplace_back(id, e.what());
    }
  });
  detail::finish(store, report);
  return report;
}

namespace detail {

struct Endpoint {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // no trailing slash
};

inline Endpoint parse_endpoint(std::string_view url) {
  static const std::regex re("(https?://[^/]+)(/.*)?");
  std::cmatch m;
  if (!std::regex_match(url.data(), url.data() + url.size(), m, re))
    throw InvalidQuery("mirror URL must be http(s)://host[:port][/path]: " + std::string(url));
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {m[1].str(), path};
}

/// RFC 7231 IMF-fixdate to seconds since the epoch; 0 if unparseable.
inline std::int64_t parse_http_date(const std::string& s) {
  std::tm tm{};
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  in >> std::get_time(&tm, "%a, %d %b %Y %H:%M:%S GMT");
  if (in.fail()) return 0;
  return static_cast<std::int64_t>(timegm(&tm));
}

class HttpMirror {
 public:
  HttpMirror(Endpoint ep, RetryPolicy retry) : ep_(std::move(ep)), retry_(retry) {}

  /// Any HTTP response proves the endpoint is reachable.
  void probe() const {
    auto cli = client();
    for (int attempt = 0;; ++attempt) {
      if (auto res = cli.Head(ep_.base_path.empty() ? "/" : ep_.base_path + "/")) return;
      if (attempt >= retry_.retries) throw EndpointUnreachable("no response from " + ep_.origin);
      backoff(attempt);
    }
  }

  /// HEAD a mirror-relative path; nullopt on 404.
  std::optional<Candidate> head(const std::string& rel) const {
    auto res = with_retries([&](httplib::Client& cli) { return cli.Head(url(rel)); });
    if (res->status == 404 || res->status == 410) return std::nullopt;
    if (res->status != 200) throw IoError("HEAD " + rel + ": HTTP " + std::to_string(res->status));
    Candidate c;
    c.source = rel;
    if (res->has_header("Content-Length")) c.size = std::stoull(res->get_header_value("Content-Length"));
    c.key.stamp = res->has_header("Last-Modified") ? parse_http_date(res->get_header_value("Last-Modified")) : 0;
    return c;
  }

  /// GET with resume: bytes already in `partial` are kept when the server
  /// honors a Range request.
  std::string get(const std::string& rel, const fs::path& partial) const {
    fs::create_directories(partial.parent_path());
    for (int attempt = 0;; ++attempt) {
      std::error_code ec;
      const auto have = fs::exists(partial, ec) ? fs::file_size(partial, ec) : 0;
      httplib::Headers headers;
      if (have > 0) headers.emplace("Range", "bytes=" + std::to_string(have) + "-");
      std::ofstream out;
      auto cli = client();
      auto res = cli.Get(
          url(rel), headers,
          [&](const httplib::Response& r) {
            const bool resumed = r.status == 206;
            if (r.status != 200 && !resumed) return true;
            out.open(partial, std::ios::binary | (resumed ? std::ios::app : std::ios::trunc));
            return static_cast<bool>(out);
          },
          [&](const char* data, std::size_t n) {
            out.write(data, static_cast<std::streamsize>(n));
            return static_cast<bool>(out);
          });
      out.close();
      if (res && (res->status == 200 || res->status == 206)) {
        std::string bytes = read_file(partial);
        fs::remove(partial, ec);
        return bytes;
      }
      if (res && res->status == 416) {
        fs::remove(partial, ec);  // stale partial longer than the file
      } else if (res && res->status < 500) {
        throw IoError("GET " + rel + ": HTTP " + std::to_string(res->status));
      }
      if (attempt >= retry_.retries)
        throw IoError("GET " + rel + ": " + (res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error())));
      backoff(attempt);
    }
  }

  std::optional<std::string> get_small(const std::string& rel) const {
    auto res = with_retries([&](httplib::Client& cli) { return cli.Get(url(rel)); });
    if (res->status == 404 || res->status == 410) return std::nullopt;
    if (res->status != 200) throw IoError("GET " + rel + ": HTTP " + std::to_string(res->status));
    return res->body;
  }

 private:
  httplib::Client client() const {
    httplib::Client cli(ep_.origin);
    cli.set_connection_timeout(std::chrono::seconds(10));
    cli.set_read_timeout(std::chrono::seconds(60));
    cli.set_follow_location(true);
    return cli;
  }

  std::string url(const std::string& rel) const { return ep_.base_path + "/" + rel; }

  void backoff(int attempt) const { std::this_thread::sleep_for(retry_.initial_backoff * (1 << attempt)); }

  template <typename Fn>
  httplib::Result with_retries(Fn&& fn) const {
    for (int attempt = 0;; ++attempt) {
      auto cli = client();
      auto res = fn(cli);
      if (res && res->status < 500) return res;
      if (attempt >= retry_.retries)
        throw IoError(res ? "HTTP " + std::to_string(res->status) : "transport error: " + httplib::to_string(res.error()));
      backoff(attempt);
    }
  }

  Endpoint ep_;
  RetryPolicy retry_;
};

}  // namespace detail

/// HTTP(S) mirror laid out like gutenberg.org's: `<dir>/<id>-0.txt`,
/// `<dir>/<id>.txt`, `<dir>/<id>-8.txt`. Needs explicit ids, since a web
/// mirror cannot be listed.
inline SyncReport sync_http_mirror(std::string_view base_url, const fs::path& store, const SyncOptions& opt,
                                   Logger& log = Logger::null()) {
  if (!opt.ids || opt.ids->empty()) throw InvalidQuery("HTTP sync needs an explicit id set");
  const detail::HttpMirror mirror(detail::parse_endpoint(base_url), opt.retry);
  mirror.probe();
  fs::create_directories(store / "raw");
  const std::vector<BookId> ids(opt.ids->begin(), opt.ids->end());

  SyncReport report;
  std::mutex report_mu;
  if (opt.metadata) {
    std::atomic<std::size_t> fetched{0};
    parallel_for(ids.size(), opt.max_parallel, [&](std::size_t i) {
      try {
        if (auto rdf = mirror.get_small(detail::metadata_source(ids[i])))
          if (detail::write_if_changed(detail::metadata_target(store, ids[i]), *rdf)) ++fetched;
      } catch (const Error& e) {
        log.warn(std::to_string(ids[i]), std::string("metadata: ") + e.what());
      }
    });
    report.metadata_fetched = fetched;
  }
  if (!opt.text) return report;

  const auto state = detail::load_state(store);
  detail::StateJournal journal(store);
  parallel_for(ids.size(), opt.max_parallel, [&](std::size_t i) {
    const BookId id = ids[i];
    const auto dir = detail::book_dir(id);
    const auto depth = static_cast<int>(std::count(dir.begin(), dir.end(), '/')) + 2;
    try {
      std::vector<Candidate> cands;
      const std::pair<std::string, std::optional<std::uint64_t>> names[] = {
          {std::to_string(id) + "-0.txt", 0}, {std::to_string(id) + ".txt", std::nullopt},
          {std::to_string(id) + "-8.txt", 8}};
      for (const auto& [name, suffix] : names) {
        if (auto c = mirror.head(dir + "/" + name)) {
          c->key.depth = depth;
          c->key.suffix = suffix;
          c->key.path = c->source;
          cands.push_back(std::move(*c));
        }
      }
      // One partial file per (source, upstream stamp): a changed upstream
      // file never resumes onto stale bytes.
      const auto partial_for = [&](const Candidate& c) {
        std::string name = c.source;
        std::replace(name.begin(), name.end(), '/', '_');
        return store / "raw" / ".partial" / (name + "." + std::to_string(c.key.stamp) + ".part");
      };
      detail::sync_book(id, std::move(cands), store, state, journal, report, report_mu,
                        [&](const Candidate& c) { return mirror.get(c.source, partial_for(c)); }, log);
    } catch (const Error& e) {
      log.error(std::to_string(id), e.what());
      std::lock_guard lock(report_mu);
      report.failures.emplace_back(id, e.what());
    }
  });
  detail::finish(store, report);
  return report;
}

}  // namespace spgc::acquisition
