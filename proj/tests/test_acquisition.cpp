#include <gtest/gtest.h>

#include <random>

#include "spgc/acquisition.hpp"

namespace {

using namespace spgc;
using namespace spgc::acquisition;

/// Independent RFC 3629 check, written as the textbook byte-range table.
bool oracle_utf8(std::string_view s) {
  std::size_t i = 0;
  const auto in = [&](std::size_t k, int lo, int hi) {
    if (i + k >= s.size()) return false;
    const int b = static_cast<unsigned char>(s[i + k]);
    return b >= lo && b <= hi;
  };
  while (i < s.size()) {
    const int b = static_cast<unsigned char>(s[i]);
    if (b <= 0x7F) { i += 1; continue; }
    if (b >= 0xC2 && b <= 0xDF && in(1, 0x80, 0xBF)) { i += 2; continue; }
    if (b == 0xE0 && in(1, 0xA0, 0xBF) && in(2, 0x80, 0xBF)) { i += 3; continue; }
    if (((b >= 0xE1 && b <= 0xEC) || b == 0xEE || b == 0xEF) && in(1, 0x80, 0xBF) && in(2, 0x80, 0xBF)) { i += 3; continue; }
    if (b == 0xED && in(1, 0x80, 0x9F) && in(2, 0x80, 0xBF)) { i += 3; continue; }
    if (b == 0xF0 && in(1, 0x90, 0xBF) && in(2, 0x80, 0xBF) && in(3, 0x80, 0xBF)) { i += 4; continue; }
    if (b >= 0xF1 && b <= 0xF3 && in(1, 0x80, 0xBF) && in(2, 0x80, 0xBF) && in(3, 0x80, 0xBF)) { i += 4; continue; }
    if (b == 0xF4 && in(1, 0x80, 0x8F) && in(2, 0x80, 0xBF) && in(3, 0x80, 0xBF)) { i += 4; continue; }
    return false;
  }
  return true;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void put(const fs::path& p, std::string_view data, int age_seconds = 1000) {
  write_file_atomic(p, data);
  fs::last_write_time(p, fs::file_time_type::clock::now() - std::chrono::seconds(age_seconds));
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  return files;
}

TEST(Acquisition, ResolveDuplicate) {
  Candidate a{"a", {0, std::nullopt, 0, "a"}, 1};
  EXPECT_EQ(resolve_duplicate({a}).source, "a");
  Candidate two{"x/2", {2, std::nullopt, 0, "x/2"}, 1};
  Candidate seven{"x/7", {7, std::nullopt, 0, "x/7"}, 1};
  EXPECT_EQ(resolve_duplicate({seven, two}).source, "x/7");
  EXPECT_EQ(resolve_duplicate({two, seven}).source, "x/7");
  Candidate p{"b/p", {3, 0, 5, "b/p"}, 1};
  Candidate q{"b/q", {3, 0, 5, "b/q"}, 1};
  EXPECT_EQ(resolve_duplicate({q, p}).source, "b/q");
  EXPECT_THROW(resolve_duplicate({}), Error);
}

TEST(Acquisition, VersionKeyOrdering) {
  const VersionKey none{4, std::nullopt, 99, "z"};
  const VersionKey zero{4, 0, 1, "a"};
  const VersionKey eight{4, 8, 1, "a"};
  const VersionKey shallow{3, 9, 999, "zz"};
  EXPECT_LT(none, zero);
  EXPECT_LT(zero, eight);
  EXPECT_LT(shallow, none);
  EXPECT_LT((VersionKey{4, 0, 1, "a"}), (VersionKey{4, 0, 2, "a"}));
}

TEST(Acquisition, ValidateEncoding) {
  TempDir dir("spgc_validate");
  put(dir.path() / "ascii.txt", "plain ascii\n");
  put(dir.path() / "ff.txt", std::string("bad \xff byte"));
  put(dir.path() / "accents.txt", "caf\xc3\xa9 na\xc3\xafve \xe2\x80\x94 \xf0\x9f\x98\x80");
  EXPECT_TRUE(accepted(validate_encoding(dir.path() / "ascii.txt")));
  EXPECT_FALSE(accepted(validate_encoding(dir.path() / "ff.txt")));
  EXPECT_TRUE(accepted(validate_encoding(dir.path() / "accents.txt")));
  EXPECT_THROW(validate_encoding(dir.path() / "missing.txt"), IoError);
}

TEST(Acquisition, ValidationAgreesWithOracleOnRandomBytes) {
  std::mt19937_64 rng(1234);
  const std::vector<unsigned char> interesting = {0x00, 0x41, 0x7F, 0x80, 0xBF, 0xC0, 0xC1, 0xC2, 0xDF, 0xE0,
                                                  0xED, 0xEF, 0xF0, 0xF4, 0xF5, 0xFF, 0x9F, 0xA0, 0x8F, 0x90};
  for (int trial = 0; trial < 20000; ++trial) {
    std::string s(rng() % 12, '\0');
    for (auto& c : s) c = static_cast<char>(rng() % 3 ? interesting[rng() % interesting.size()] : rng() % 256);
    const bool ok = accepted(validate_bytes(s));
    ASSERT_EQ(ok, oracle_utf8(s)) << trial;
    if (ok) {
      EXPECT_EQ(unicode::encode(unicode::decode(s)), s);
    }
  }
}

TEST(Acquisition, IdListAndBookDirs) {
  EXPECT_EQ(parse_id_list("1\n# comment\n\n 42 \n7 # trailing\n"), (std::set<BookId>{1, 7, 42}));
  EXPECT_THROW(parse_id_list("12x\n"), InvalidQuery);
  EXPECT_EQ(detail::book_dir(7), "0/7");
  EXPECT_EQ(detail::book_dir(42), "4/42");
  EXPECT_EQ(detail::book_dir(12345), "1/2/3/4/12345");
}

struct Mirror {
  TempDir dir{"spgc_mirror"};
  Mirror() {
    for (BookId id : {1, 2, 3, 11, 12}) {
      const auto rel = detail::book_dir(id) + "/" + std::to_string(id) + "-0.txt";
      put(dir.path() / rel, "Book " + std::to_string(id) + "\nbody caf\xc3\xa9\n");
    }
  }
  const fs::path& root() const { return dir.path(); }
};

TEST(Acquisition, FilesystemSyncAndIdempotence) {
  Mirror mirror;
  TempDir store("spgc_store_a");
  const auto r1 = sync_mirror(mirror.root(), store.path());
  EXPECT_EQ(r1.downloaded, 5u);
  EXPECT_TRUE(r1.failures.empty());
  EXPECT_EQ(read_file(store.path() / "raw" / "PG11_raw.txt"), "Book 11\nbody caf\xc3\xa9\n");
  const auto before = snapshot(store.path());
  const auto r2 = sync_mirror(mirror.root(), store.path());
  EXPECT_EQ(r2.downloaded, 0u);
  EXPECT_EQ(r2.skipped_up_to_date, 5u);
  EXPECT_EQ(snapshot(store.path()), before);
  EXPECT_EQ(RawStore::open(store.path()).layout.size(), 5u);

  put(mirror.root() / "1/12/12-0.txt", "Book 12 revised\n", 10);
  const auto r3 = sync_mirror(mirror.root(), store.path());
  EXPECT_EQ(r3.downloaded, 1u);
  EXPECT_EQ(r3.skipped_up_to_date, 4u);
  EXPECT_EQ(read_file(store.path() / "raw" / "PG12_raw.txt"), "Book 12 revised\n");
}

TEST(Acquisition, DuplicatesEncodingAndSkippedPaths) {
  Mirror mirror;
  const auto& m = mirror.root();
  put(m / "4/42/42.txt", "old ascii edition\n", 5000);
  put(m / "4/42/42-0.txt", "new utf-8 edition \xc3\xa9\n", 100);
  put(m / "0/7/7.txt", "seven in ascii\n");
  put(m / "0/7/7-8.txt", std::string("seven in latin-1 \xe9\n"));
  put(m / "0/9/9-8.txt", std::string("nine only latin-1 \xe9\n"));
  put(m / "4/43/old/43-0.txt", "archived\n");
  put(m / "4/43/.43-0.txt", "hidden\n");
  put(m / "4/44/44-h.htm.txt", "not a plain text stem\n");
  put(m / "cache/epub/42/pg42.rdf", "<rdf/>");

  TempDir store("spgc_store_b");
  SyncOptions opt;
  opt.ids = std::set<BookId>{1, 7, 9, 42, 43};
  const auto r = sync_mirror(m, store.path(), opt);

  std::vector<Candidate> cands;
  for (const char* rel : {"4/42/42.txt", "4/42/42-0.txt"}) {
    const auto stem = detail::parse_stem(rel);
    cands.push_back({rel, {3, stem->second, detail::file_stamp(m / rel), rel}, 0});
  }
  EXPECT_EQ(read_file(store.path() / "raw" / "PG42_raw.txt"), read_file(m / resolve_duplicate(cands).source));
  EXPECT_EQ(r.downloaded, 3u);  // 1, 7, 42
  EXPECT_EQ(r.duplicates_resolved, 2u);  // one discarded candidate each for 7 and 42
  EXPECT_EQ(r.rejected_non_utf8, 2u);
  EXPECT_EQ(r.rejected, (std::vector<std::pair<BookId, std::string>>{{7, "0/7/7-8.txt"}, {9, "0/9/9-8.txt"}}));
  EXPECT_EQ(read_file(store.path() / "raw" / "PG7_raw.txt"), "seven in ascii\n");
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_EQ(r.failures[0].first, 9u);
  EXPECT_EQ(r.failures[1].first, 43u);
  EXPECT_EQ(r.metadata_fetched, 1u);
  EXPECT_EQ(read_file(store.path() / "metadata" / "pg42.rdf"), "<rdf/>");
  for (const auto& [id, path] : RawStore::open(store.path()).layout)
    EXPECT_TRUE(accepted(validate_encoding(path))) << id;
}

TEST(Acquisition, MetadataOnlySync) {
  Mirror mirror;
  put(mirror.root() / "cache/epub/3/pg3.rdf", "<three/>");
  put(mirror.root() / "cache/epub/5/pg5.rdf", "<five/>");
  TempDir store("spgc_store_meta");
  SyncOptions opt;
  opt.text = false;
  const auto r = sync_mirror(mirror.root(), store.path(), opt);
  EXPECT_EQ(r.metadata_fetched, 2u);
  EXPECT_EQ(r.downloaded, 0u);
  EXPECT_TRUE(RawStore::open(store.path()).layout.empty());
  EXPECT_EQ(sync_mirror(mirror.root(), store.path(), opt).metadata_fetched, 0u);
}

TEST(Acquisition, ResumesFromJournal) {
  Mirror mirror;
  TempDir store("spgc_store_c");
  sync_mirror(mirror.root(), store.path());
  // Simulate a run killed after two books: journal holds only their rows, one torn.
  const auto state = read_file(detail::state_path(store.path()));
  const auto lines = split_view(state, '\n');
  write_file_atomic(detail::state_path(store.path()),
                    std::string(lines[0]) + "\n" + std::string(lines[1]) + "\n" + "3\t0/3/3-0");
  const auto r = sync_mirror(mirror.root(), store.path());
  EXPECT_EQ(r.skipped_up_to_date, 2u);
  EXPECT_EQ(r.downloaded, 3u);
  EXPECT_EQ(read_file(detail::state_path(store.path())), state);
}

TEST(Acquisition, MissingMirrorIsFatal) {
  TempDir store("spgc_store_d");
  EXPECT_THROW(sync_mirror(store.path() / "nope", store.path()), EndpointUnreachable);
}

class HttpFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    files_["/pg/0/1/1-0.txt"] = "one \xc3\xa9\n";
    files_["/pg/0/1/1.txt"] = "one ascii\n";
    files_["/pg/0/2/2.txt"] = std::string(5000, 'x') + "\n";
    files_["/pg/0/3/3-8.txt"] = "three \xe9\n";
    files_["/pg/cache/epub/1/pg1.rdf"] = "<one/>";
    server_.Get("/.*", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      ++hits_[req.path];
      if (req.has_header("Range")) ranges_.push_back(req.get_header_value("Range"));
      if (flaky_ > 0 && req.path == "/pg/0/2/2.txt" && req.method == "GET") {
        --flaky_;
        res.status = 503;
        return;
      }
      const auto it = files_.find(req.path);
      if (it == files_.end()) {
        res.status = 404;
        return;
      }
      res.set_header("Last-Modified", "Tue, 15 Nov 1994 08:12:31 GMT");
      res.set_content(it->second, "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/pg"; }
  SyncOptions options(std::set<BookId> ids) const {
    SyncOptions opt;
    opt.ids = std::move(ids);
    opt.retry.initial_backoff = std::chrono::milliseconds(1);
    return opt;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::map<std::string, std::string> files_;
  std::map<std::string, int> hits_;
  std::vector<std::string> ranges_;
  int flaky_ = 0;
};

TEST_F(HttpFixture, SyncsPicksLatestAndIsIncremental) {
  TempDir store("spgc_store_http");
  flaky_ = 2;
  const auto r = sync_http_mirror(url(), store.path(), options({1, 2, 3, 4}));
  EXPECT_EQ(r.downloaded, 2u);
  EXPECT_EQ(r.duplicates_resolved, 1u);
  EXPECT_EQ(r.rejected_non_utf8, 1u);
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_EQ(r.failures[0].first, 3u);
  EXPECT_EQ(r.failures[1].first, 4u);
  EXPECT_EQ(read_file(store.path() / "raw" / "PG1_raw.txt"), "one \xc3\xa9\n");
  EXPECT_EQ(read_file(store.path() / "raw" / "PG2_raw.txt"), files_["/pg/0/2/2.txt"]);
  EXPECT_EQ(read_file(store.path() / "metadata" / "pg1.rdf"), "<one/>");
  EXPECT_EQ(flaky_, 0);

  const auto r2 = sync_http_mirror(url(), store.path(), options({1, 2}));
  EXPECT_EQ(r2.downloaded, 0u);
  EXPECT_EQ(r2.skipped_up_to_date, 2u);
}

TEST_F(HttpFixture, ResumesPartialDownloadWithRange) {
  TempDir store("spgc_store_http_resume");
  const auto& body = files_["/pg/0/2/2.txt"];
  const auto stamp = detail::parse_http_date("Tue, 15 Nov 1994 08:12:31 GMT");
  EXPECT_EQ(stamp, 784887151);
  write_file_atomic(store.path() / "raw" / ".partial" / ("0_2_2.txt." + std::to_string(stamp) + ".part"),
                    body.substr(0, 1200));
  const auto r = sync_http_mirror(url(), store.path(), options({2}));
  EXPECT_EQ(r.downloaded, 1u);
  EXPECT_EQ(read_file(store.path() / "raw" / "PG2_raw.txt"), body);
  ASSERT_EQ(ranges_.size(), 1u);
  EXPECT_EQ(ranges_[0], "bytes=1200-");
}

TEST(AcquisitionHttp, UnreachableEndpoint) {
  TempDir store("spgc_store_unreachable");
  SyncOptions opt;
  opt.ids = std::set<BookId>{1};
  opt.retry.initial_backoff = std::chrono::milliseconds(1);
  // Port 9 (discard) on loopback has no listener in the test sandbox.
  EXPECT_THROW(sync_http_mirror("http://127.0.0.1:9", store.path(), opt), EndpointUnreachable);
  EXPECT_THROW(sync_http_mirror("ftp://example", store.path(), opt), InvalidQuery);
  opt.ids.reset();
  EXPECT_THROW(sync_http_mirror("http://127.0.0.1:9", store.path(), opt), InvalidQuery);
}

}  // namespace
