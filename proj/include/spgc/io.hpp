#pragma once

// File helpers shared by the pipeline stages. All artifact writes go through
// write_file_atomic so an interrupted run never leaves a partial artifact.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "spgc/error.hpp"

namespace spgc {

namespace fs = std::filesystem;

using BookId = std::uint64_t;

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return data;
}

/// Writes via a sibling temporary file and rename(2).
inline void write_file_atomic(const fs::path& path, std::string_view data) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << std::this_thread::get_id() << "."
           << counter.fetch_add(1);
  const fs::path tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("rename failed: " + path.string());
  }
}

/// `<root>/<level>/PG<id>_<level>.txt`
inline fs::path artifact_path(const fs::path& root, std::string_view level, BookId id) {
  return root / std::string(level) /
         ("PG" + std::to_string(id) + "_" + std::string(level) + ".txt");
}

inline std::vector<std::string_view> split_view(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim_ascii(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Line-oriented log: `level<TAB>book<TAB>message`.
class Logger {
 public:
  enum class Level { Debug, Info, Warn, Error };

  explicit Logger(std::ostream* sink = &std::cerr, Level min = Level::Info)
      : sink_(sink), min_(min) {}

  void log(Level level, std::string_view book, std::string_view message) {
    if (!sink_ || level < min_) return;
    std::string line;
    line.reserve(16 + book.size() + message.size());
    line += name(level);
    line += '\t';
    line += book.empty() ? std::string_view("-") : book;
    line += '\t';
    for (char c : message) line += (c == '\n' || c == '\t') ? ' ' : c;
    line += '\n';
    std::lock_guard lock(mu_);
    *sink_ << line;
  }

  void info(std::string_view book, std::string_view msg) { log(Level::Info, book, msg); }
  void warn(std::string_view book, std::string_view msg) { log(Level::Warn, book, msg); }
  void error(std::string_view book, std::string_view msg) { log(Level::Error, book, msg); }
  void debug(std::string_view book, std::string_view msg) { log(Level::Debug, book, msg); }

  static Logger& null() {
    static Logger quiet(nullptr);
    return quiet;
  }

 private:
  static std::string_view name(Level l) {
    switch (l) {
      case Level::Debug: return "DEBUG";
      case Level::Info: return "INFO";
      case Level::Warn: return "WARN";
      case Level::Error: return "ERROR";
    }
    return "INFO";
  }

  std::ostream* sink_;
  Level min_;
  std::mutex mu_;
};

}  // namespace spgc
