#pragma once

// Project Gutenberg metadata: per-book RDF records, bookshelf listings, and
// label catalogs built from them.

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "spgc/error.hpp"
#include "spgc/io.hpp"
#include "spgc/parallel.hpp"

namespace spgc::catalog {

enum class MediaType { Text, Other };

struct BookMetadata {
  BookId id = 0;
  std::string title;
  std::optional<std::string> author_name;
  std::optional<int> author_birth_year;
  std::optional<int> author_death_year;
  std::vector<std::string> languages;
  std::set<std::string> subjects;
  std::set<std::string> bookshelves;
  std::optional<std::uint64_t> downloads;
  MediaType media_type = MediaType::Text;

  bool operator==(const BookMetadata&) const = default;
};

using Catalog = std::map<BookId, BookMetadata>;

/// Years t with birth + 20 < t < death, as a closed interval.
inline std::optional<std::pair<int, int>> compatible_years(const BookMetadata& m) {
  if (!m.author_birth_year || !m.author_death_year) return std::nullopt;
  const int first = *m.author_birth_year + 21;
  const int last = *m.author_death_year - 1;
  if (first > last) return std::nullopt;
  return std::pair{first, last};
}

namespace detail {

using boost::property_tree::ptree;

inline std::string_view local_name(std::string_view key) {
  const auto colon = key.rfind(':');
  return colon == std::string_view::npos ? key : key.substr(colon + 1);
}

inline const ptree* child(const ptree& node, std::string_view name) {
  for (const auto& [key, sub] : node)
    if (local_name(key) == name) return &sub;
  return nullptr;
}

template <typename Fn>
void for_each_child(const ptree& node, std::string_view name, Fn&& fn) {
  for (const auto& [key, sub] : node)
    if (local_name(key) == name) fn(sub);
}

inline std::optional<std::string> attribute(const ptree& node, std::string_view name) {
  const auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  for (const auto& [key, value] : *attrs)
    if (local_name(key) == name) return value.data();
  return std::nullopt;
}

inline std::string trimmed(const std::string& s) { return std::string(trim_ascii(s)); }

/// Text of an rdf:value under an rdf:Description, plus the vocabulary it is a member of.
struct Described {
  std::string value;
  std::string member_of;
};

inline std::vector<Described> described_values(const ptree& node) {
  std::vector<Described> out;
  for_each_child(node, "Description", [&](const ptree& desc) {
    std::string member;
    if (const auto* m = child(desc, "memberOf"))
      member = attribute(*m, "resource").value_or("");
    for_each_child(desc, "value", [&](const ptree& v) { out.push_back({trimmed(v.data()), member}); });
  });
  // Some older records put a bare literal under the property.
  if (out.empty() && !trim_ascii(node.data()).empty()) out.push_back({trimmed(node.data()), ""});
  return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim_ascii(s);
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::string ascii_lower(std::string s) {
  for (auto& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

inline std::optional<BookId> id_from_about(std::string_view about) {
  const auto slash = about.rfind('/');
  const auto digits = slash == std::string_view::npos ? about : about.substr(slash + 1);
  auto id = parse_int<BookId>(digits);
  if (!id || *id == 0) return std::nullopt;
  return id;
}

inline bool is_lcsh(std::string_view member) { return member.ends_with("/LCSH") || member == "LCSH"; }

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Parses one RDF/XML record (the `pg<id>.rdf` files of the PG catalog feed).
/// Only LCSH subject headings are kept as subjects; the first creator is the author.
inline BookMetadata parse_metadata_record(std::string_view record) {
  using detail::ptree;
  ptree doc;
  try {
    std::istringstream in{std::string(record)};
    boost::property_tree::read_xml(in, doc);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw MalformedRecord(std::string("unparseable metadata record: ") + e.what());
  }
  const ptree* rdf = detail::child(doc, "RDF");
  if (!rdf) throw MalformedRecord("metadata record has no rdf:RDF root");
  const ptree* ebook = detail::child(*rdf, "ebook");
  if (!ebook) throw MissingId("metadata record has no pgterms:ebook entry");
  const auto about = detail::attribute(*ebook, "about");
  const auto id = about ? detail::id_from_about(*about) : std::nullopt;
  if (!id) throw MissingId("metadata record has no usable identifier");

  BookMetadata m;
  m.id = *id;
  if (const auto* t = detail::child(*ebook, "title")) m.title = detail::trimmed(t->data());

  if (const auto* creator = detail::child(*ebook, "creator")) {
    const ptree* agent = detail::child(*creator, "agent");
    if (agent) {
      if (const auto* n = detail::child(*agent, "name")) {
        auto name = detail::trimmed(n->data());
        if (!name.empty()) m.author_name = std::move(name);
      }
      if (const auto* b = detail::child(*agent, "birthdate"))
        m.author_birth_year = detail::parse_int<int>(b->data());
      if (const auto* d = detail::child(*agent, "deathdate"))
        m.author_death_year = detail::parse_int<int>(d->data());
      if (m.author_birth_year && m.author_death_year && *m.author_birth_year > *m.author_death_year) {
        m.author_birth_year.reset();
        m.author_death_year.reset();
      }
    }
  }

  detail::for_each_child(*ebook, "language", [&](const ptree& lang) {
    for (const auto& d : detail::described_values(lang)) {
      auto code = detail::ascii_lower(d.value);
      if (!code.empty() && std::find(m.languages.begin(), m.languages.end(), code) == m.languages.end())
        m.languages.push_back(std::move(code));
    }
  });
  detail::for_each_child(*ebook, "subject", [&](const ptree& subj) {
    for (const auto& d : detail::described_values(subj))
      if (!d.value.empty() && detail::is_lcsh(d.member_of)) m.subjects.insert(d.value);
  });
  detail::for_each_child(*ebook, "bookshelf", [&](const ptree& shelf) {
    for (const auto& d : detail::described_values(shelf))
      if (!d.value.empty()) m.bookshelves.insert(d.value);
  });
  if (const auto* dl = detail::child(*ebook, "downloads"))
    m.downloads = detail::parse_int<std::uint64_t>(dl->data());
  if (const auto* type = detail::child(*ebook, "type")) {
    const auto values = detail::described_values(*type);
    if (!values.empty()) m.media_type = values.front().value == "Text" ? MediaType::Text : MediaType::Other;
  }
  return m;
}

/// Serializes to the same RDF shape parse_metadata_record reads.
inline std::string to_rdf(const BookMetadata& m) {
  using detail::xml_escape;
  std::ostringstream o;
  const auto described = [&](std::string_view prop, std::string_view member, std::string_view value) {
    o << "    <" << prop << ">\n      <rdf:Description>\n";
    if (!member.empty()) o << "        <dcam:memberOf rdf:resource=\"" << member << "\"/>\n";
    o << "        <rdf:value>" << xml_escape(value) << "</rdf:value>\n"
      << "      </rdf:Description>\n    </" << prop << ">\n";
  };
  o << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
    << "<rdf:RDF xml:base=\"http://www.gutenberg.org/\"\n"
    << "  xmlns:dcterms=\"http://purl.org/dc/terms/\"\n"
    << "  xmlns:pgterms=\"http://www.gutenberg.org/2009/pgterms/\"\n"
    << "  xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"\n"
    << "  xmlns:dcam=\"http://purl.org/dc/dcam/\">\n"
    << "  <pgterms:ebook rdf:about=\"ebooks/" << m.id << "\">\n"
    << "    <dcterms:title>" << xml_escape(m.title) << "</dcterms:title>\n";
  if (m.author_name || m.author_birth_year || m.author_death_year) {
    o << "    <dcterms:creator>\n      <pgterms:agent>\n";
    if (m.author_name) o << "        <pgterms:name>" << xml_escape(*m.author_name) << "</pgterms:name>\n";
    if (m.author_birth_year) o << "        <pgterms:birthdate>" << *m.author_birth_year << "</pgterms:birthdate>\n";
    if (m.author_death_year) o << "        <pgterms:deathdate>" << *m.author_death_year << "</pgterms:deathdate>\n";
    o << "      </pgterms:agent>\n    </dcterms:creator>\n";
  }
  for (const auto& l : m.languages) described("dcterms:language", "", l);
  for (const auto& s : m.subjects) described("dcterms:subject", "http://purl.org/dc/terms/LCSH", s);
  for (const auto& b : m.bookshelves) described("pgterms:bookshelf", "2009/pgterms/Bookshelf", b);
  if (m.downloads) o << "    <pgterms:downloads>" << *m.downloads << "</pgterms:downloads>\n";
  described("dcterms:type", "http://purl.org/dc/terms/DCMIType",
            m.media_type == MediaType::Text ? "Text" : "Other");
  o << "  </pgterms:ebook>\n</rdf:RDF>\n";
  return o.str();
}

struct SkippedRecord {
  fs::path path;
  std::string reason;
};

struct CatalogLoad {
  Catalog books;
  std::vector<SkippedRecord> skipped;
};

/// Parses every `*.rdf` file below `dir`. Unparseable records and repeated ids
/// are skipped and listed; they never abort the load.
inline CatalogLoad load_catalog(const fs::path& dir, unsigned workers = 1, Logger& log = Logger::null()) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DirectoryUnreadable("not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  try {
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".rdf") files.push_back(e.path());
  } catch (const fs::filesystem_error& e) {
    throw DirectoryUnreadable(e.what());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::optional<BookMetadata>> parsed(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    try {
      parsed[i] = parse_metadata_record(read_file(files[i]));
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  CatalogLoad out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!parsed[i]) {
      log.warn(files[i].stem().string(), "skipped metadata record: " + errors[i]);
      out.skipped.push_back({files[i], errors[i]});
      continue;
    }
    const BookId id = parsed[i]->id;
    if (!out.books.emplace(id, std::move(*parsed[i])).second) {
      log.warn(std::to_string(id), "duplicate metadata record " + files[i].string());
      out.skipped.push_back({files[i], "duplicate id"});
    }
  }
  return out;
}

enum class LabelKind { Subject, Bookshelf };

inline std::string_view to_string(LabelKind k) { return k == LabelKind::Subject ? "subjects" : "bookshelves"; }

struct LabelCatalog {
  LabelKind kind = LabelKind::Bookshelf;
  std::map<std::string, std::set<BookId>> assignments;
  // Ids referenced by some label but missing from the metadata catalog.
  std::set<BookId> unresolved;

  bool contains(const std::string& label) const { return assignments.count(label) != 0; }

  /// Labels per book, for books carrying at least one label.
  std::map<BookId, std::vector<std::string>> by_book() const {
    std::map<BookId, std::vector<std::string>> out;
    for (const auto& [label, ids] : assignments)
      for (auto id : ids) out[id].push_back(label);
    return out;
  }

  bool operator==(const LabelCatalog&) const = default;
};

/// Marks ids the metadata catalog does not know. Nothing is dropped.
inline void flag_unresolved(LabelCatalog& labels, const Catalog& catalog) {
  labels.unresolved.clear();
  for (const auto& [label, ids] : labels.assignments)
    for (auto id : ids)
      if (!catalog.count(id)) labels.unresolved.insert(id);
}

/// Mapping file: one `label<TAB>id,id,...` line per label.
inline LabelCatalog parse_bookshelf_mapping(std::string_view data) {
  LabelCatalog lc;
  lc.kind = LabelKind::Bookshelf;
  std::size_t lineno = 0;
  for (auto line : split_view(data, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim_ascii(line).empty()) continue;
    const auto where = " on line " + std::to_string(lineno);
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw MalformedSource("expected label<TAB>ids" + where);
    const auto label = std::string(trim_ascii(line.substr(0, tab)));
    if (label.empty()) throw MalformedSource("empty label" + where);
    auto& members = lc.assignments[label];
    for (auto field : split_view(line.substr(tab + 1), ',')) {
      field = trim_ascii(field);
      if (field.empty()) continue;
      const auto id = detail::parse_int<BookId>(field);
      if (!id || *id == 0) throw MalformedSource("bad book id '" + std::string(field) + "'" + where);
      members.insert(*id);
    }
  }
  return lc;
}

inline std::string serialize_bookshelf_mapping(const LabelCatalog& lc) {
  std::string out;
  for (const auto& [label, ids] : lc.assignments) {
    out += label;
    out += '\t';
    bool first = true;
    for (auto id : ids) {
      if (!first) out += ',';
      out += std::to_string(id);
      first = false;
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::string strip_tags(std::string_view html) {
  static const std::regex tag("<[^>]*>");
  static const std::regex space("\\s+");
  std::string s = std::regex_replace(std::string(html), tag, " ");
  s = std::regex_replace(s, space, " ");
  for (auto [ent, rep] : {std::pair{"&amp;", "&"}, {"&#39;", "'"}, {"&quot;", "\""}, {"&lt;", "<"}, {"&gt;", ">"}}) {
    for (auto pos = s.find(ent); pos != std::string::npos; pos = s.find(ent, pos))
      s.replace(pos, std::string_view(ent).size(), rep);
  }
  return std::string(trim_ascii(s));
}

}  // namespace detail

/// Best-effort scrape of one saved bookshelf page: the shelf name comes from
/// the first <h1> (or <title>), members from links to /ebooks/<id>.
inline std::pair<std::string, std::set<BookId>> scrape_bookshelf_page(std::string_view html) {
  static const std::regex h1("<h1[^>]*>([\\s\\S]*?)</h1>", std::regex::icase);
  static const std::regex title("<title[^>]*>([\\s\\S]*?)</title>", std::regex::icase);
  static const std::regex link("href=\"(?:https?:)?(?://www\\.gutenberg\\.org)?/ebooks/([0-9]+)\"",
                               std::regex::icase);
  const std::string page(html);
  std::smatch m;
  std::string label;
  if (std::regex_search(page, m, h1)) label = detail::strip_tags(m[1].str());
  if (label.empty() && std::regex_search(page, m, title)) label = detail::strip_tags(m[1].str());
  for (std::string_view suffix : {" - Project Gutenberg", " (Bookshelf)", " Bookshelf"}) {
    if (label.ends_with(suffix)) label.resize(label.size() - suffix.size());
  }
  label = std::string(trim_ascii(label));
  if (label.empty()) throw MalformedSource("bookshelf page without a heading");
  std::set<BookId> ids;
  for (auto it = std::sregex_iterator(page.begin(), page.end(), link); it != std::sregex_iterator(); ++it) {
    const auto id = detail::parse_int<BookId>((*it)[1].str());
    if (id && *id > 0) ids.insert(*id);
  }
  return {label, ids};
}

/// Accepts a mapping file, one saved HTML page, or a directory of saved pages.
inline LabelCatalog load_bookshelves(const fs::path& source) {
  const auto is_html = [](const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".html" || ext == ".htm";
  };
  std::error_code ec;
  if (fs::is_directory(source, ec)) {
    std::vector<fs::path> pages;
    for (const auto& e : fs::directory_iterator(source))
      if (e.is_regular_file() && is_html(e.path())) pages.push_back(e.path());
    std::sort(pages.begin(), pages.end());
    LabelCatalog lc;
    lc.kind = LabelKind::Bookshelf;
    for (const auto& p : pages) {
      auto [label, ids] = scrape_bookshelf_page(read_file(p));
      lc.assignments[label].insert(ids.begin(), ids.end());
    }
    return lc;
  }
  if (!fs::exists(source, ec)) throw MalformedSource("bookshelf source not found: " + source.string());
  if (is_html(source)) {
    LabelCatalog lc;
    lc.kind = LabelKind::Bookshelf;
    auto [label, ids] = scrape_bookshelf_page(read_file(source));
    lc.assignments[label] = std::move(ids);
    return lc;
  }
  return parse_bookshelf_mapping(read_file(source));
}

/// Label catalog from the labels embedded in the metadata records.
inline LabelCatalog labels_from_metadata(const Catalog& catalog, LabelKind kind) {
  LabelCatalog lc;
  lc.kind = kind;
  for (const auto& [id, m] : catalog)
    for (const auto& label : kind == LabelKind::Subject ? m.subjects : m.bookshelves)
      lc.assignments[label].insert(id);
  return lc;
}

struct Query {
  std::optional<std::string> language;  // matches any listed language
  std::optional<std::string> label;     // subject or bookshelf
  std::optional<std::string> author;    // verbatim name
  std::optional<int> year_min;          // overlaps the compatible-year interval
  std::optional<int> year_max;
  std::optional<MediaType> media_type;  // defaults to Text
};

/// Conjunctive query; ascending ids.
inline std::vector<BookId> filter_catalog(const Catalog& catalog, const Query& q,
                                          const LabelCatalog* subjects = nullptr,
                                          const LabelCatalog* bookshelves = nullptr) {
  if (q.year_min && q.year_max && *q.year_min > *q.year_max)
    throw InvalidQuery("year range is empty: " + std::to_string(*q.year_min) + " > " +
                       std::to_string(*q.year_max));
  std::set<BookId> labelled;
  if (q.label) {
    bool known = false;
    for (const LabelCatalog* lc : {subjects, bookshelves}) {
      if (!lc) continue;
      const auto it = lc->assignments.find(*q.label);
      if (it == lc->assignments.end()) continue;
      known = true;
      labelled.insert(it->second.begin(), it->second.end());
    }
    if (!known) throw UnknownLabel("unknown label '" + *q.label + "'");
  }
  const MediaType media = q.media_type.value_or(MediaType::Text);
  std::vector<BookId> out;
  for (const auto& [id, m] : catalog) {
    if (m.media_type != media) continue;
    if (q.language && std::find(m.languages.begin(), m.languages.end(), *q.language) == m.languages.end())
      continue;
    if (q.author && m.author_name != *q.author) continue;
    if (q.label && !labelled.count(id)) continue;
    if (q.year_min || q.year_max) {
      const auto years = compatible_years(m);
      if (!years) continue;
      if (q.year_min && years->second < *q.year_min) continue;
      if (q.year_max && years->first > *q.year_max) continue;
    }
    out.push_back(id);
  }
  return out;
}

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string tsv_field(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

}  // namespace detail

inline std::string export_csv(const Catalog& catalog) {
  std::string out = "id,title,author,author_birth,author_death,languages,downloads\n";
  const auto opt = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& [id, m] : catalog) {
    std::string langs;
    for (std::size_t i = 0; i < m.languages.size(); ++i) langs += (i ? ";" : "") + m.languages[i];
    out += std::to_string(id) + "," + detail::csv_field(m.title) + "," +
           detail::csv_field(m.author_name.value_or("")) + "," + opt(m.author_birth_year) + "," +
           opt(m.author_death_year) + "," + detail::csv_field(langs) + "," + opt(m.downloads) + "\n";
  }
  return out;
}

/// Two-column `id<TAB>label` rows, ordered by id then label.
inline std::string export_labels(const Catalog& catalog, LabelKind kind) {
  std::string out;
  for (const auto& [id, m] : catalog)
    for (const auto& label : kind == LabelKind::Subject ? m.subjects : m.bookshelves)
      out += std::to_string(id) + "\t" + detail::tsv_field(label) + "\n";
  return out;
}

}  // namespace spgc::catalog
