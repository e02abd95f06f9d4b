#pragma once

// The "tokens" level: sentence segmentation with the book's language rules,
// Treebank word splitting, then alphabetic-only filtering and lower-casing.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "spgc/error.hpp"
#include "spgc/io.hpp"
#include "spgc/punkt.hpp"
#include "spgc/treebank.hpp"
#include "spgc/unicode.hpp"

namespace spgc::tokenizer {

struct TokenSequence {
  BookId book = 0;
  std::vector<std::string> tokens;
  std::string language_used;
};

/// Multi-language books are tokenized with their first listed language.
inline const std::string& select_language(const std::vector<std::string>& languages) {
  if (languages.empty()) throw EmptyLanguageList("book has no language metadata");
  return languages.front();
}

struct LanguageRules {
  std::string code;         // ISO code requested
  std::string punkt_name;   // rule set actually used
  bool fallback = false;    // true when the English rules stood in
};

/// Maps an ISO-639-1 code to the shipped sentence rule set.
inline LanguageRules rules_for(std::string_view code) {
  static constexpr std::pair<std::string_view, std::string_view> kMap[] = {
      {"en", "english"}, {"fr", "french"},     {"de", "german"}, {"es", "spanish"},
      {"it", "italian"}, {"pt", "portuguese"}, {"nl", "dutch"},  {"fi", "finnish"},
      {"da", "danish"},  {"sv", "swedish"},
  };
  for (auto [iso, name] : kMap)
    if (iso == code) return {std::string(code), std::string(name), false};
  return {std::string(code), "english", true};
}

/// Pre-filter tokens (punctuation included), as UTF-8 strings.
inline std::vector<std::string> tokenize_raw(std::string_view text, std::string_view language,
                                             Logger& log = Logger::null()) {
  const auto rules = rules_for(language);
  if (rules.fallback)
    log.warn("", "no sentence rules for language '" + std::string(language) +
                     "', using english");
  const punkt::Parameters* params = punkt::builtin_parameters(rules.punkt_name);
  const std::u32string decoded = unicode::decode(text);
  const punkt::SentenceTokenizer sentences(*params);
  std::vector<std::string> out;
  for (auto sentence : sentences.tokenize(decoded))
    for (const auto& tok : treebank::tokenize(sentence)) out.push_back(unicode::encode(tok));
  return out;
}

/// True when every code point is a letter (accented and non-Latin included).
inline bool is_alphabetic_token(std::string_view token) {
  if (token.empty()) return false;
  for (char32_t c : unicode::decode(token))
    if (!unicode::is_alpha(c)) return false;
  return true;
}

inline std::vector<std::string> filter_tokens(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (const auto& tok : raw) {
    if (!is_alphabetic_token(tok)) continue;
    out.push_back(unicode::encode(unicode::to_lower(unicode::decode(tok))));
  }
  return out;
}

inline std::string serialize_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  std::size_t total = 0;
  for (const auto& t : tokens) total += t.size() + 1;
  out.reserve(total);
  for (const auto& t : tokens) {
    out += t;
    out += '\n';
  }
  return out;
}

inline std::vector<std::string> parse_tokens(std::string_view data) {
  std::vector<std::string> out;
  if (data.empty()) return out;
  if (data.back() == '\n') data.remove_suffix(1);
  for (auto line : split_view(data, '\n')) out.emplace_back(line);
  return out;
}

/// text/PG<id>_text.txt -> tokens/PG<id>_tokens.txt under `store`.
inline TokenSequence tokenize_book(const fs::path& text_path, BookId id,
                                   const std::vector<std::string>& languages,
                                   const fs::path& store, Logger& log = Logger::null()) {
  TokenSequence seq;
  seq.book = id;
  seq.language_used = select_language(languages);
  const std::string text = read_file(text_path);
  seq.tokens = filter_tokens(tokenize_raw(text, seq.language_used, log));
  write_file_atomic(artifact_path(store, "tokens", id), serialize_tokens(seq.tokens));
  return seq;
}

}  // namespace spgc::tokenizer
