#include "cswitch/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <stdexcept>

namespace cswitch {

void PreprocessConfig::validate() const {
  if (strip_punctuation && punctuation_set.empty()) {
    throw std::invalid_argument("punctuation set must be non-empty when stripping is enabled");
  }
  // Letters or digits in the set would eat into placeholders and words alike.
  for (unsigned char c : punctuation_set) {
    if (std::isalnum(c)) {
      throw std::invalid_argument(std::string("punctuation set contains alphanumeric '") +
                                  static_cast<char>(c) + "'");
    }
  }
}

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

std::string_view strip_edges(std::string_view s, std::string_view punct) {
  const auto first = s.find_first_not_of(punct);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(punct);
  return s.substr(first, last - first + 1);
}

void normalize_word(std::string_view surface, LangTag tag, const PreprocessConfig& cfg,
                    std::vector<Token>& out) {
  if (surface.empty()) return;
  if (is_emoticon(surface)) {
    out.push_back({std::string(surface), tag});
    return;
  }
  if (surface.size() > 1 && surface.front() == '@') {
    out.push_back({"mention", LangTag::rest});
    return;
  }
  if (starts_with_ci(surface, "http") || starts_with_ci(surface, "www.")) {
    out.push_back({"url", LangTag::rest});
    return;
  }
  if (surface.size() > 1 && surface.front() == '#') {
    if (cfg.keep_hashtag_placeholder) out.push_back({"hashtag", LangTag::rest});
    const std::string_view body = surface.substr(1);
    std::vector<std::string> pieces;
    if (cfg.segment_hashtags) {
      pieces = segment_camel_case(body);
    } else if (!cfg.keep_hashtag_placeholder) {
      pieces.emplace_back(body);
    }
    for (const auto& piece : pieces) normalize_word(to_lower(piece), tag, cfg, out);
    return;
  }
  if (!cfg.strip_punctuation) {
    out.push_back({std::string(surface), tag});
    return;
  }
  const std::string_view core = strip_edges(surface, cfg.punctuation_set);
  if (core.size() == surface.size()) {
    out.push_back({std::string(surface), tag});
  } else {
    // What remains may itself be a mention, url or emoticon.
    normalize_word(core, tag, cfg, out);
  }
}

}  // namespace

std::vector<std::string> segment_camel_case(std::string_view word) {
  std::vector<std::string> parts;
  if (word.empty()) return parts;
  std::size_t start = 0;
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (is_lower(word[i - 1]) && is_upper(word[i])) {
      parts.emplace_back(word.substr(start, i - start));
      start = i;
    }
  }
  parts.emplace_back(word.substr(start));
  return parts;
}

bool is_emoticon(std::string_view token) {
  static const std::regex pattern(
      R"(^(?:[:;=8][-'^o]?[)(\]\[dDpPoO/\\|*sS3]+|[)(\]\[dD][-'^o]?[:;=8]|[xX][dDpP]|<[/\\]?3+)$)");
  return std::regex_match(token.begin(), token.end(), pattern);
}

std::vector<Token> normalize(const std::vector<Token>& raw_tokens, const PreprocessConfig& cfg) {
  cfg.validate();
  std::vector<Token> out;
  out.reserve(raw_tokens.size());
  for (const auto& tok : raw_tokens) normalize_word(tok.surface, tok.tag, cfg, out);
  return out;
}

LabeledCorpus normalize_corpus(const LabeledCorpus& corpus, const PreprocessConfig& cfg,
                               std::vector<std::size_t>* dropped_ids) {
  std::vector<LabeledUtterance> kept;
  kept.reserve(corpus.size());
  for (const auto& u : corpus) {
    auto tokens = normalize(u.tokens(), cfg);
    if (tokens.empty()) {
      if (dropped_ids != nullptr) dropped_ids->push_back(u.id());
      continue;
    }
    kept.emplace_back(std::move(tokens), u.label(), u.id());
  }
  return LabeledCorpus(corpus.task_name(), std::move(kept));
}

}  // namespace cswitch
