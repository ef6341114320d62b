#include "cswitch/textfeat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "cswitch/util.hpp"

namespace cswitch {

std::string_view to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::char_ngram: return "char_ngram";
    case FeatureKind::word_ngram: return "word_ngram";
    case FeatureKind::bow: return "bow";
    case FeatureKind::special: return "special";
  }
  return "special";
}

bool parse_feature_kind(std::string_view text, FeatureKind& out) noexcept {
  for (auto k : {FeatureKind::char_ngram, FeatureKind::word_ngram, FeatureKind::bow,
                 FeatureKind::special}) {
    if (text == to_string(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Byte offsets of code point starts, plus the end offset.
std::vector<std::size_t> code_point_offsets(std::string_view s) {
  std::vector<std::size_t> offs;
  offs.reserve(s.size() + 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if ((c & 0xC0) != 0x80) offs.push_back(i);
  }
  offs.push_back(s.size());
  return offs;
}

void require_positive_n(int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be >= 1, got " + std::to_string(n));
}

}  // namespace

std::vector<std::string> char_ngrams(std::string_view text, int n) {
  require_positive_n(n);
  const std::string lower = ascii_lower(text);
  const auto offs = code_point_offsets(lower);
  const std::size_t n_cp = offs.size() - 1;
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::string> grams;
  if (n_cp < un) return grams;
  grams.reserve(n_cp - un + 1);
  for (std::size_t i = 0; i + un <= n_cp; ++i) {
    grams.push_back(lower.substr(offs[i], offs[i + un] - offs[i]));
  }
  return grams;
}

std::string joined_surface(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += ascii_lower(tokens[i].surface);
  }
  return out;
}

std::vector<std::string> word_ngrams(std::span<const Token> tokens, int n) {
  require_positive_n(n);
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::string> grams;
  if (tokens.size() < un) return grams;
  for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
    std::string g = ascii_lower(tokens[i].surface);
    for (std::size_t j = 1; j < un; ++j) {
      g += kNgramSeparator;
      g += ascii_lower(tokens[i + j].surface);
    }
    grams.push_back(std::move(g));
  }
  return grams;
}

std::map<FeatureKey, std::size_t> extract_features(std::span<const Token> tokens,
                                                   const FeatureConfig& cfg) {
  std::map<FeatureKey, std::size_t> counts;
  const auto add = [&](FeatureKind kind, std::vector<std::string> grams) {
    for (auto& g : grams) ++counts[FeatureKey{kind, std::move(g)}];
  };
  if (cfg.kinds.contains(FeatureKind::char_ngram)) {
    const std::string text = joined_surface(tokens);
    for (int n : cfg.char_n) add(FeatureKind::char_ngram, char_ngrams(text, n));
  }
  if (cfg.kinds.contains(FeatureKind::word_ngram)) {
    for (int n : cfg.word_n) add(FeatureKind::word_ngram, word_ngrams(tokens, n));
  }
  if (cfg.kinds.contains(FeatureKind::bow)) {
    for (const auto& t : tokens) ++counts[FeatureKey{FeatureKind::bow, ascii_lower(t.surface)}];
  }
  return counts;
}

Vocabulary::Vocabulary(std::vector<FeatureKey> keys) : keys_(std::move(keys)) {
  std::sort(keys_.begin(), keys_.end());
  if (std::adjacent_find(keys_.begin(), keys_.end()) != keys_.end()) {
    throw std::invalid_argument("duplicate feature key in vocabulary");
  }
  for (std::size_t i = 0; i < keys_.size(); ++i) index_.emplace(keys_[i], i);
}

std::optional<std::size_t> Vocabulary::find(const FeatureKey& key) const {
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  return std::nullopt;
}

Vocabulary build_vocabulary(const LabeledCorpus& corpus, const FeatureConfig& cfg) {
  if (corpus.empty()) throw std::invalid_argument("cannot build a vocabulary from an empty corpus");
  std::map<FeatureKey, std::size_t> totals;
  for (const auto& u : corpus) {
    for (auto& [key, count] : extract_features(u.tokens(), cfg)) totals[key] += count;
  }
  std::vector<FeatureKey> keys;
  for (const auto& [key, count] : totals) {
    if (count >= cfg.min_count) keys.push_back(key);
  }
  if (keys.empty()) throw std::runtime_error("vocabulary is empty after applying min_count");
  return Vocabulary(std::move(keys));
}

double chi2_statistic(double a, double b, double c, double d) {
  const double den = (a + b) * (c + d) * (a + c) * (b + d);
  if (den == 0) return 0.0;
  const double n = a + b + c + d;
  const double diff = a * d - b * c;
  return n * diff * diff / den;
}

namespace {

// Presence tables for every vocabulary entry in one pass: a[i] / b[i] count
// positive / negative utterances containing feature i.
void presence_counts(const LabeledCorpus& corpus, const Vocabulary& vocab,
                     const FeatureConfig& cfg, std::vector<double>& a, std::vector<double>& b) {
  a.assign(vocab.size(), 0.0);
  b.assign(vocab.size(), 0.0);
  for (const auto& u : corpus) {
    auto& target = is_positive(u.label()) ? a : b;
    for (const auto& [key, _] : extract_features(u.tokens(), cfg)) {
      if (auto idx = vocab.find(key)) target[*idx] += 1.0;
    }
  }
}

}  // namespace

double chi2_score(const FeatureKey& key, const LabeledCorpus& corpus, const FeatureConfig& cfg) {
  double a = 0, b = 0;
  const auto pos = static_cast<double>(corpus.positives());
  const auto neg = static_cast<double>(corpus.negatives());
  for (const auto& u : corpus) {
    const auto feats = extract_features(u.tokens(), cfg);
    if (!feats.contains(key)) continue;
    (is_positive(u.label()) ? a : b) += 1.0;
  }
  return chi2_statistic(a, b, pos - a, neg - b);
}

std::vector<double> chi2_scores(const LabeledCorpus& corpus, const Vocabulary& vocab,
                                const FeatureConfig& cfg) {
  std::vector<double> a, b;
  presence_counts(corpus, vocab, cfg, a, b);
  const auto pos = static_cast<double>(corpus.positives());
  const auto neg = static_cast<double>(corpus.negatives());
  std::vector<double> scores(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    scores[i] = chi2_statistic(a[i], b[i], pos - a[i], neg - b[i]);
  }
  return scores;
}

Vocabulary chi2_select(const LabeledCorpus& corpus, const Vocabulary& vocab, std::size_t k,
                       const std::set<FeatureKind>& eligible, const FeatureConfig& cfg) {
  if (k < 1) throw std::invalid_argument("chi-squared k must be >= 1");

  std::vector<std::size_t> candidates;
  std::vector<FeatureKey> kept;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (eligible.contains(vocab.key(i).kind)) {
      candidates.push_back(i);
    } else {
      kept.push_back(vocab.key(i));
    }
  }
  if (k >= candidates.size()) {
    if (k > candidates.size()) {
      warn("chi-squared k=" + std::to_string(k) + " exceeds the " +
           std::to_string(candidates.size()) + " eligible features; keeping all");
    }
    return vocab;
  }

  const auto scores = chi2_scores(corpus, vocab, cfg);
  // Vocabulary indices follow key order, so the index is the tie-breaker.
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t x, std::size_t y) {
    if (scores[x] != scores[y]) return scores[x] > scores[y];
    return x < y;
  });
  for (std::size_t i = 0; i < k; ++i) kept.push_back(vocab.key(candidates[i]));
  return Vocabulary(std::move(kept));
}

double IndicativeLexicon::score(std::string_view token) const {
  if (auto it = scores.find(std::string(token)); it != scores.end()) return it->second;
  return 0.0;
}

IndicativeLexicon indicative_scores(const LabeledCorpus& corpus, double floor,
                                    std::string class_name) {
  std::map<std::string, std::pair<double, double>> counts;
  for (const auto& u : corpus) {
    const bool pos = is_positive(u.label());
    for (const auto& t : u.tokens()) {
      auto& c = counts[ascii_lower(t.surface)];
      (pos ? c.first : c.second) += 1.0;
    }
  }
  IndicativeLexicon lex;
  lex.class_name = std::move(class_name);
  for (const auto& [token, c] : counts) {
    const double s = std::log((c.first + 1.0) / (c.second + 1.0));
    if (std::abs(s) > floor) lex.scores.emplace(token, s);
  }
  return lex;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, const std::string& context) {
  std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw std::runtime_error(context + ": bad number '" + buf + "'");
  }
  return v;
}

}  // namespace

IndicativeLexicon read_lexicon(std::istream& in, std::string class_name) {
  IndicativeLexicon lex;
  lex.class_name = std::move(class_name);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tab = body.find('\t');
    const std::string token = ascii_lower(trim(body.substr(0, tab)));
    double score = 1.0;
    if (tab != std::string_view::npos) {
      score = parse_double(trim(body.substr(tab + 1)), "lexicon line " + std::to_string(line_number));
    }
    lex.scores[token] = score;
  }
  return lex;
}

void write_lexicon(std::ostream& out, const IndicativeLexicon& lexicon) {
  for (const auto& [token, score] : lexicon.scores) {
    out << token << '\t' << format_double(score) << '\n';
  }
}

std::set<std::string> read_word_list(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    body = trim(body.substr(0, body.find('\t')));
    if (!body.empty()) words.insert(ascii_lower(body));
  }
  return words;
}

const std::set<std::string>& default_negation_words() {
  // Keep in sync with data/negation_words.txt.
  static const std::set<std::string> words = {
      "ain't",  "aint",    "aren't", "arent",    "can't",    "cannot",   "cant",
      "couldn't", "couldnt", "didn't", "didnt",  "doesn't",  "doesnt",   "don't",
      "dont",   "hadn't",  "hadnt",  "hasn't",   "hasnt",    "haven't",  "havent",
      "isn't",  "isnt",    "mat",    "mt",       "na",       "nahi",     "nahin",
      "nai",    "neither", "never",  "nhi",      "no",       "nobody",   "none",
      "noone",  "nor",     "not",    "nothing",  "nowhere",  "shouldn't", "shouldnt",
      "wasn't", "wasnt",   "weren't", "werent",  "won't",    "wont",     "wouldn't",
      "wouldnt"};
  return words;
}

void SparseVector::push_back(std::size_t index, double value) {
  if (index >= dimension_) {
    throw std::out_of_range("sparse index " + std::to_string(index) + " >= dimension " +
                            std::to_string(dimension_));
  }
  if (!entries_.empty() && index <= entries_.back().index) {
    throw std::invalid_argument("sparse indices must be strictly increasing");
  }
  if (value == 0.0) return;
  entries_.push_back({index, value});
}

double SparseVector::at(std::size_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, std::size_t i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

std::string SparseVector::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(entries_[i].index);
    out += ':';
    out += format_double(entries_[i].value);
  }
  return out;
}

SparseVector SparseVector::from_text(std::string_view text, std::size_t dimension) {
  SparseVector v(dimension);
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    auto end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    pos = end;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw std::runtime_error("sparse entry without ':' in '" + std::string(item) + "'");
    }
    std::size_t index = 0;
    const auto idx_text = item.substr(0, colon);
    auto [p, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
    if (ec != std::errc{} || p != idx_text.data() + idx_text.size()) {
      throw std::runtime_error("bad sparse index in '" + std::string(item) + "'");
    }
    v.push_back(index, parse_double(item.substr(colon + 1), "sparse vector"));
  }
  return v;
}

SparseVector vectorize(std::span<const Token> tokens, const Vocabulary& vocab,
                       const FeatureConfig& cfg, std::span<const IndicativeLexicon> lexicons,
                       const std::set<std::string>& negation_words, bool with_switching) {
  const std::size_t dim = vocab.size() + 2 + (with_switching ? SwitchProfile::kSize : 0);
  SparseVector v(dim);

  std::vector<std::pair<std::size_t, double>> hits;
  for (const auto& [key, count] : extract_features(tokens, cfg)) {
    if (auto idx = vocab.find(key)) hits.emplace_back(*idx, static_cast<double>(count));
  }
  std::sort(hits.begin(), hits.end());
  for (const auto& [idx, value] : hits) v.push_back(idx, value);

  double indicative = 0.0;
  double negations = 0.0;
  for (const auto& t : tokens) {
    const std::string lower = ascii_lower(t.surface);
    for (const auto& lex : lexicons) indicative += lex.score(lower);
    if (negation_words.contains(lower)) negations += 1.0;
  }
  v.push_back(vocab.size(), indicative);
  v.push_back(vocab.size() + 1, negations);

  if (with_switching && !tokens.empty()) {
    const auto values = switching_features(tokens).values();
    for (std::size_t i = 0; i < values.size(); ++i) v.push_back(vocab.size() + 2 + i, values[i]);
  }
  return v;
}

SparseVector vectorize(std::span<const Token> tokens, const FeatureSpace& space) {
  return vectorize(tokens, space.vocab, space.config, space.lexicons, space.negation_words,
                   space.with_switching);
}

FeatureSpace fit_feature_space(const LabeledCorpus& train, const FeatureConfig& cfg,
                               bool with_switching, std::set<std::string> negation_words,
                               std::vector<IndicativeLexicon> extra_lexicons) {
  FeatureSpace space;
  space.config = cfg;
  space.with_switching = with_switching;
  space.vocab = build_vocabulary(train, cfg);
  if (cfg.chi2_k > 0) {
    space.vocab = chi2_select(train, space.vocab, cfg.chi2_k, cfg.chi2_kinds, cfg);
  }
  if (cfg.fit_indicative_lexicon && train.positives() > 0 && train.negatives() > 0) {
    space.lexicons.push_back(indicative_scores(train, cfg.indicative_floor, train.task_name()));
  }
  for (auto& lex : extra_lexicons) space.lexicons.push_back(std::move(lex));
  if (cfg.count_negations) space.negation_words = std::move(negation_words);
  return space;
}

// ---------------------------------------------------------------------------
// JSON persistence

namespace {

using nlohmann::json;

json kinds_to_json(const std::set<FeatureKind>& kinds) {
  json arr = json::array();
  for (auto k : kinds) arr.push_back(std::string(to_string(k)));
  return arr;
}

std::set<FeatureKind> kinds_from_json(const json& arr) {
  std::set<FeatureKind> kinds;
  for (const auto& item : arr) {
    FeatureKind k;
    if (!parse_feature_kind(item.get<std::string>(), k)) {
      throw std::runtime_error("unknown feature kind '" + item.get<std::string>() + "'");
    }
    kinds.insert(k);
  }
  return kinds;
}

constexpr int kFeatureSpaceVersion = 1;

}  // namespace

void save_feature_space(std::ostream& out, const FeatureSpace& space) {
  json j;
  j["format_version"] = kFeatureSpaceVersion;
  const auto& c = space.config;
  j["config"] = {{"kinds", kinds_to_json(c.kinds)},
                 {"char_n", c.char_n},
                 {"word_n", c.word_n},
                 {"min_count", c.min_count},
                 {"chi2_k", c.chi2_k},
                 {"chi2_kinds", kinds_to_json(c.chi2_kinds)},
                 {"fit_indicative_lexicon", c.fit_indicative_lexicon},
                 {"indicative_floor", c.indicative_floor},
                 {"count_negations", c.count_negations}};
  json vocab = json::array();
  for (const auto& k : space.vocab.keys()) vocab.push_back({std::string(to_string(k.kind)), k.payload});
  j["vocabulary"] = std::move(vocab);
  json lexicons = json::array();
  for (const auto& lex : space.lexicons) {
    lexicons.push_back({{"class_name", lex.class_name}, {"scores", lex.scores}});
  }
  j["lexicons"] = std::move(lexicons);
  j["negation_words"] = space.negation_words;
  j["with_switching"] = space.with_switching;
  j["dimension"] = space.dimension();
  out << j.dump(1) << '\n';
}

FeatureSpace load_feature_space(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("feature space: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kFeatureSpaceVersion) {
      throw std::runtime_error("unsupported feature space version");
    }
    FeatureSpace space;
    const auto& c = j.at("config");
    space.config.kinds = kinds_from_json(c.at("kinds"));
    space.config.char_n = c.at("char_n").get<std::vector<int>>();
    space.config.word_n = c.at("word_n").get<std::vector<int>>();
    space.config.min_count = c.at("min_count").get<std::size_t>();
    space.config.chi2_k = c.at("chi2_k").get<std::size_t>();
    space.config.chi2_kinds = kinds_from_json(c.at("chi2_kinds"));
    space.config.fit_indicative_lexicon = c.at("fit_indicative_lexicon").get<bool>();
    space.config.indicative_floor = c.at("indicative_floor").get<double>();
    space.config.count_negations = c.at("count_negations").get<bool>();

    std::vector<FeatureKey> keys;
    for (const auto& item : j.at("vocabulary")) {
      FeatureKey key;
      if (!parse_feature_kind(item.at(0).get<std::string>(), key.kind)) {
        throw std::runtime_error("unknown feature kind in vocabulary");
      }
      key.payload = item.at(1).get<std::string>();
      keys.push_back(std::move(key));
    }
    space.vocab = Vocabulary(std::move(keys));
    for (const auto& item : j.at("lexicons")) {
      IndicativeLexicon lex;
      lex.class_name = item.at("class_name").get<std::string>();
      lex.scores = item.at("scores").get<std::map<std::string, double>>();
      space.lexicons.push_back(std::move(lex));
    }
    space.negation_words = j.at("negation_words").get<std::set<std::string>>();
    space.with_switching = j.at("with_switching").get<bool>();
    if (j.at("dimension").get<std::size_t>() != space.dimension()) {
      throw std::runtime_error("stored dimension does not match the vocabulary");
    }
    return space;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("feature space: ") + e.what());
  }
}

}  // namespace cswitch
