#include "cswitch/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

namespace cswitch {

std::string_view to_string(LangTag tag) noexcept {
  switch (tag) {
    case LangTag::hi: return "hi";
    case LangTag::en: return "en";
    case LangTag::rest: return "rest";
  }
  return "rest";
}

bool parse_lang_tag(std::string_view text, LangTag& out) noexcept {
  if (text == "hi") {
    out = LangTag::hi;
  } else if (text == "en") {
    out = LangTag::en;
  } else if (text == "rest") {
    out = LangTag::rest;
  } else {
    return false;
  }
  return true;
}

LabeledUtterance::LabeledUtterance(std::vector<Token> tokens, Label label, std::size_t id)
    : tokens_(std::move(tokens)), label_(label), id_(id) {
  if (tokens_.empty()) {
    throw std::invalid_argument("utterance " + std::to_string(id) + " has no tokens");
  }
}

LabeledCorpus::LabeledCorpus(std::string task_name, std::vector<LabeledUtterance> utterances)
    : task_name_(std::move(task_name)), utterances_(std::move(utterances)) {
  std::unordered_set<std::size_t> seen;
  seen.reserve(utterances_.size());
  for (const auto& u : utterances_) {
    if (!seen.insert(u.id()).second) {
      throw std::invalid_argument("duplicate utterance id " + std::to_string(u.id()));
    }
  }
}

std::size_t LabeledCorpus::positives() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      utterances_.begin(), utterances_.end(),
      [](const LabeledUtterance& u) { return is_positive(u.label()); }));
}

LabeledCorpus LabeledCorpus::subset(const std::vector<std::size_t>& indices) const {
  std::vector<LabeledUtterance> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(utterances_.at(i));
  return LabeledCorpus(task_name_, std::move(picked));
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

LabeledUtterance parse_tagged_line(std::string_view line, std::size_t line_number,
                                   std::size_t id) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw ParseError(line_number, "missing TAB between label and tokens");
  }
  const std::string_view label_text = line.substr(0, tab);
  Label label;
  if (label_text == "1") {
    label = Label::positive;
  } else if (label_text == "0") {
    label = Label::negative;
  } else {
    throw ParseError(line_number, "malformed label '" + std::string(label_text) + "'");
  }

  std::vector<Token> tokens;
  std::string_view rest = line.substr(tab + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    while (pos < rest.size() && is_space(rest[pos])) ++pos;
    if (pos >= rest.size()) break;
    std::size_t end = pos;
    while (end < rest.size() && !is_space(rest[end])) ++end;
    const std::string_view raw = rest.substr(pos, end - pos);
    pos = end;

    const auto us = raw.rfind('_');
    if (us == std::string_view::npos) {
      throw ParseError(line_number, "token without tag: '" + std::string(raw) + "'");
    }
    Token tok;
    if (!parse_lang_tag(raw.substr(us + 1), tok.tag)) {
      throw ParseError(line_number, "unknown tag in token '" + std::string(raw) + "'");
    }
    if (us == 0) {
      throw ParseError(line_number, "empty surface in token '" + std::string(raw) + "'");
    }
    tok.surface = std::string(raw.substr(0, us));
    tokens.push_back(std::move(tok));
  }
  if (tokens.empty()) throw ParseError(line_number, "empty token list");
  return LabeledUtterance(std::move(tokens), label, id);
}

std::string serialize_tagged_line(const LabeledUtterance& u) {
  std::string out = is_positive(u.label()) ? "1\t" : "0\t";
  bool first = true;
  for (const auto& t : u.tokens()) {
    if (!first) out += ' ';
    first = false;
    out += t.surface;
    out += '_';
    out += to_string(t.tag);
  }
  return out;
}

LabeledCorpus load_corpus(std::istream& in, std::string task_name) {
  std::vector<LabeledUtterance> utterances;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    utterances.push_back(parse_tagged_line(line, line_number, utterances.size()));
  }
  if (utterances.empty()) throw std::runtime_error("empty corpus");
  return LabeledCorpus(std::move(task_name), std::move(utterances));
}

LabeledCorpus load_corpus_file(const std::string& path, std::string task_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus '" + path + "'");
  if (task_name.empty()) {
    task_name = path;
    if (auto slash = task_name.find_last_of('/'); slash != std::string::npos) {
      task_name.erase(0, slash + 1);
    }
    if (auto dot = task_name.find_last_of('.'); dot != std::string::npos && dot > 0) {
      task_name.erase(dot);
    }
  }
  try {
    return load_corpus(in, std::move(task_name));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_corpus(std::ostream& out, const LabeledCorpus& corpus) {
  for (const auto& u : corpus) out << serialize_tagged_line(u) << '\n';
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    // Uniform draw in [0, i) by rejection; mt19937_64 output is fully specified.
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(r % bound)]);
  }
  return perm;
}

std::pair<LabeledCorpus, LabeledCorpus> split_train_test(const LabeledCorpus& corpus,
                                                        double train_fraction,
                                                        std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0,1)");
  }
  if (corpus.empty()) throw std::invalid_argument("cannot split an empty corpus");

  const auto n = corpus.size();
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 1e-9));
  auto perm = seeded_permutation(n, seed);
  std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {corpus.subset(train), corpus.subset(test)};
}

std::vector<Fold> kfold(const LabeledCorpus& corpus, std::size_t k, std::uint64_t seed,
                        bool stratified) {
  const auto n = corpus.size();
  if (k < 2 || k > n) {
    throw std::invalid_argument("k must lie in [2, " + std::to_string(n) + "], got " +
                                std::to_string(k));
  }

  std::vector<std::size_t> order;
  order.reserve(n);
  const auto perm = seeded_permutation(n, seed);
  if (stratified) {
    for (std::size_t i : perm) if (is_positive(corpus[i].label())) order.push_back(i);
    for (std::size_t i : perm) if (!is_positive(corpus[i].label())) order.push_back(i);
  } else {
    order = perm;
  }

  std::vector<std::size_t> fold_of(n);
  for (std::size_t j = 0; j < n; ++j) fold_of[order[j]] = j % k;

  std::vector<Fold> folds;
  folds.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < n; ++i) (fold_of[i] == f ? test : train).push_back(i);
    folds.push_back({corpus.subset(train), corpus.subset(test)});
  }
  return folds;
}

}  // namespace cswitch
