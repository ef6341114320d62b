#pragma once

// Lexical feature space: character/word n-grams and bag-of-words, chi-squared
// selection, indicative-token lexicons, negation counts, and the sparse
// encoding of an utterance with optional switching features appended.
//
// Layout of an encoded vector of dimension D:
//
//   [0, |vocab|)         n-gram / bow counts
//   |vocab|              sum of indicative scores of the tokens
//   |vocab| + 1          number of negation words
//   |vocab| + 2 ... +10  the nine switching features (only with_switching)

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswitch/corpus.hpp"
#include "cswitch/switching.hpp"

namespace cswitch {

enum class FeatureKind : std::uint8_t { char_ngram, word_ngram, bow, special };

std::string_view to_string(FeatureKind kind) noexcept;
bool parse_feature_kind(std::string_view text, FeatureKind& out) noexcept;

struct FeatureKey {
  FeatureKind kind = FeatureKind::special;
  std::string payload;

  friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
  friend bool operator==(const FeatureKey&, const FeatureKey&) = default;
};

/// Joins the words of a word n-gram ("§", U+00A7).
inline constexpr std::string_view kNgramSeparator = "\xC2\xA7";

/// Character n-grams (UTF-8 code points) of `text`, ASCII-lowercased, in
/// order of occurrence. Throws std::invalid_argument when n < 1.
std::vector<std::string> char_ngrams(std::string_view text, int n);

/// Lowercased surfaces joined by single spaces.
std::string joined_surface(std::span<const Token> tokens);

/// Contiguous word n-grams over lowercased surfaces, in order of occurrence.
std::vector<std::string> word_ngrams(std::span<const Token> tokens, int n);

struct FeatureConfig {
  std::set<FeatureKind> kinds = {FeatureKind::char_ngram, FeatureKind::word_ngram};
  std::vector<int> char_n = {3};
  std::vector<int> word_n = {1, 2};
  std::size_t min_count = 1;

  /// Chi-squared top-k restricted to `chi2_kinds`; 0 disables selection.
  std::size_t chi2_k = 500;
  std::set<FeatureKind> chi2_kinds = {FeatureKind::word_ngram, FeatureKind::bow};

  bool fit_indicative_lexicon = true;
  double indicative_floor = 0.0;
  bool count_negations = true;
};

/// Occurrence counts of every configured feature in one token sequence.
std::map<FeatureKey, std::size_t> extract_features(std::span<const Token> tokens,
                                                   const FeatureConfig& cfg);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Keys are sorted (kind, then payload). Throws on duplicates.
  explicit Vocabulary(std::vector<FeatureKey> keys);

  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  const FeatureKey& key(std::size_t index) const { return keys_.at(index); }
  const std::vector<FeatureKey>& keys() const noexcept { return keys_; }
  std::optional<std::size_t> find(const FeatureKey& key) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.keys_ == b.keys_; }

 private:
  std::vector<FeatureKey> keys_;
  std::map<FeatureKey, std::size_t> index_;
};

/// Features of the configured kinds whose corpus-wide count is at least
/// cfg.min_count. Throws std::runtime_error when nothing survives.
Vocabulary build_vocabulary(const LabeledCorpus& corpus, const FeatureConfig& cfg);

/// N(ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)) for the table
///            positive  negative
///   present      a        b
///   absent       c        d
/// Returns 0 when a marginal is empty.
double chi2_statistic(double a, double b, double c, double d);

/// Chi-squared score of one feature over presence-per-utterance.
double chi2_score(const FeatureKey& key, const LabeledCorpus& corpus, const FeatureConfig& cfg);

/// Scores of every vocabulary entry, index-aligned with `vocab`.
std::vector<double> chi2_scores(const LabeledCorpus& corpus, const Vocabulary& vocab,
                                const FeatureConfig& cfg);

/// Keeps the k best-scoring features among those whose kind is in
/// `eligible` (ties go to the smaller key); other kinds pass through. When k
/// exceeds the eligible count everything is kept and a warning is issued.
Vocabulary chi2_select(const LabeledCorpus& corpus, const Vocabulary& vocab, std::size_t k,
                       const std::set<FeatureKind>& eligible, const FeatureConfig& cfg);

/// Token -> class-association score. Tokens missing from the map score 0.
struct IndicativeLexicon {
  std::string class_name;
  std::map<std::string, double> scores;

  double score(std::string_view token) const;
};

/// score(t) = log((count in positives + 1) / (count in negatives + 1)) over
/// lowercased surfaces. Entries with |score| <= floor are dropped.
IndicativeLexicon indicative_scores(const LabeledCorpus& corpus, double floor = 0.0,
                                    std::string class_name = "positive");

/// `token<TAB>score` per line; a bare token scores 1. Blank lines and lines
/// starting with '#' are ignored.
IndicativeLexicon read_lexicon(std::istream& in, std::string class_name);
void write_lexicon(std::ostream& out, const IndicativeLexicon& lexicon);

/// One token per line (a trailing `<TAB>...` column is ignored).
std::set<std::string> read_word_list(std::istream& in);
const std::set<std::string>& default_negation_words();

class SparseVector {
 public:
  struct Entry {
    std::size_t index;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SparseVector() = default;
  explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}

  /// Indices must be strictly increasing and below dimension(); zero values
  /// are not stored.
  void push_back(std::size_t index, double value);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Entry> entries() const noexcept { return entries_; }
  double at(std::size_t index) const;

  /// `index:value` pairs separated by spaces.
  std::string to_text() const;
  static SparseVector from_text(std::string_view text, std::size_t dimension);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;
};

/// Everything needed to encode an utterance, fitted on training data only.
struct FeatureSpace {
  FeatureConfig config;
  Vocabulary vocab;
  std::vector<IndicativeLexicon> lexicons;
  std::set<std::string> negation_words;
  bool with_switching = false;

  std::size_t indicative_index() const noexcept { return vocab.size(); }
  std::size_t negation_index() const noexcept { return vocab.size() + 1; }
  std::size_t switching_offset() const noexcept { return vocab.size() + 2; }
  std::size_t dimension() const noexcept {
    return vocab.size() + 2 + (with_switching ? SwitchProfile::kSize : 0);
  }
};

SparseVector vectorize(std::span<const Token> tokens, const Vocabulary& vocab,
                       const FeatureConfig& cfg, std::span<const IndicativeLexicon> lexicons,
                       const std::set<std::string>& negation_words, bool with_switching);
SparseVector vectorize(std::span<const Token> tokens, const FeatureSpace& space);

/// Vocabulary (with chi-squared selection), fitted lexicon and negation list
/// from `train`. `extra_lexicons` are appended after the fitted one.
FeatureSpace fit_feature_space(const LabeledCorpus& train, const FeatureConfig& cfg,
                               bool with_switching,
                               std::set<std::string> negation_words = default_negation_words(),
                               std::vector<IndicativeLexicon> extra_lexicons = {});

void save_feature_space(std::ostream& out, const FeatureSpace& space);
FeatureSpace load_feature_space(std::istream& in);

}  // namespace cswitch
