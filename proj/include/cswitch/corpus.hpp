#pragma once

// Data model for language-tagged code-mixed corpora.
//
// On-disk format, one utterance per line (UTF-8, LF):
//
//   <label> TAB <surface>_<tag> <surface>_<tag> ...
//
// label is 0 or 1, tag is one of hi / en / rest. The LAST underscore of a
// token separates surface from tag, so surfaces may themselves contain '_'.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cswitch {

enum class LangTag : std::uint8_t { hi, en, rest };

std::string_view to_string(LangTag tag) noexcept;

/// Returns false for anything but the three exact tag spellings.
bool parse_lang_tag(std::string_view text, LangTag& out) noexcept;

struct Token {
  std::string surface;
  LangTag tag = LangTag::rest;

  friend bool operator==(const Token&, const Token&) = default;
};

enum class Label : std::uint8_t { negative = 0, positive = 1 };

inline bool is_positive(Label l) noexcept { return l == Label::positive; }
inline Label flip(Label l) noexcept {
  return l == Label::positive ? Label::negative : Label::positive;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + detail),
        line_(line),
        detail_(detail) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

class LabeledUtterance {
 public:
  /// Throws std::invalid_argument when `tokens` is empty.
  LabeledUtterance(std::vector<Token> tokens, Label label, std::size_t id);

  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  Label label() const noexcept { return label_; }
  std::size_t id() const noexcept { return id_; }

  friend bool operator==(const LabeledUtterance&, const LabeledUtterance&) = default;

 private:
  std::vector<Token> tokens_;
  Label label_;
  std::size_t id_;
};

class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  /// Throws std::invalid_argument on duplicate ids.
  LabeledCorpus(std::string task_name, std::vector<LabeledUtterance> utterances);

  const std::string& task_name() const noexcept { return task_name_; }
  const std::vector<LabeledUtterance>& utterances() const noexcept { return utterances_; }
  std::size_t size() const noexcept { return utterances_.size(); }
  bool empty() const noexcept { return utterances_.empty(); }
  const LabeledUtterance& operator[](std::size_t i) const { return utterances_[i]; }

  auto begin() const noexcept { return utterances_.begin(); }
  auto end() const noexcept { return utterances_.end(); }

  std::size_t positives() const noexcept;
  std::size_t negatives() const noexcept { return size() - positives(); }

  /// Sub-corpus made of the utterances at `indices`, in the given order.
  LabeledCorpus subset(const std::vector<std::size_t>& indices) const;

 private:
  std::string task_name_;
  std::vector<LabeledUtterance> utterances_;
};

/// Parses one tagged line. `line_number` is only used in error messages.
LabeledUtterance parse_tagged_line(std::string_view line, std::size_t line_number = 1,
                                   std::size_t id = 0);

/// Inverse of parse_tagged_line (no trailing newline).
std::string serialize_tagged_line(const LabeledUtterance& u);

/// Reads a whole corpus. Blank lines are skipped; ids are the 0-based
/// ordinals of the non-blank lines. Errors carry the physical line number.
LabeledCorpus load_corpus(std::istream& in, std::string task_name);
LabeledCorpus load_corpus_file(const std::string& path, std::string task_name = {});

void write_corpus(std::ostream& out, const LabeledCorpus& corpus);

/// Uniform random partition; train size is floor(train_fraction * N).
/// Both halves keep the original corpus order.
std::pair<LabeledCorpus, LabeledCorpus> split_train_test(const LabeledCorpus& corpus,
                                                        double train_fraction,
                                                        std::uint64_t seed);

struct Fold {
  LabeledCorpus train;
  LabeledCorpus test;
};

/// k folds whose test parts partition the corpus, sizes differing by at most
/// one. With `stratified`, each class is dealt round-robin separately.
std::vector<Fold> kfold(const LabeledCorpus& corpus, std::size_t k, std::uint64_t seed,
                        bool stratified = false);

/// Portable Fisher-Yates permutation of [0, n). Unlike std::shuffle with a
/// standard distribution, the result is identical on every platform.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace cswitch
