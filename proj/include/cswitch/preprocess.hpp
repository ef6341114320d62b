#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cswitch/corpus.hpp"

namespace cswitch {

/// ASCII punctuation; the default for PreprocessConfig::punctuation_set.
inline constexpr std::string_view kDefaultPunctuation = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

struct PreprocessConfig {
  /// Emit a `hashtag` placeholder token for each hashtag.
  bool keep_hashtag_placeholder = true;
  /// Split camel-case hashtags into lowercased words after the placeholder.
  bool segment_hashtags = true;
  bool strip_punctuation = true;
  /// Byte set; only ASCII characters are meaningful.
  std::string punctuation_set = std::string(kDefaultPunctuation);

  /// Throws std::invalid_argument when stripping is on but the set is empty.
  void validate() const;
};

/// Splits at every lowercase->uppercase boundary. Concatenating the result
/// gives back `word`.
std::vector<std::string> segment_camel_case(std::string_view word);

/// True for common ASCII emoticons such as ":P", ":)", ";-)", "<3", "xD".
bool is_emoticon(std::string_view token);

/// Normalizes a raw token sequence:
///   @user          -> mention/rest
///   http..., www.  -> url/rest
///   #CamelCase     -> hashtag/rest, camel, case   (segments keep the hashtag's tag)
///   emoticons      -> kept verbatim
///   anything else  -> punctuation stripped from both edges, dropped if empty
///
/// The function is idempotent. It may return an empty sequence.
std::vector<Token> normalize(const std::vector<Token>& raw_tokens,
                             const PreprocessConfig& cfg = {});

/// Applies normalize() to every utterance, keeping ids and labels.
/// Utterances that normalize to nothing are left out; their ids are appended
/// to `dropped_ids` when it is non-null.
LabeledCorpus normalize_corpus(const LabeledCorpus& corpus, const PreprocessConfig& cfg,
                               std::vector<std::size_t>* dropped_ids = nullptr);

}  // namespace cswitch
