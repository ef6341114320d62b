#pragma once

// Code-switching features of a language-tagged token sequence.
//
// Only hi and en tokens take part in switching. rest tokens are transparent
// for switch counting and the embedding property, but they are counted in
// the denominators of fraction_en / fraction_hi.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cswitch/corpus.hpp"

namespace cswitch {

/// hi_en[i]: number of hi tokens before position i when token i is en, else 0.
/// en_hi[i]: number of en tokens before position i when token i is hi, else 0.
struct SwitchVectors {
  std::vector<std::size_t> hi_en;
  std::vector<std::size_t> en_hi;

  friend bool operator==(const SwitchVectors&, const SwitchVectors&) = default;
};

struct SwitchCounts {
  std::size_t en_hi = 0;  ///< adjacent (en, hi) pairs in the hi/en projection
  std::size_t hi_en = 0;  ///< adjacent (hi, en) pairs
  std::size_t total = 0;  ///< V

  friend bool operator==(const SwitchCounts&, const SwitchCounts&) = default;
};

/// The nine switching features, in their canonical order.
struct SwitchProfile {
  static constexpr std::size_t kSize = 9;
  static const std::array<std::string_view, kSize> kNames;

  double en_hi_switches = 0;
  double hi_en_switches = 0;
  double v = 0;
  double fraction_en = 0;
  double fraction_hi = 0;
  double mean_hi_en = 0;
  double stddev_hi_en = 0;
  double mean_en_hi = 0;
  double stddev_en_hi = 0;

  std::array<double, kSize> values() const noexcept {
    return {en_hi_switches, hi_en_switches, v,          fraction_en, fraction_hi,
            mean_hi_en,     stddev_hi_en,   mean_en_hi, stddev_en_hi};
  }
};

/// How "an en word surrounded by hi words" is read.
enum class SurroundMode {
  immediate,  ///< hi directly before and after, in the hi/en projection
  anywhere,   ///< some hi somewhere before and some hi somewhere after
};

// All functions below throw std::invalid_argument on an empty sequence.

SwitchVectors lang_run_vectors(std::span<const Token> tokens);
SwitchCounts switch_counts(std::span<const Token> tokens);
SwitchProfile switching_features(std::span<const Token> tokens);
bool has_embedding_property(std::span<const Token> tokens,
                            SurroundMode mode = SurroundMode::immediate);

}  // namespace cswitch
