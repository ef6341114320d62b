#pragma once

#include <cstddef>
#include <span>

#include "cswitch/corpus.hpp"

namespace cswitch {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct EvalReport {
  double macro_f1 = 0.0;
  double f1_positive = 0.0;
  double f1_negative = 0.0;
  Confusion confusion;  ///< with the positive class as "positive"
  /// A class that is neither predicted nor present scores F1 = 0 and is
  /// flagged here.
  bool positive_degenerate = false;
  bool negative_degenerate = false;
};

/// F1 = 2tp / (2tp + fp + fn), per class; macro-F1 is their plain mean.
/// Throws std::invalid_argument on empty input or mismatched lengths.
EvalReport macro_f1(std::span<const Label> predictions, std::span<const Label> gold);

EvalReport report_from_confusion(const Confusion& c);

}  // namespace cswitch
