#pragma once

// Synthetic code-mixed corpora whose label depends on switching behaviour
// only. Surfaces come from one shared pool regardless of language tag, so no
// lexical feature carries label information.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "cswitch/corpus.hpp"

namespace cswitch {

struct SyntheticSpec {
  std::size_t utterances = 2000;
  std::size_t length = 20;
  /// Label = 1 with probability sigmoid(alpha * (V - center)).
  double alpha = 1.0;
  /// Defaults to the sample mean of V, which keeps the classes near balance.
  std::optional<double> center;
  double rest_rate = 0.05;
  std::size_t pool_size = 400;
  /// Per-utterance switch probability is drawn uniformly from this range.
  double min_switch_rate = 0.02;
  double max_switch_rate = 0.6;
  std::uint64_t seed = 7;
};

LabeledCorpus make_switching_corpus(const SyntheticSpec& spec, std::string task_name = "synthetic");

}  // namespace cswitch
