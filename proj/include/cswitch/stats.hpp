#pragma once

// Association between the embedding property Q (an en word inside hi
// context) and the task label, plus average switching per class.
//
// Undefined quantities (empty conditioning cell, zero marginal) are
// std::nullopt, never 0.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cswitch/corpus.hpp"
#include "cswitch/switching.hpp"

namespace cswitch {

/// label x Q counts. First index is the label (1 = positive), second is Q.
struct ContingencyTable {
  std::size_t n11 = 0;  ///< positive, Q
  std::size_t n10 = 0;  ///< positive, not Q
  std::size_t n01 = 0;  ///< negative, Q
  std::size_t n00 = 0;  ///< negative, not Q

  std::size_t total() const noexcept { return n11 + n10 + n01 + n00; }
  ContingencyTable& operator+=(const ContingencyTable& o) noexcept;

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

struct SwitchTaskSummary {
  std::optional<double> p_pos_given_q;
  std::optional<double> p_pos_given_not_q;
  std::optional<double> avg_switch_pos;
  std::optional<double> avg_switch_neg;
  std::optional<double> phi;
  ContingencyTable counts;
};

ContingencyTable contingency_table(const LabeledCorpus& corpus,
                                   SurroundMode mode = SurroundMode::immediate);

/// (p(positive | Q), p(positive | not Q)).
std::pair<std::optional<double>, std::optional<double>> conditional_positive_rates(
    const ContingencyTable& table);
std::pair<std::optional<double>, std::optional<double>> conditional_positive_rates(
    const LabeledCorpus& corpus, SurroundMode mode = SurroundMode::immediate);

/// Mean V over positives and over negatives.
std::pair<std::optional<double>, std::optional<double>> average_switching(
    const LabeledCorpus& corpus);

/// Closed-form phi coefficient of a 2x2 table.
std::optional<double> phi_coefficient(const ContingencyTable& table);
std::optional<double> phi_correlation(const LabeledCorpus& corpus,
                                      SurroundMode mode = SurroundMode::immediate);

SwitchTaskSummary summarize(const LabeledCorpus& corpus,
                            SurroundMode mode = SurroundMode::immediate);

/// Rows p(T|Q), p(T|~Q), avg(S|T), avg(S|~T), phi; one column per corpus.
/// Undefined cells print as NA.
void write_summary_tsv(std::ostream& out,
                       const std::vector<std::pair<std::string, SwitchTaskSummary>>& columns);

}  // namespace cswitch
