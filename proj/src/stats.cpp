#include "cswitch/stats.hpp"

#include <cmath>
#include <ostream>
#include <tuple>

#include "cswitch/util.hpp"

namespace cswitch {

ContingencyTable& ContingencyTable::operator+=(const ContingencyTable& o) noexcept {
  n11 += o.n11;
  n10 += o.n10;
  n01 += o.n01;
  n00 += o.n00;
  return *this;
}

ContingencyTable contingency_table(const LabeledCorpus& corpus, SurroundMode mode) {
  ContingencyTable t;
  for (const auto& u : corpus) {
    const bool q = has_embedding_property(u.tokens(), mode);
    if (is_positive(u.label())) {
      ++(q ? t.n11 : t.n10);
    } else {
      ++(q ? t.n01 : t.n00);
    }
  }
  return t;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::pair<std::optional<double>, std::optional<double>> conditional_positive_rates(
    const ContingencyTable& t) {
  return {ratio(t.n11, t.n11 + t.n01), ratio(t.n10, t.n10 + t.n00)};
}

std::pair<std::optional<double>, std::optional<double>> conditional_positive_rates(
    const LabeledCorpus& corpus, SurroundMode mode) {
  return conditional_positive_rates(contingency_table(corpus, mode));
}

std::pair<std::optional<double>, std::optional<double>> average_switching(
    const LabeledCorpus& corpus) {
  double sum_pos = 0;
  double sum_neg = 0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  for (const auto& u : corpus) {
    const auto v = static_cast<double>(switch_counts(u.tokens()).total);
    if (is_positive(u.label())) {
      sum_pos += v;
      ++n_pos;
    } else {
      sum_neg += v;
      ++n_neg;
    }
  }
  std::optional<double> pos, neg;
  if (n_pos > 0) pos = sum_pos / static_cast<double>(n_pos);
  if (n_neg > 0) neg = sum_neg / static_cast<double>(n_neg);
  return {pos, neg};
}

std::optional<double> phi_coefficient(const ContingencyTable& t) {
  const auto d = [](std::size_t x) { return static_cast<double>(x); };
  const double row_pos = d(t.n11 + t.n10);
  const double row_neg = d(t.n01 + t.n00);
  const double col_q = d(t.n11 + t.n01);
  const double col_not_q = d(t.n10 + t.n00);
  if (row_pos == 0 || row_neg == 0 || col_q == 0 || col_not_q == 0) return std::nullopt;
  const double num = d(t.n11) * d(t.n00) - d(t.n10) * d(t.n01);
  return num / std::sqrt(row_pos * row_neg * col_q * col_not_q);
}

std::optional<double> phi_correlation(const LabeledCorpus& corpus, SurroundMode mode) {
  return phi_coefficient(contingency_table(corpus, mode));
}

SwitchTaskSummary summarize(const LabeledCorpus& corpus, SurroundMode mode) {
  SwitchTaskSummary s;
  s.counts = contingency_table(corpus, mode);
  std::tie(s.p_pos_given_q, s.p_pos_given_not_q) = conditional_positive_rates(s.counts);
  std::tie(s.avg_switch_pos, s.avg_switch_neg) = average_switching(corpus);
  s.phi = phi_coefficient(s.counts);
  return s;
}

void write_summary_tsv(std::ostream& out,
                       const std::vector<std::pair<std::string, SwitchTaskSummary>>& columns) {
  const auto cell = [](const std::optional<double>& x) {
    return x ? format_double(*x) : std::string("NA");
  };
  out << "statistic";
  for (const auto& [name, _] : columns) out << '\t' << name;
  out << '\n';

  struct Row {
    const char* name;
    std::optional<double> SwitchTaskSummary::*field;
  };
  static constexpr Row rows[] = {
      {"p(T|Q)", &SwitchTaskSummary::p_pos_given_q},
      {"p(T|~Q)", &SwitchTaskSummary::p_pos_given_not_q},
      {"avg(S|T)", &SwitchTaskSummary::avg_switch_pos},
      {"avg(S|~T)", &SwitchTaskSummary::avg_switch_neg},
      {"phi", &SwitchTaskSummary::phi},
  };
  for (const auto& row : rows) {
    out << row.name;
    for (const auto& [_, summary] : columns) out << '\t' << cell(summary.*row.field);
    out << '\n';
  }
}

}  // namespace cswitch
