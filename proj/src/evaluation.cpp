#include "cswitch/evaluation.hpp"

#include <stdexcept>
#include <string>

namespace cswitch {

namespace {

double f1(std::size_t tp, std::size_t fp, std::size_t fn, bool& degenerate) {
  const std::size_t den = 2 * tp + fp + fn;
  degenerate = den == 0;
  return degenerate ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

}  // namespace

EvalReport report_from_confusion(const Confusion& c) {
  EvalReport r;
  r.confusion = c;
  r.f1_positive = f1(c.tp, c.fp, c.fn, r.positive_degenerate);
  // For the negative class the roles of fp and fn swap.
  r.f1_negative = f1(c.tn, c.fn, c.fp, r.negative_degenerate);
  r.macro_f1 = 0.5 * (r.f1_positive + r.f1_negative);
  return r;
}

EvalReport macro_f1(std::span<const Label> predictions, std::span<const Label> gold) {
  if (predictions.size() != gold.size()) {
    throw std::invalid_argument("got " + std::to_string(predictions.size()) +
                                " predictions for " + std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw std::invalid_argument("cannot score an empty prediction set");
  Confusion c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = is_positive(predictions[i]);
    const bool g = is_positive(gold[i]);
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return report_from_confusion(c);
}

}  // namespace cswitch
