#pragma once

// L2-regularized logistic regression over sparse vectors.
//
// Objective (bias unpenalized):
//
//   J(w, b) = (1/n) sum_i BCE(y_i, sigmoid(w.x_i + b)) + (l2/2) |w|^2
//
// Training is full-batch gradient descent with a diagonal preconditioner and
// Armijo backtracking, so J never increases from one epoch to the next.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cswitch/corpus.hpp"
#include "cswitch/textfeat.hpp"

namespace cswitch {

struct TrainingMeta {
  std::size_t epochs = 200;
  double learning_rate = 1.0;  ///< initial step of the line search
  double l2 = 1e-3;
  /// Recorded for provenance. The full-batch solver starts from zero and is
  /// deterministic for any seed.
  std::uint64_t seed = 42;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

class LinearModel {
 public:
  LinearModel() = default;
  /// All-zero model: predicts 0.5 everywhere.
  explicit LinearModel(std::size_t dimension, TrainingMeta meta = {});
  LinearModel(std::vector<double> weights, double bias, TrainingMeta meta = {});

  std::size_t dimension() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  const TrainingMeta& meta() const noexcept { return meta_; }

  /// w.x + b. Throws std::invalid_argument on a dimension mismatch.
  double decision_value(const SparseVector& x) const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  TrainingMeta meta_;
};

double sigmoid(double z) noexcept;

double predict_proba(const LinearModel& model, const SparseVector& x);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

/// Objective and its analytic gradient at (weights, bias).
LossGradient loss_and_gradient(std::span<const SparseVector> xs, std::span<const Label> ys,
                               std::span<const double> weights, double bias, double l2);

/// Objective only.
double objective(std::span<const SparseVector> xs, std::span<const Label> ys,
                 std::span<const double> weights, double bias, double l2);

/// Throws std::invalid_argument on empty input, a single class, mismatched
/// lengths, or vectors of differing dimension. When `loss_history` is given
/// it receives J at the start and after every epoch.
LinearModel train(std::span<const SparseVector> xs, std::span<const Label> ys,
                  const TrainingMeta& meta = {}, std::vector<double>* loss_history = nullptr);

/// Flat text format: a header of `key value` lines (format_version,
/// dimension, epochs, learning_rate, l2, seed), then the bias, then one
/// weight per line.
void save_model(std::ostream& out, const LinearModel& model);

/// Throws std::runtime_error on malformed input or when the stored dimension
/// differs from `expected_dimension`.
LinearModel load_model(std::istream& in, std::optional<std::size_t> expected_dimension = {});

}  // namespace cswitch
