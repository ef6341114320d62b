#include "cswitch/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cswitch/util.hpp"

namespace cswitch {

LinearModel::LinearModel(std::size_t dimension, TrainingMeta meta)
    : weights_(dimension, 0.0), meta_(meta) {}

LinearModel::LinearModel(std::vector<double> weights, double bias, TrainingMeta meta)
    : weights_(std::move(weights)), bias_(bias), meta_(meta) {}

namespace {

double dot(const SparseVector& x, std::span<const double> w) {
  double z = 0.0;
  for (const auto& e : x.entries()) z += w[e.index] * e.value;
  return z;
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void check_dimension(const SparseVector& x, std::size_t dimension) {
  if (x.dimension() != dimension) {
    throw std::invalid_argument("vector dimension " + std::to_string(x.dimension()) +
                                " does not match model dimension " + std::to_string(dimension));
  }
}

void check_training_input(std::span<const SparseVector> xs, std::span<const Label> ys) {
  if (xs.empty()) throw std::invalid_argument("no training examples");
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("got " + std::to_string(xs.size()) + " vectors but " +
                                std::to_string(ys.size()) + " labels");
  }
  const std::size_t dim = xs.front().dimension();
  for (const auto& x : xs) check_dimension(x, dim);
  const auto pos = std::count(ys.begin(), ys.end(), Label::positive);
  if (pos == 0 || static_cast<std::size_t>(pos) == ys.size()) {
    throw std::invalid_argument("training data contains a single class");
  }
}

}  // namespace

double LinearModel::decision_value(const SparseVector& x) const {
  check_dimension(x, weights_.size());
  return dot(x, weights_) + bias_;
}

double sigmoid(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double predict_proba(const LinearModel& model, const SparseVector& x) {
  return sigmoid(model.decision_value(x));
}

double objective(std::span<const SparseVector> xs, std::span<const Label> ys,
                 std::span<const double> weights, double bias, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double z = dot(xs[i], weights) + bias;
    // BCE = softplus(z) - y z
    loss += softplus(z) - (is_positive(ys[i]) ? z : 0.0);
  }
  loss /= static_cast<double>(xs.size());
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  return loss + 0.5 * l2 * sq;
}

LossGradient loss_and_gradient(std::span<const SparseVector> xs, std::span<const Label> ys,
                               std::span<const double> weights, double bias, double l2) {
  LossGradient out;
  out.grad_weights.assign(weights.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double z = dot(xs[i], weights) + bias;
    const double y = is_positive(ys[i]) ? 1.0 : 0.0;
    out.loss += softplus(z) - y * z;
    const double r = (sigmoid(z) - y) * inv_n;
    for (const auto& e : xs[i].entries()) out.grad_weights[e.index] += r * e.value;
    out.grad_bias += r;
  }
  out.loss *= inv_n;
  double sq = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    sq += weights[j] * weights[j];
    out.grad_weights[j] += l2 * weights[j];
  }
  out.loss += 0.5 * l2 * sq;
  return out;
}

LinearModel train(std::span<const SparseVector> xs, std::span<const Label> ys,
                  const TrainingMeta& meta, std::vector<double>* loss_history) {
  check_training_input(xs, ys);
  if (!(meta.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (meta.l2 < 0.0) throw std::invalid_argument("l2 penalty must be non-negative");

  const std::size_t dim = xs.front().dimension();
  const double inv_n = 1.0 / static_cast<double>(xs.size());

  // Diagonal curvature bound: 0.25 * mean(x_j^2) + l2 (0.25 for the bias).
  std::vector<double> curvature(dim, 0.0);
  for (const auto& x : xs) {
    for (const auto& e : x.entries()) curvature[e.index] += e.value * e.value;
  }
  for (double& c : curvature) c = 0.25 * c * inv_n + meta.l2 + 1e-12;
  constexpr double kBiasCurvature = 0.25;

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  LossGradient lg = loss_and_gradient(xs, ys, w, b, meta.l2);
  if (loss_history != nullptr) {
    loss_history->clear();
    loss_history->push_back(lg.loss);
  }

  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 40;
  double step = meta.learning_rate;
  std::vector<double> dir(dim), w_try(dim);

  for (std::size_t epoch = 0; epoch < meta.epochs; ++epoch) {
    double slope = 0.0;  // g . d, negative
    for (std::size_t j = 0; j < dim; ++j) {
      dir[j] = -lg.grad_weights[j] / curvature[j];
      slope += lg.grad_weights[j] * dir[j];
    }
    const double dir_b = -lg.grad_bias / kBiasCurvature;
    slope += lg.grad_bias * dir_b;

    bool accepted = false;
    double t = std::min(meta.learning_rate, 2.0 * step);
    double new_loss = lg.loss;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      for (std::size_t j = 0; j < dim; ++j) w_try[j] = w[j] + t * dir[j];
      new_loss = objective(xs, ys, w_try, b + t * dir_b, meta.l2);
      if (new_loss <= lg.loss + kArmijo * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    step = t;
    const double improvement = lg.loss - new_loss;
    w.swap(w_try);
    b += t * dir_b;
    lg = loss_and_gradient(xs, ys, w, b, meta.l2);
    if (loss_history != nullptr) loss_history->push_back(lg.loss);
    if (improvement <= 1e-12 * std::max(1.0, std::abs(lg.loss))) break;
  }
  return LinearModel(std::move(w), b, meta);
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr int kModelFormatVersion = 1;
constexpr std::string_view kModelMagic = "cswitch-linear-model";

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(std::string("model file truncated before ") + what);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string header_value(std::istream& in, std::string_view key) {
  const std::string line = next_line(in, std::string(key).c_str());
  const auto space = line.find(' ');
  if (space == std::string::npos || std::string_view(line).substr(0, space) != key) {
    throw std::runtime_error("model file: expected '" + std::string(key) + "', got '" + line + "'");
  }
  return line.substr(space + 1);
}

double to_double(const std::string& text, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw std::runtime_error(std::string("model file: bad ") + what + " '" + text + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& text, const char* what) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("model file: bad ") + what + " '" + text + "'");
  }
}

}  // namespace

void save_model(std::ostream& out, const LinearModel& model) {
  const auto& m = model.meta();
  out << kModelMagic << '\n'
      << "format_version " << kModelFormatVersion << '\n'
      << "dimension " << model.dimension() << '\n'
      << "epochs " << m.epochs << '\n'
      << "learning_rate " << format_double(m.learning_rate) << '\n'
      << "l2 " << format_double(m.l2) << '\n'
      << "seed " << m.seed << '\n'
      << format_double(model.bias()) << '\n';
  for (double w : model.weights()) out << format_double(w) << '\n';
}

LinearModel load_model(std::istream& in, std::optional<std::size_t> expected_dimension) {
  if (next_line(in, "magic") != kModelMagic) throw std::runtime_error("not a model file");
  const auto version = to_uint(header_value(in, "format_version"), "format_version");
  if (version != kModelFormatVersion) {
    throw std::runtime_error("unsupported model format version " + std::to_string(version));
  }
  const auto dim = static_cast<std::size_t>(to_uint(header_value(in, "dimension"), "dimension"));
  if (expected_dimension && *expected_dimension != dim) {
    throw std::runtime_error("model dimension " + std::to_string(dim) +
                             " does not match feature space dimension " +
                             std::to_string(*expected_dimension));
  }
  TrainingMeta meta;
  meta.epochs = static_cast<std::size_t>(to_uint(header_value(in, "epochs"), "epochs"));
  meta.learning_rate = to_double(header_value(in, "learning_rate"), "learning_rate");
  meta.l2 = to_double(header_value(in, "l2"), "l2");
  meta.seed = to_uint(header_value(in, "seed"), "seed");
  const double bias = to_double(next_line(in, "bias"), "bias");
  std::vector<double> weights(dim);
  for (std::size_t j = 0; j < dim; ++j) weights[j] = to_double(next_line(in, "weights"), "weight");
  std::string extra;
  while (std::getline(in, extra)) {
    if (!extra.empty() && extra != "\r") throw std::runtime_error("model file has trailing data");
  }
  return LinearModel(std::move(weights), bias, meta);
}

}  // namespace cswitch
