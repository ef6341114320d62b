#pragma once

// End-to-end classification pipeline: normalize -> fit feature space on the
// training data -> vectorize -> logistic regression. Also hosts confidence
// based negative sub-sampling and k-fold cross-validation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cswitch/corpus.hpp"
#include "cswitch/evaluation.hpp"
#include "cswitch/model.hpp"
#include "cswitch/preprocess.hpp"
#include "cswitch/textfeat.hpp"

namespace cswitch {

inline constexpr double kDefaultSubsampleTau = 0.001;

struct PipelineConfig {
  bool apply_preprocess = true;
  PreprocessConfig preprocess;
  FeatureConfig features;
  bool with_switching = true;
  TrainingMeta training;
  std::set<std::string> negation_words = default_negation_words();
  std::vector<IndicativeLexicon> extra_lexicons;
  /// When set, each training set is first scored by a pipeline fitted on it,
  /// negatives scoring below tau are removed, and the final model is refit.
  std::optional<double> subsample_tau;
  bool stratified_folds = false;
  double decision_threshold = 0.5;
};

struct TrainedPipeline {
  bool apply_preprocess = true;
  PreprocessConfig preprocess;
  FeatureSpace space;
  LinearModel model;
  double decision_threshold = 0.5;

  /// Normalized tokens (possibly empty) of one utterance.
  std::vector<Token> prepare(const LabeledUtterance& u) const;
  SparseVector encode(const LabeledUtterance& u) const;
  /// p(positive | utterance).
  double score(const LabeledUtterance& u) const;
  Label predict(const LabeledUtterance& u) const;
};

TrainedPipeline fit_pipeline(const LabeledCorpus& train, const PipelineConfig& cfg);

EvalReport evaluate(const TrainedPipeline& pipeline, const LabeledCorpus& test);

using Scorer = std::function<double(const LabeledUtterance&)>;

/// Keeps every positive and every negative whose score is >= tau, in order.
/// Throws std::invalid_argument unless tau lies in (0, 1).
LabeledCorpus subsample_negatives(const LabeledCorpus& corpus, const Scorer& scorer,
                                  double tau = kDefaultSubsampleTau);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  /// Empty when the fold was excluded (see `note`).
  std::optional<EvalReport> report;
  std::string note;
};

struct CvReport {
  std::vector<FoldResult> folds;
  /// Mean macro-F1 over non-excluded folds; empty if every fold was excluded.
  std::optional<double> mean_macro_f1;
  std::size_t folds_used = 0;
};

/// Each fold fits its vocabulary, chi-squared selection, lexicon and model
/// on its training part only. Folds with a single
/// class on either side are excluded with a warning. `threads` > 1 runs
/// folds concurrently; results do not depend on it.
CvReport cross_validate(const LabeledCorpus& corpus, const PipelineConfig& cfg, std::size_t k,
                        std::uint64_t seed, std::size_t threads = 1);

}  // namespace cswitch
