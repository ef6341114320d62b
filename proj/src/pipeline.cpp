#include "cswitch/pipeline.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

#include "cswitch/util.hpp"

namespace cswitch {

std::vector<Token> TrainedPipeline::prepare(const LabeledUtterance& u) const {
  return apply_preprocess ? normalize(u.tokens(), preprocess) : u.tokens();
}

SparseVector TrainedPipeline::encode(const LabeledUtterance& u) const {
  return vectorize(prepare(u), space);
}

double TrainedPipeline::score(const LabeledUtterance& u) const {
  return predict_proba(model, encode(u));
}

Label TrainedPipeline::predict(const LabeledUtterance& u) const {
  return score(u) >= decision_threshold ? Label::positive : Label::negative;
}

namespace {

TrainedPipeline fit_once(const LabeledCorpus& corpus, const PipelineConfig& cfg) {
  TrainedPipeline p;
  p.apply_preprocess = cfg.apply_preprocess;
  p.preprocess = cfg.preprocess;
  p.decision_threshold = cfg.decision_threshold;

  const LabeledCorpus prepared =
      cfg.apply_preprocess ? normalize_corpus(corpus, cfg.preprocess) : corpus;
  if (prepared.empty()) throw std::invalid_argument("no utterances left after preprocessing");
  p.space = fit_feature_space(prepared, cfg.features, cfg.with_switching, cfg.negation_words,
                              cfg.extra_lexicons);

  std::vector<SparseVector> xs;
  std::vector<Label> ys;
  xs.reserve(prepared.size());
  ys.reserve(prepared.size());
  for (const auto& u : prepared) {
    xs.push_back(vectorize(u.tokens(), p.space));
    ys.push_back(u.label());
  }
  p.model = train(xs, ys, cfg.training);
  return p;
}

}  // namespace

TrainedPipeline fit_pipeline(const LabeledCorpus& train, const PipelineConfig& cfg) {
  if (!cfg.subsample_tau) return fit_once(train, cfg);
  const TrainedPipeline scorer = fit_once(train, cfg);
  const LabeledCorpus reduced = subsample_negatives(
      train, [&](const LabeledUtterance& u) { return scorer.score(u); }, *cfg.subsample_tau);
  if (reduced.negatives() == 0) {
    warn("sub-sampling removed every negative; keeping the full training set");
    return scorer;
  }
  return fit_once(reduced, cfg);
}

EvalReport evaluate(const TrainedPipeline& pipeline, const LabeledCorpus& test) {
  std::vector<Label> predicted, gold;
  predicted.reserve(test.size());
  gold.reserve(test.size());
  for (const auto& u : test) {
    predicted.push_back(pipeline.predict(u));
    gold.push_back(u.label());
  }
  return macro_f1(predicted, gold);
}

LabeledCorpus subsample_negatives(const LabeledCorpus& corpus, const Scorer& scorer, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");
  std::vector<std::size_t> keep;
  keep.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (is_positive(corpus[i].label()) || scorer(corpus[i]) >= tau) keep.push_back(i);
  }
  return corpus.subset(keep);
}

namespace {

FoldResult run_fold(std::size_t index, const Fold& fold, const PipelineConfig& cfg) {
  FoldResult r;
  r.fold = index;
  r.train_size = fold.train.size();
  r.test_size = fold.test.size();
  const auto single_class = [](const LabeledCorpus& c) {
    return c.positives() == 0 || c.negatives() == 0;
  };
  if (single_class(fold.train)) {
    r.note = "training part has a single class";
    return r;
  }
  if (single_class(fold.test)) {
    r.note = "test part has a single class";
    return r;
  }
  r.report = evaluate(fit_pipeline(fold.train, cfg), fold.test);
  return r;
}

}  // namespace

CvReport cross_validate(const LabeledCorpus& corpus, const PipelineConfig& cfg, std::size_t k,
                        std::uint64_t seed, std::size_t threads) {
  const auto folds = kfold(corpus, k, seed, cfg.stratified_folds);

  CvReport report;
  report.folds.resize(folds.size());
  if (threads <= 1) {
    for (std::size_t f = 0; f < folds.size(); ++f) report.folds[f] = run_fold(f, folds[f], cfg);
  } else {
    for (std::size_t start = 0; start < folds.size(); start += threads) {
      const std::size_t stop = std::min(folds.size(), start + threads);
      std::vector<std::future<FoldResult>> pending;
      for (std::size_t f = start; f < stop; ++f) {
        pending.push_back(std::async(std::launch::async, run_fold, f, std::cref(folds[f]),
                                     std::cref(cfg)));
      }
      for (std::size_t f = start; f < stop; ++f) report.folds[f] = pending[f - start].get();
    }
  }

  double sum = 0.0;
  for (const auto& fr : report.folds) {
    if (!fr.report) {
      warn("fold " + std::to_string(fr.fold) + " excluded: " + fr.note);
      continue;
    }
    sum += fr.report->macro_f1;
    ++report.folds_used;
  }
  if (report.folds_used > 0) report.mean_macro_f1 = sum / static_cast<double>(report.folds_used);
  return report;
}

}  // namespace cswitch
