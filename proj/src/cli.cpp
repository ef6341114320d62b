#include "cswitch/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "cswitch/corpus.hpp"
#include "cswitch/preprocess.hpp"
#include "cswitch/stats.hpp"
#include "cswitch/switching.hpp"
#include "cswitch/textfeat.hpp"
#include "cswitch/util.hpp"

namespace cswitch::cli {

using ojson = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::string format;
  std::uint64_t seed = 42;

  bool raw = false;
  bool no_segment_hashtags = false;
  bool no_hashtag_placeholder = false;
  std::string punct = std::string(kDefaultPunctuation);
  std::string surround = "immediate";

  std::vector<std::string> kinds = {"char_ngram", "word_ngram"};
  std::vector<int> char_n = {3};
  std::vector<int> word_n = {1, 2};
  std::size_t min_count = 1;
  std::size_t chi2_k = 500;
  std::vector<std::string> chi2_kinds = {"word_ngram", "bow"};
  bool no_switching = false;
  std::string negation_file;
  std::vector<std::string> lexicon_files;

  std::size_t epochs = TrainingMeta{}.epochs;
  double learning_rate = TrainingMeta{}.learning_rate;
  double l2 = TrainingMeta{}.l2;

  std::string model;
  double train_fraction = 0.8;
  std::size_t k = 10;
  bool ablate_switching = false;
  bool stratified = false;
  std::optional<double> cv_subsample_tau;
  double tau = kDefaultSubsampleTau;
  std::size_t threads = 1;
};

class WarningRedirect {
 public:
  explicit WarningRedirect(std::ostream& err)
      : previous_(set_warning_sink([&err](std::string_view m) { err << "warning: " << m << '\n'; })) {}
  ~WarningRedirect() { set_warning_sink(std::move(previous_)); }
  WarningRedirect(const WarningRedirect&) = delete;
  WarningRedirect& operator=(const WarningRedirect&) = delete;

 private:
  WarningSink previous_;
};

std::set<FeatureKind> parse_kinds(const std::vector<std::string>& names) {
  std::set<FeatureKind> kinds;
  for (const auto& n : names) {
    FeatureKind k;
    if (!parse_feature_kind(n, k) || k == FeatureKind::special) {
      throw std::invalid_argument("unknown feature kind '" + n + "'");
    }
    kinds.insert(k);
  }
  return kinds;
}

SurroundMode surround_mode(const RunConfig& rc) {
  if (rc.surround == "immediate") return SurroundMode::immediate;
  if (rc.surround == "anywhere") return SurroundMode::anywhere;
  throw std::invalid_argument("--surround must be 'immediate' or 'anywhere'");
}

PreprocessConfig preprocess_config(const RunConfig& rc) {
  PreprocessConfig p;
  p.segment_hashtags = !rc.no_segment_hashtags;
  p.keep_hashtag_placeholder = !rc.no_hashtag_placeholder;
  p.punctuation_set = rc.punct;
  p.strip_punctuation = !rc.punct.empty();
  p.validate();
  return p;
}

PipelineConfig pipeline_config(const RunConfig& rc) {
  PipelineConfig cfg;
  cfg.apply_preprocess = !rc.raw;
  cfg.preprocess = preprocess_config(rc);
  cfg.features.kinds = parse_kinds(rc.kinds);
  cfg.features.char_n = rc.char_n;
  cfg.features.word_n = rc.word_n;
  cfg.features.min_count = rc.min_count;
  cfg.features.chi2_k = rc.chi2_k;
  cfg.features.chi2_kinds = parse_kinds(rc.chi2_kinds);
  cfg.with_switching = !rc.no_switching;
  cfg.training.epochs = rc.epochs;
  cfg.training.learning_rate = rc.learning_rate;
  cfg.training.l2 = rc.l2;
  cfg.training.seed = rc.seed;
  cfg.stratified_folds = rc.stratified;
  cfg.subsample_tau = rc.cv_subsample_tau;
  if (!rc.negation_file.empty()) {
    std::ifstream in(rc.negation_file);
    if (!in) throw std::runtime_error("cannot open negation list '" + rc.negation_file + "'");
    cfg.negation_words = read_word_list(in);
  }
  for (const auto& path : rc.lexicon_files) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon '" + path + "'");
    cfg.extra_lexicons.push_back(read_lexicon(in, path));
  }
  return cfg;
}

LabeledCorpus load_prepared(const std::string& path, const RunConfig& rc, std::ostream& err) {
  LabeledCorpus corpus = load_corpus_file(path);
  if (rc.raw) return corpus;
  std::vector<std::size_t> dropped;
  LabeledCorpus prepared = normalize_corpus(corpus, preprocess_config(rc), &dropped);
  for (auto id : dropped) {
    err << "warning: " << path << ": utterance " << id << " is empty after preprocessing\n";
  }
  if (prepared.empty()) throw std::runtime_error(path + ": empty corpus after preprocessing");
  return prepared;
}

std::string format_or(const RunConfig& rc, const char* fallback) {
  const std::string f = rc.format.empty() ? fallback : rc.format;
  if (f != "json" && f != "tsv") throw std::invalid_argument("--format must be json or tsv");
  return f;
}

ojson optional_number(const std::optional<double>& x) {
  return x ? ojson(*x) : ojson(nullptr);
}

ojson eval_to_json(const EvalReport& r) {
  ojson j;
  j["macro_f1"] = r.macro_f1;
  j["f1_positive"] = r.f1_positive;
  j["f1_negative"] = r.f1_negative;
  j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                    {"fn", r.confusion.fn}, {"tn", r.confusion.tn}};
  j["positive_degenerate"] = r.positive_degenerate;
  j["negative_degenerate"] = r.negative_degenerate;
  return j;
}

EvalReport eval_from_json(const ojson& j) {
  EvalReport r;
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.f1_positive = j.at("f1_positive").get<double>();
  r.f1_negative = j.at("f1_negative").get<double>();
  const auto& c = j.at("confusion");
  r.confusion = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                 c.at("fn").get<std::size_t>(), c.at("tn").get<std::size_t>()};
  r.positive_degenerate = j.at("positive_degenerate").get<bool>();
  r.negative_degenerate = j.at("negative_degenerate").get<bool>();
  return r;
}

ojson cv_to_json(const CvReport& cv) {
  ojson folds = ojson::array();
  for (const auto& f : cv.folds) {
    ojson jf;
    jf["fold"] = f.fold;
    jf["train_size"] = f.train_size;
    jf["test_size"] = f.test_size;
    jf["excluded"] = !f.report.has_value();
    if (f.report) {
      jf["report"] = eval_to_json(*f.report);
    } else {
      jf["note"] = f.note;
    }
    folds.push_back(std::move(jf));
  }
  ojson j;
  j["folds"] = std::move(folds);
  j["folds_used"] = cv.folds_used;
  j["mean_macro_f1"] = optional_number(cv.mean_macro_f1);
  return j;
}

CvReport cv_from_json(const ojson& j) {
  CvReport cv;
  for (const auto& jf : j.at("folds")) {
    FoldResult f;
    f.fold = jf.at("fold").get<std::size_t>();
    f.train_size = jf.at("train_size").get<std::size_t>();
    f.test_size = jf.at("test_size").get<std::size_t>();
    if (jf.at("excluded").get<bool>()) {
      f.note = jf.at("note").get<std::string>();
    } else {
      f.report = eval_from_json(jf.at("report"));
    }
    cv.folds.push_back(std::move(f));
  }
  cv.folds_used = j.at("folds_used").get<std::size_t>();
  if (!j.at("mean_macro_f1").is_null()) cv.mean_macro_f1 = j.at("mean_macro_f1").get<double>();
  return cv;
}

std::string tsv_number(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string("NA");
}

void eval_tsv_header(std::ostream& os) {
  os << "macro_f1\tf1_positive\tf1_negative\ttp\tfp\tfn\ttn";
}

void eval_tsv_row(std::ostream& os, const EvalReport& r) {
  os << format_double(r.macro_f1) << '\t' << format_double(r.f1_positive) << '\t'
     << format_double(r.f1_negative) << '\t' << r.confusion.tp << '\t' << r.confusion.fp << '\t'
     << r.confusion.fn << '\t' << r.confusion.tn;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the full output text.

std::string cmd_stats(const RunConfig& rc, std::ostream& err) {
  const auto mode = surround_mode(rc);
  std::vector<std::pair<std::string, SwitchTaskSummary>> columns;
  for (const auto& path : rc.inputs) {
    const LabeledCorpus corpus = load_prepared(path, rc, err);
    columns.emplace_back(corpus.task_name(), summarize(corpus, mode));
  }
  std::ostringstream os;
  if (format_or(rc, "tsv") == "tsv") {
    write_summary_tsv(os, columns);
    return os.str();
  }
  ojson arr = ojson::array();
  for (const auto& [task, s] : columns) {
    ojson j;
    j["task"] = task;
    j["p_pos_given_q"] = optional_number(s.p_pos_given_q);
    j["p_pos_given_not_q"] = optional_number(s.p_pos_given_not_q);
    j["avg_switch_pos"] = optional_number(s.avg_switch_pos);
    j["avg_switch_neg"] = optional_number(s.avg_switch_neg);
    j["phi"] = optional_number(s.phi);
    j["counts"] = {{"n11", s.counts.n11}, {"n10", s.counts.n10},
                   {"n01", s.counts.n01}, {"n00", s.counts.n00}};
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string cmd_features(const RunConfig& rc, std::ostream& err) {
  const auto mode = surround_mode(rc);
  const LabeledCorpus corpus = load_prepared(rc.inputs.front(), rc, err);
  const bool tsv = format_or(rc, "json") == "tsv";
  std::ostringstream os;
  if (tsv) {
    os << "id\tlabel\tq";
    for (auto name : SwitchProfile::kNames) os << '\t' << name;
    os << '\n';
  }
  for (const auto& u : corpus) {
    const SwitchProfile p = switching_features(u.tokens());
    const bool q = has_embedding_property(u.tokens(), mode);
    if (tsv) {
      os << u.id() << '\t' << (is_positive(u.label()) ? 1 : 0) << '\t' << (q ? 1 : 0);
      for (double x : p.values()) os << '\t' << format_double(x);
      os << '\n';
      continue;
    }
    const SwitchCounts c = switch_counts(u.tokens());
    ojson j;
    j["id"] = u.id();
    j["label"] = is_positive(u.label()) ? 1 : 0;
    j["q"] = q;
    j["en_hi_switches"] = c.en_hi;
    j["hi_en_switches"] = c.hi_en;
    j["v"] = c.total;
    j["fraction_en"] = p.fraction_en;
    j["fraction_hi"] = p.fraction_hi;
    j["mean_hi_en"] = p.mean_hi_en;
    j["stddev_hi_en"] = p.stddev_hi_en;
    j["mean_en_hi"] = p.mean_en_hi;
    j["stddev_en_hi"] = p.stddev_en_hi;
    os << j.dump() << '\n';
  }
  return os.str();
}

void cmd_train(const RunConfig& rc) {
  if (rc.output.empty()) throw std::invalid_argument("train requires --output <model path>");
  const LabeledCorpus corpus = load_corpus_file(rc.inputs.front());
  const TrainedPipeline p = fit_pipeline(corpus, pipeline_config(rc));

  std::ostringstream model_text, space_text;
  save_model(model_text, p.model);
  save_feature_space(space_text, p.space);
  // The sidecar also records how utterances were normalized at training time.
  ojson sidecar = ojson::parse(space_text.str());
  sidecar["preprocess"] = {{"apply", p.apply_preprocess},
                           {"keep_hashtag_placeholder", p.preprocess.keep_hashtag_placeholder},
                           {"segment_hashtags", p.preprocess.segment_hashtags},
                           {"strip_punctuation", p.preprocess.strip_punctuation},
                           {"punctuation_set", p.preprocess.punctuation_set}};
  const std::string space_path = feature_space_path(rc.output);
  write_file_atomically(space_path, sidecar.dump(1) + "\n");
  try {
    write_file_atomically(rc.output, model_text.str());
  } catch (...) {
    std::remove(space_path.c_str());
    throw;
  }
}

TrainedPipeline load_trained(const RunConfig& rc) {
  std::ifstream space_in(feature_space_path(rc.model));
  if (!space_in) throw std::runtime_error("cannot open '" + feature_space_path(rc.model) + "'");
  const std::string text((std::istreambuf_iterator<char>(space_in)), std::istreambuf_iterator<char>());
  TrainedPipeline p;
  std::istringstream space_text(text);
  p.space = load_feature_space(space_text);
  std::ifstream model_in(rc.model);
  if (!model_in) throw std::runtime_error("cannot open model '" + rc.model + "'");
  p.model = load_model(model_in, p.space.dimension());

  const ojson sidecar = ojson::parse(text);
  if (!sidecar.contains("preprocess")) {
    p.apply_preprocess = !rc.raw;
    p.preprocess = preprocess_config(rc);
    return p;
  }
  try {
    const auto& pj = sidecar.at("preprocess");
    p.apply_preprocess = pj.at("apply").get<bool>();
    p.preprocess.keep_hashtag_placeholder = pj.at("keep_hashtag_placeholder").get<bool>();
    p.preprocess.segment_hashtags = pj.at("segment_hashtags").get<bool>();
    p.preprocess.strip_punctuation = pj.at("strip_punctuation").get<bool>();
    p.preprocess.punctuation_set = pj.at("punctuation_set").get<std::string>();
    p.preprocess.validate();
  } catch (const ojson::exception& e) {
    throw std::runtime_error(feature_space_path(rc.model) + ": " + e.what());
  }
  return p;
}

std::string cmd_eval(const RunConfig& rc) {
  const LabeledCorpus corpus = load_corpus_file(rc.inputs.front());
  EvalReport report;
  ojson j;
  j["task"] = corpus.task_name();
  if (!rc.model.empty()) {
    report = evaluate(load_trained(rc), corpus);
    j["test_size"] = corpus.size();
  } else {
    const auto [train, test] = split_train_test(corpus, rc.train_fraction, rc.seed);
    report = evaluate(fit_pipeline(train, pipeline_config(rc)), test);
    j["train_size"] = train.size();
    j["test_size"] = test.size();
  }
  if (format_or(rc, "json") == "tsv") {
    std::ostringstream os;
    eval_tsv_header(os);
    os << '\n';
    eval_tsv_row(os, report);
    os << '\n';
    return os.str();
  }
  j["report"] = eval_to_json(report);
  return j.dump(2) + "\n";
}

std::string cmd_cv(const RunConfig& rc) {
  const LabeledCorpus corpus = load_corpus_file(rc.inputs.front());
  PipelineConfig cfg = pipeline_config(rc);

  std::vector<std::pair<std::string, CvReport>> variants;
  if (rc.ablate_switching) {
    cfg.with_switching = false;
    variants.emplace_back("without_switching", cross_validate(corpus, cfg, rc.k, rc.seed, rc.threads));
    cfg.with_switching = true;
    variants.emplace_back("with_switching", cross_validate(corpus, cfg, rc.k, rc.seed, rc.threads));
  } else {
    variants.emplace_back(cfg.with_switching ? "with_switching" : "without_switching",
                          cross_validate(corpus, cfg, rc.k, rc.seed, rc.threads));
  }
  std::optional<double> delta;
  if (variants.size() == 2 && variants[0].second.mean_macro_f1 &&
      variants[1].second.mean_macro_f1) {
    delta = *variants[1].second.mean_macro_f1 - *variants[0].second.mean_macro_f1;
  }

  if (format_or(rc, "json") == "tsv") {
    std::ostringstream os;
    os << "variant\tfold\ttrain_size\ttest_size\t";
    eval_tsv_header(os);
    os << '\n';
    for (const auto& [name, cv] : variants) {
      for (const auto& f : cv.folds) {
        os << name << '\t' << f.fold << '\t' << f.train_size << '\t' << f.test_size << '\t';
        if (f.report) {
          eval_tsv_row(os, *f.report);
        } else {
          os << "NA\tNA\tNA\tNA\tNA\tNA\tNA";
        }
        os << '\n';
      }
      os << name << "\tmean\t\t\t" << tsv_number(cv.mean_macro_f1) << "\t\t\t\t\t\t\n";
    }
    if (rc.ablate_switching) os << "delta\t\t\t\t" << tsv_number(delta) << "\t\t\t\t\t\t\n";
    return os.str();
  }

  ojson j;
  j["task"] = corpus.task_name();
  j["k"] = rc.k;
  j["seed"] = rc.seed;
  for (const auto& [name, cv] : variants) j[name] = cv_to_json(cv);
  if (rc.ablate_switching) j["delta_macro_f1"] = optional_number(delta);
  return j.dump(2) + "\n";
}

std::string cmd_subsample(const RunConfig& rc) {
  const LabeledCorpus corpus = load_corpus_file(rc.inputs.front());
  const TrainedPipeline scorer =
      rc.model.empty() ? fit_pipeline(corpus, pipeline_config(rc)) : load_trained(rc);
  const LabeledCorpus kept = subsample_negatives(
      corpus, [&](const LabeledUtterance& u) { return scorer.score(u); }, rc.tau);
  std::ostringstream os;
  write_corpus(os, kept);
  return os.str();
}

void add_common(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
  cmd->add_option("--format", rc.format, "Output format: json or tsv");
  cmd->add_option("-o,--output", rc.output, "Output file (default: stdout)");
  cmd->add_flag("--raw", rc.raw, "Skip preprocessing");
  cmd->add_flag("--no-segment-hashtags", rc.no_segment_hashtags,
                "Do not split camel-case hashtags");
  cmd->add_flag("--no-hashtag-placeholder", rc.no_hashtag_placeholder,
                "Do not emit the 'hashtag' placeholder");
  cmd->add_option("--punct", rc.punct, "Punctuation characters stripped from token edges");
}

void add_model_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--kinds", rc.kinds, "Feature kinds: char_ngram, word_ngram, bow")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--char-n", rc.char_n, "Character n-gram orders")->delimiter(',')->capture_default_str();
  cmd->add_option("--word-n", rc.word_n, "Word n-gram orders")->delimiter(',')->capture_default_str();
  cmd->add_option("--min-count", rc.min_count, "Minimum corpus count of a feature")->capture_default_str();
  cmd->add_option("--chi2-k", rc.chi2_k, "Chi-squared top-k (0 disables)")->capture_default_str();
  cmd->add_option("--chi2-kinds", rc.chi2_kinds, "Kinds subject to chi-squared selection")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_flag("--no-switching", rc.no_switching, "Leave out the nine switching features");
  cmd->add_option("--negation-file", rc.negation_file, "Negation word list")->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", rc.lexicon_files, "Extra token<TAB>score lexicon (repeatable)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--epochs", rc.epochs, "Maximum training epochs")->capture_default_str();
  cmd->add_option("--lr", rc.learning_rate, "Initial line-search step")->capture_default_str();
  cmd->add_option("--l2", rc.l2, "L2 penalty")->capture_default_str();
}

}  // namespace

std::string eval_report_json(const EvalReport& report) { return eval_to_json(report).dump(2); }

EvalReport parse_eval_report_json(std::string_view text) {
  return eval_from_json(ojson::parse(text));
}

std::string cv_report_json(const CvReport& report) { return cv_to_json(report).dump(2); }

CvReport parse_cv_report_json(std::string_view text) { return cv_from_json(ojson::parse(text)); }

std::string feature_space_path(const std::string& model_path) {
  return model_path + ".space.json";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Code-switching features and switching-aware text classification"};
  app.name("cswitch");
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file with option defaults")->envname(kConfigEnv);

  RunConfig rc;
  auto* stats = app.add_subcommand("stats", "Association between embedded English and the label");
  stats->add_option("inputs", rc.inputs, "Tagged corpora (one column each)")->required();
  stats->add_option("--surround", rc.surround, "immediate or anywhere")->capture_default_str();
  add_common(stats, rc);

  auto* features = app.add_subcommand("features", "Per-utterance switching features");
  features->add_option("input", rc.inputs, "Tagged corpus")->required()->expected(1);
  features->add_option("--surround", rc.surround, "immediate or anywhere")->capture_default_str();
  add_common(features, rc);

  auto* train_cmd = app.add_subcommand("train", "Train a classifier");
  train_cmd->add_option("input", rc.inputs, "Tagged corpus")->required()->expected(1);
  add_common(train_cmd, rc);
  add_model_options(train_cmd, rc);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model, or train/test split");
  eval_cmd->add_option("input", rc.inputs, "Tagged corpus")->required()->expected(1);
  eval_cmd->add_option("--model", rc.model, "Saved model (otherwise split and train)");
  eval_cmd->add_option("--train-fraction", rc.train_fraction, "Train share of the split")
      ->capture_default_str();
  add_common(eval_cmd, rc);
  add_model_options(eval_cmd, rc);

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
  cv->add_option("input", rc.inputs, "Tagged corpus")->required()->expected(1);
  cv->add_option("--k", rc.k, "Number of folds")->capture_default_str();
  cv->add_flag("--ablate-switching", rc.ablate_switching,
               "Run with and without switching features and report the difference");
  cv->add_flag("--stratified", rc.stratified, "Stratify folds by label");
  cv->add_option("--subsample-tau", rc.cv_subsample_tau,
                 "Sub-sample easy negatives of each training fold below this score");
  cv->add_option("--threads", rc.threads, "Folds run concurrently")->capture_default_str();
  add_common(cv, rc);
  add_model_options(cv, rc);

  auto* sub = app.add_subcommand("subsample", "Drop negatives the scorer is confident about");
  sub->add_option("input", rc.inputs, "Tagged corpus")->required()->expected(1);
  sub->add_option("--model", rc.model, "Saved scorer (otherwise trained on the input)");
  sub->add_option("--tau", rc.tau, "Score threshold")->capture_default_str();
  add_common(sub, rc);
  add_model_options(sub, rc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  WarningRedirect redirect(err);
  try {
    std::string text;
    if (stats->parsed()) {
      text = cmd_stats(rc, err);
    } else if (features->parsed()) {
      text = cmd_features(rc, err);
    } else if (train_cmd->parsed()) {
      cmd_train(rc);
      return 0;
    } else if (eval_cmd->parsed()) {
      text = cmd_eval(rc);
    } else if (cv->parsed()) {
      text = cmd_cv(rc);
    } else {
      text = cmd_subsample(rc);
    }
    if (rc.output.empty()) {
      out << text;
    } else {
      write_file_atomically(rc.output, text);
    }
    return 0;
  } catch (const std::exception& e) {
    err << "cswitch: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cswitch::cli
