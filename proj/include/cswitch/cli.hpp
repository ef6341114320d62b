#pragma once

// Command-line front end. `run` is the whole program minus process setup, so
// tests can drive it with in-memory streams.
//
//   cswitch stats     <corpus>...            Table of Q/label association
//   cswitch features  <corpus>               JSON lines of switching features
//   cswitch train     <corpus> -o model.txt  model.txt + model.txt.space.json
//   cswitch eval      <corpus> [--model m]   EvalReport
//   cswitch cv        <corpus> [--ablate-switching]
//   cswitch subsample <corpus> [--model m] [--tau t]

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cswitch/evaluation.hpp"
#include "cswitch/pipeline.hpp"

namespace cswitch::cli {

/// Environment variable naming a default config file (INI/TOML, CLI11 style).
inline constexpr const char* kConfigEnv = "CSWITCH_CONFIG";

/// `args` excludes the program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string eval_report_json(const EvalReport& report);
EvalReport parse_eval_report_json(std::string_view text);

std::string cv_report_json(const CvReport& report);
CvReport parse_cv_report_json(std::string_view text);

/// Sidecar path holding the feature space of a saved model.
std::string feature_space_path(const std::string& model_path);

}  // namespace cswitch::cli
