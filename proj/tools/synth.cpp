// Writes a synthetic tagged corpus whose labels depend only on switching.

#include <iostream>

#include <CLI11.hpp>

#include "cswitch/corpus.hpp"
#include "cswitch/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic code-mixed corpus"};
  cswitch::SyntheticSpec spec;
  double center = 0.0;
  app.add_option("-n,--utterances", spec.utterances)->capture_default_str();
  app.add_option("--length", spec.length)->capture_default_str();
  app.add_option("--alpha", spec.alpha, "Label slope on V")->capture_default_str();
  auto* center_opt = app.add_option("--center", center, "V at which p(positive) = 0.5");
  app.add_option("--rest-rate", spec.rest_rate)->capture_default_str();
  app.add_option("--pool", spec.pool_size, "Shared surface pool size")->capture_default_str();
  app.add_option("--seed", spec.seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  if (center_opt->count() > 0) spec.center = center;

  try {
    cswitch::write_corpus(std::cout, cswitch::make_switching_corpus(spec));
  } catch (const std::exception& e) {
    std::cerr << "cswitch-synth: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
