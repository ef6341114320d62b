#include "cswitch/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "cswitch/model.hpp"
#include "cswitch/switching.hpp"

namespace cswitch {

namespace {

// mt19937_64 output is fully specified; the standard distributions are not.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

std::vector<std::string> make_pool(std::size_t size, std::mt19937_64& rng) {
  static constexpr const char* kOnsets[] = {"k", "g", "ch", "j", "t", "d", "n", "p", "b",
                                            "m", "y", "r", "l", "v", "sh", "s", "h", "bh"};
  static constexpr const char* kVowels[] = {"a", "aa", "i", "ee", "u", "oo", "e", "ai", "o"};
  std::vector<std::string> pool;
  pool.reserve(size);
  while (pool.size() < size) {
    const std::size_t syllables = 1 + uniform_index(rng, 3);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w += kOnsets[uniform_index(rng, std::size(kOnsets))];
      w += kVowels[uniform_index(rng, std::size(kVowels))];
    }
    pool.push_back(std::move(w));
  }
  return pool;
}

}  // namespace

LabeledCorpus make_switching_corpus(const SyntheticSpec& spec, std::string task_name) {
  if (spec.utterances == 0 || spec.length == 0 || spec.pool_size == 0) {
    throw std::invalid_argument("synthetic corpus needs utterances, length and pool size > 0");
  }
  std::mt19937_64 rng(spec.seed);
  const auto pool = make_pool(spec.pool_size, rng);

  std::vector<std::vector<Token>> sentences;
  std::vector<double> vs;
  sentences.reserve(spec.utterances);
  for (std::size_t i = 0; i < spec.utterances; ++i) {
    const double rate =
        spec.min_switch_rate + (spec.max_switch_rate - spec.min_switch_rate) * uniform01(rng);
    LangTag lang = uniform01(rng) < 0.5 ? LangTag::hi : LangTag::en;
    std::vector<Token> tokens;
    tokens.reserve(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) {
      const std::string& surface = pool[uniform_index(rng, pool.size())];
      if (uniform01(rng) < spec.rest_rate) {
        tokens.push_back({surface, LangTag::rest});
        continue;
      }
      if (!tokens.empty() && uniform01(rng) < rate) {
        lang = lang == LangTag::hi ? LangTag::en : LangTag::hi;
      }
      tokens.push_back({surface, lang});
    }
    vs.push_back(static_cast<double>(switch_counts(tokens).total));
    sentences.push_back(std::move(tokens));
  }

  double center = 0.0;
  if (spec.center) {
    center = *spec.center;
  } else {
    for (double v : vs) center += v;
    center /= static_cast<double>(vs.size());
  }

  std::vector<LabeledUtterance> utterances;
  utterances.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const double p = sigmoid(spec.alpha * (vs[i] - center));
    const Label label = uniform01(rng) < p ? Label::positive : Label::negative;
    utterances.emplace_back(std::move(sentences[i]), label, i);
  }
  return LabeledCorpus(std::move(task_name), std::move(utterances));
}

}  // namespace cswitch
