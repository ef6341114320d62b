#include "cswitch/switching.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace cswitch {

const std::array<std::string_view, SwitchProfile::kSize> SwitchProfile::kNames = {
    "en_hi_switches", "hi_en_switches", "v",          "fraction_en", "fraction_hi",
    "mean_hi_en",     "stddev_hi_en",   "mean_en_hi", "stddev_en_hi"};

namespace {

void require_non_empty(std::span<const Token> tokens) {
  if (tokens.empty()) throw std::invalid_argument("token sequence is empty");
}

struct Moments {
  double mean;
  double stddev;
};

// Population moments over the full-length vector, zeros included.
Moments moments(const std::vector<std::size_t>& xs) {
  const auto n = static_cast<double>(xs.size());
  double sum = 0;
  for (auto x : xs) sum += static_cast<double>(x);
  const double mean = sum / n;
  double ss = 0;
  for (auto x : xs) {
    const double d = static_cast<double>(x) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / n)};
}

}  // namespace

SwitchVectors lang_run_vectors(std::span<const Token> tokens) {
  require_non_empty(tokens);
  SwitchVectors out;
  out.hi_en.assign(tokens.size(), 0);
  out.en_hi.assign(tokens.size(), 0);
  std::size_t hi_seen = 0;
  std::size_t en_seen = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    switch (tokens[i].tag) {
      case LangTag::en:
        out.hi_en[i] = hi_seen;
        ++en_seen;
        break;
      case LangTag::hi:
        out.en_hi[i] = en_seen;
        ++hi_seen;
        break;
      case LangTag::rest:
        break;
    }
  }
  return out;
}

SwitchCounts switch_counts(std::span<const Token> tokens) {
  require_non_empty(tokens);
  SwitchCounts c;
  std::optional<LangTag> prev;
  for (const auto& t : tokens) {
    if (t.tag == LangTag::rest) continue;
    if (prev && *prev != t.tag) {
      if (*prev == LangTag::en) {
        ++c.en_hi;
      } else {
        ++c.hi_en;
      }
    }
    prev = t.tag;
  }
  c.total = c.en_hi + c.hi_en;
  return c;
}

SwitchProfile switching_features(std::span<const Token> tokens) {
  const SwitchCounts counts = switch_counts(tokens);
  const SwitchVectors vectors = lang_run_vectors(tokens);

  std::size_t n_en = 0;
  std::size_t n_hi = 0;
  for (const auto& t : tokens) {
    if (t.tag == LangTag::en) ++n_en;
    if (t.tag == LangTag::hi) ++n_hi;
  }
  const auto n = static_cast<double>(tokens.size());
  const Moments hi_en = moments(vectors.hi_en);
  const Moments en_hi = moments(vectors.en_hi);

  SwitchProfile p;
  p.en_hi_switches = static_cast<double>(counts.en_hi);
  p.hi_en_switches = static_cast<double>(counts.hi_en);
  p.v = static_cast<double>(counts.total);
  p.fraction_en = static_cast<double>(n_en) / n;
  p.fraction_hi = static_cast<double>(n_hi) / n;
  p.mean_hi_en = hi_en.mean;
  p.stddev_hi_en = hi_en.stddev;
  p.mean_en_hi = en_hi.mean;
  p.stddev_en_hi = en_hi.stddev;
  return p;
}

bool has_embedding_property(std::span<const Token> tokens, SurroundMode mode) {
  require_non_empty(tokens);
  std::vector<LangTag> proj;
  proj.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t.tag != LangTag::rest) proj.push_back(t.tag);
  }

  if (mode == SurroundMode::immediate) {
    for (std::size_t i = 1; i + 1 < proj.size(); ++i) {
      if (proj[i] == LangTag::en && proj[i - 1] == LangTag::hi && proj[i + 1] == LangTag::hi) {
        return true;
      }
    }
    return false;
  }

  // anywhere: an en strictly between the first and the last hi.
  std::size_t first_hi = proj.size();
  std::size_t last_hi = 0;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (proj[i] != LangTag::hi) continue;
    if (first_hi == proj.size()) first_hi = i;
    last_hi = i;
  }
  for (std::size_t i = first_hi + 1; i < last_hi; ++i) {
    if (proj[i] == LangTag::en) return true;
  }
  return false;
}

}  // namespace cswitch
