#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "cswitch/switching.hpp"

using namespace cswitch;

namespace {

std::vector<Token> seq(std::string_view tags) {
  std::vector<Token> out;
  for (char c : tags) {
    const LangTag t = c == 'h' ? LangTag::hi : c == 'e' ? LangTag::en : LangTag::rest;
    out.push_back({std::string(1, c), t});
  }
  return out;
}

std::vector<Token> pray_sentence() {
  std::vector<Token> out;
  for (const char* w : {"koi", "to", "pray", "karo", "mere", "liye", "bhi"}) {
    out.push_back({w, std::string_view(w) == "pray" ? LangTag::en : LangTag::hi});
  }
  return out;
}

std::vector<Token> random_seq(std::mt19937_64& rng, std::size_t max_len = 50) {
  std::vector<Token> out(1 + rng() % max_len);
  for (auto& t : out) t = {"w", static_cast<LangTag>(rng() % 3)};
  return out;
}

// Brute-force oracles: recount everything from scratch at each position.
SwitchVectors brute_vectors(const std::vector<Token>& ts) {
  SwitchVectors v{std::vector<std::size_t>(ts.size()), std::vector<std::size_t>(ts.size())};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (ts[i].tag == LangTag::en && ts[j].tag == LangTag::hi) ++v.hi_en[i];
      if (ts[i].tag == LangTag::hi && ts[j].tag == LangTag::en) ++v.en_hi[i];
    }
  }
  return v;
}

SwitchCounts brute_counts(const std::vector<Token>& ts) {
  SwitchCounts c;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].tag == LangTag::rest) continue;
    // next hi/en token after i
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      if (ts[j].tag == LangTag::rest) continue;
      if (ts[i].tag == LangTag::en && ts[j].tag == LangTag::hi) ++c.en_hi;
      if (ts[i].tag == LangTag::hi && ts[j].tag == LangTag::en) ++c.hi_en;
      break;
    }
  }
  c.total = c.en_hi + c.hi_en;
  return c;
}

bool brute_q(const std::vector<Token>& ts) {
  std::vector<LangTag> p;
  for (const auto& t : ts) {
    if (t.tag != LangTag::rest) p.push_back(t.tag);
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i] == LangTag::en && p[i - 1] == LangTag::hi && p[i + 1] == LangTag::hi) return true;
  }
  return false;
}

std::vector<Token> swapped(std::vector<Token> ts) {
  for (auto& t : ts) {
    if (t.tag == LangTag::hi) {
      t.tag = LangTag::en;
    } else if (t.tag == LangTag::en) {
      t.tag = LangTag::hi;
    }
  }
  return ts;
}

// Population stddev from integer sums: sqrt((n * sum(x^2) - sum(x)^2) / n^2).
double exact_stddev(const std::vector<std::size_t>& xs) {
  long double n = xs.size(), s = 0, s2 = 0;
  for (auto x : xs) {
    s += x;
    s2 += static_cast<long double>(x) * x;
  }
  return static_cast<double>(std::sqrt((n * s2 - s * s) / (n * n)));
}

}  // namespace

TEST(LangRunVectors, PraySentence) {
  const auto v = lang_run_vectors(pray_sentence());
  EXPECT_EQ(v.hi_en, (std::vector<std::size_t>{0, 0, 2, 0, 0, 0, 0}));
  EXPECT_EQ(v.en_hi, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 1}));
}

TEST(LangRunVectors, Alternating) {
  const auto v = lang_run_vectors(seq("eheh"));
  EXPECT_EQ(v.hi_en, (std::vector<std::size_t>{0, 0, 1, 0}));
  EXPECT_EQ(v.en_hi, (std::vector<std::size_t>{0, 1, 0, 2}));
}

TEST(SwitchCounts, Examples) {
  EXPECT_EQ(switch_counts(pray_sentence()), (SwitchCounts{1, 1, 2}));
  EXPECT_EQ(switch_counts(seq("eheh")), (SwitchCounts{2, 1, 3}));
  EXPECT_EQ(switch_counts(seq("hhhh")), (SwitchCounts{0, 0, 0}));
  EXPECT_EQ(switch_counts(seq("hrrer")), (SwitchCounts{0, 1, 1}));
}

TEST(SwitchingFeatures, PraySentence) {
  const auto f = switching_features(pray_sentence()).values();
  const std::array<double, 9> expected = {
      1, 1, 2, 1.0 / 7, 6.0 / 7, 2.0 / 7, exact_stddev({0, 0, 2, 0, 0, 0, 0}), 4.0 / 7,
      exact_stddev({0, 0, 0, 1, 1, 1, 1})};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(f[i], expected[i], 1e-12) << i;
  EXPECT_NEAR(f[6], 0.699854, 1e-6);
  EXPECT_NEAR(f[8], 0.494872, 1e-6);
  EXPECT_EQ(std::floor(f[6] * 100) / 100, 0.69);
  EXPECT_EQ(std::floor(f[8] * 100) / 100, 0.49);
}

TEST(SwitchingFeatures, AllHindi) {
  const auto f = switching_features(seq("hhh")).values();
  const std::array<double, 9> expected = {0, 0, 0, 0, 1, 0, 0, 0, 0};
  EXPECT_EQ(f, expected);
}

TEST(SwitchingFeatures, Alternating) {
  const auto f = switching_features(seq("eheh")).values();
  const std::array<double, 9> expected = {2, 1, 3, 0.5, 0.5, 0.25, exact_stddev({0, 0, 1, 0}),
                                          0.75, exact_stddev({0, 1, 0, 2})};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(f[i], expected[i], 1e-12) << i;
  EXPECT_NEAR(f[6], 0.4330, 1e-4);
  EXPECT_NEAR(f[8], 0.8292, 1e-4);
}

TEST(SwitchingFeatures, EmptyThrows) {
  const std::vector<Token> none;
  EXPECT_THROW(switching_features(none), std::invalid_argument);
  EXPECT_THROW(lang_run_vectors(none), std::invalid_argument);
  EXPECT_THROW(switch_counts(none), std::invalid_argument);
  EXPECT_THROW(has_embedding_property(none), std::invalid_argument);
}

TEST(SwitchingFeatures, NamesInCanonicalOrder) {
  EXPECT_EQ(SwitchProfile::kNames.front(), "en_hi_switches");
  EXPECT_EQ(SwitchProfile::kNames.back(), "stddev_en_hi");
}

TEST(EmbeddingProperty, Examples) {
  EXPECT_TRUE(has_embedding_property(pray_sentence()));
  EXPECT_FALSE(has_embedding_property(seq("hhhh")));
  EXPECT_FALSE(has_embedding_property(seq("ehh")));
  EXPECT_TRUE(has_embedding_property(seq("hrerh")));
  EXPECT_FALSE(has_embedding_property(seq("heeh")));
  EXPECT_TRUE(has_embedding_property(seq("heeh"), SurroundMode::anywhere));
  EXPECT_FALSE(has_embedding_property(seq("hee"), SurroundMode::anywhere));
}

TEST(SwitchingProperties, MatchBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto ts = random_seq(rng);
    EXPECT_EQ(lang_run_vectors(ts), brute_vectors(ts));
    EXPECT_EQ(switch_counts(ts), brute_counts(ts));
    EXPECT_EQ(has_embedding_property(ts), brute_q(ts));
  }
}

TEST(SwitchingProperties, TagSwapSymmetry) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto ts = random_seq(rng);
    const auto a = switching_features(ts);
    const auto b = switching_features(swapped(ts));
    EXPECT_EQ(a.en_hi_switches, b.hi_en_switches);
    EXPECT_EQ(a.hi_en_switches, b.en_hi_switches);
    EXPECT_EQ(a.v, b.v);
    EXPECT_EQ(a.fraction_en, b.fraction_hi);
    EXPECT_EQ(a.fraction_hi, b.fraction_en);
    EXPECT_EQ(a.mean_hi_en, b.mean_en_hi);
    EXPECT_EQ(a.stddev_hi_en, b.stddev_en_hi);
  }
}

TEST(SwitchingProperties, QImpliesBothDirections) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto ts = random_seq(rng);
    if (!has_embedding_property(ts)) continue;
    const auto c = switch_counts(ts);
    EXPECT_GE(c.hi_en, 1u);
    EXPECT_GE(c.en_hi, 1u);
  }
}

TEST(SwitchingProperties, AppendingRestOnlyMovesFractions) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    auto ts = random_seq(rng);
    const auto before = switching_features(ts);
    const auto c = switch_counts(ts);
    const bool q = has_embedding_property(ts);
    ts.push_back({"!", LangTag::rest});
    const auto after = switching_features(ts);
    EXPECT_EQ(switch_counts(ts), c);
    EXPECT_EQ(has_embedding_property(ts), q);
    EXPECT_NEAR(after.fraction_en, before.fraction_en * (ts.size() - 1) / ts.size(), 1e-12);
    EXPECT_NEAR(after.fraction_hi, before.fraction_hi * (ts.size() - 1) / ts.size(), 1e-12);
  }
}

TEST(SwitchingProperties, VectorsAreCumulative) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto ts = random_seq(rng);
    const auto v = lang_run_vectors(ts);
    std::size_t hi_seen = 0, en_seen = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      EXPECT_EQ(v.hi_en[i], ts[i].tag == LangTag::en ? hi_seen : 0u);
      EXPECT_EQ(v.en_hi[i], ts[i].tag == LangTag::hi ? en_seen : 0u);
      hi_seen += ts[i].tag == LangTag::hi;
      en_seen += ts[i].tag == LangTag::en;
    }
    const auto f = switching_features(ts);
    const double n = static_cast<double>(ts.size());
    EXPECT_NEAR(f.fraction_en + f.fraction_hi, (hi_seen + en_seen) / n, 1e-12);
    EXPECT_NEAR(f.mean_hi_en, std::accumulate(v.hi_en.begin(), v.hi_en.end(), 0.0) / n, 1e-12);
    EXPECT_NEAR(f.stddev_en_hi, exact_stddev(v.en_hi), 1e-9);
  }
}
