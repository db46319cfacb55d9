//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "eagqa/error.hpp"
#include "eagqa/evalkit.hpp"
#include "generators.hpp"

namespace eagqa {
namespace {

TEST(FMeasure, ReferencePairs) {
  EXPECT_NEAR(f_measure(0.898, 0.742), 0.813, 5e-4);
  EXPECT_NEAR(f_measure(0.874, 0.828), 0.850, 5e-4);
  EXPECT_EQ(f_measure(0.0, 0.0), 0.0);
  EXPECT_THROW(f_measure(1.5, 0.2), Error);
  EXPECT_THROW(f_measure(-0.1, 0.2), Error);
}

TEST(FMeasure, Properties) {
  testing::Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double p = rng.uniform(), r = rng.uniform();
    EXPECT_EQ(f_measure(p, r), f_measure(r, p));
    EXPECT_GE(f_measure(p, r), std::min(p, r) - 1e-15);
    EXPECT_LE(f_measure(p, r), std::max(p, r) + 1e-15);
    EXPECT_NEAR(f_measure(p, p), p, 1e-15);
  }
}

TEST(InferenceReport, HandCount) {
  auto r = inference_report({"G", "G", "P"}, {"G", "P", "P"});
  const auto& g = r.values.at("G");
  EXPECT_DOUBLE_EQ(*g.precision, 1.0);
  EXPECT_DOUBLE_EQ(*g.recall, 0.5);
  EXPECT_NEAR(*g.acc, 2.0 / 3, 1e-15);
  const auto& p = r.values.at("P");
  EXPECT_DOUBLE_EQ(*p.precision, 0.5);
  EXPECT_DOUBLE_EQ(*p.recall, 1.0);
}

TEST(InferenceReport, PerfectAndAbsent) {
  auto perfect = inference_report({"a", "b", "b"}, {"a", "b", "b"});
  for (const auto& [_, s] : perfect.values) {
    EXPECT_EQ(*s.precision, 1.0);
    EXPECT_EQ(*s.recall, 1.0);
    EXPECT_EQ(*s.acc, 1.0);
  }
  auto never = inference_report({"a", "b"}, {"a", "a"});
  EXPECT_FALSE(never.values.at("b").precision.has_value());
  EXPECT_FALSE(never.values.at("b").acc.has_value());
  EXPECT_EQ(*never.values.at("b").recall, 0.0);
  EXPECT_THROW(inference_report({"a"}, {}), Error);
}

TEST(InferenceReport, MatchesIndependentConfusionMatrix) {
  testing::Rng rng(3);
  const std::vector<std::string> labels = {"G", "R", "P", "X"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> gold, pred;
    const std::size_t n = 1 + rng.below(300);
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(labels[rng.below(3)]);
      pred.push_back(labels[rng.below(4)]);
    }
    std::map<std::pair<std::string, std::string>, std::size_t> confusion;
    for (std::size_t i = 0; i < n; ++i) ++confusion[{gold[i], pred[i]}];
    auto r = inference_report(gold, pred);
    std::size_t sum_true = 0, sum_inferred = 0;
    for (const auto& [v, s] : r.values) {
      std::size_t row = 0, col = 0;
      for (const auto& [k, c] : confusion) {
        if (k.first == v) row += c;
        if (k.second == v) col += c;
      }
      const auto diag = confusion.count({v, v}) ? confusion.at({v, v}) : 0;
      EXPECT_EQ(s.true_value_instance, row);
      EXPECT_EQ(s.inferred_instance, col);
      EXPECT_EQ(s.true_value_inferred, diag);
      EXPECT_LE(s.true_value_inferred, std::min(row, col));
      if (s.acc) EXPECT_NEAR(*s.acc, f_measure(*s.precision, *s.recall), 1e-12);
      sum_true += s.true_value_instance;
      sum_inferred += s.inferred_instance;
    }
    EXPECT_EQ(sum_true, n);
    EXPECT_EQ(sum_inferred, n);
  }
}

TEST(NormalizeAnswer, Rules) {
  EXPECT_EQ(normalize_answer("  Three "), "3");
  EXPECT_EQ(normalize_answer("Red."), "red");
  EXPECT_EQ(normalize_answer("TEN players!"), "10 players");
  EXPECT_EQ(normalize_answer("a\t\n b  . "), "a b");
  EXPECT_EQ(normalize_answer("threes"), "threes");
  EXPECT_EQ(normalize_answer(""), "");
  EXPECT_EQ(normalize_answer("..."), "");
}

TEST(NormalizeAnswer, Idempotent) {
  testing::Rng rng(4);
  const std::string alphabet = "aBc .,!?;:\tone TWO ten9-'\"";
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    const std::size_t n = rng.below(30);
    for (std::size_t k = 0; k < n; ++k) s += alphabet[rng.below(alphabet.size())];
    if (rng.bernoulli(0.3)) s += " seven";
    const auto once = normalize_answer(s);
    EXPECT_EQ(normalize_answer(once), once) << '"' << s << '"';
  }
}

TEST(AnswerAccuracy, Matching) {
  EXPECT_TRUE(answer_matches({"s", "Q7", Answer::count(3), {"3", "three"}}));
  EXPECT_FALSE(answer_matches({"s", "Q2", Answer::label("red"), {"green"}}));
  EXPECT_TRUE(answer_matches({"s", "Q3", Answer::boolean(true), {"Yes."}}));
  EXPECT_THROW(answer_accuracy({}), Error);
  EXPECT_THROW(answer_accuracy({{"s", "Q1", Answer::none(), {}}}), Error);
}

TEST(AnswerAccuracy, MeansAgreeWithIndependentTally) {
  testing::Rng rng(5);
  std::vector<AnswerRecord> recs;
  std::map<std::string, std::pair<int, int>> tally;
  int hits = 0;
  for (int i = 0; i < 500; ++i) {
    const std::string q = "Q" + std::to_string(1 + rng.below(7));
    const auto n = rng.below(4);
    const bool hit = rng.bernoulli(0.6);
    recs.push_back({"s" + std::to_string(i), q, Answer::count(n),
                    {hit ? std::to_string(n) : "none"}});
    tally[q].first += hit;
    tally[q].second += 1;
    hits += hit;
  }
  auto r = answer_accuracy(recs);
  EXPECT_NEAR(r.overall, hits / 500.0, 1e-15);
  for (const auto& [q, t] : tally) {
    EXPECT_NEAR(r.per_query.at(q), double(t.first) / t.second, 1e-15);
  }
}

TEST(Reports, FormatsTwoDecimalPercent) {
  auto r = inference_report({"G", "G", "P"}, {"G", "P", "P"});
  auto table = format_inference_report(r, "role", ReportFormat::kTable);
  EXPECT_NE(table.find("66.67"), std::string::npos) << table;
  EXPECT_NE(table.find("100.00"), std::string::npos) << table;
  auto machine = format_inference_report(r, "role", ReportFormat::kMachine);
  EXPECT_NE(machine.find("\"acc\": 66.67"), std::string::npos) << machine;
}

}  // namespace
}  // namespace eagqa
