#include <gtest/gtest.h>

#include <json.hpp>

#include "support/fixtures.hpp"

namespace pt = pathtext;
namespace ptt = pathtext::testing;
using Ids = std::vector<std::size_t>;

TEST(Tally, AllCorrect) {
  const auto t = pt::tally(Ids{0, 1, 2}, Ids{0, 1, 2}, 3);
  EXPECT_EQ(t.tp, (Ids{1, 1, 1}));
  EXPECT_EQ(t.fp, (Ids{0, 0, 0}));
  EXPECT_EQ(t.fn, (Ids{0, 0, 0}));
  EXPECT_EQ(pt::micro_f(t), 1.0);
  EXPECT_EQ(pt::macro_f(t), 1.0);
}

TEST(Tally, HandEnumeratedFixture) {
  // gold [A, A, B], pred [A, B, B]
  const auto t = pt::tally(Ids{0, 0, 1}, Ids{0, 1, 1}, 2);
  EXPECT_EQ(t.tp, (Ids{1, 1}));
  EXPECT_EQ(t.fp, (Ids{0, 1}));
  EXPECT_EQ(t.fn, (Ids{1, 0}));
  EXPECT_DOUBLE_EQ(pt::micro_precision(t), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(pt::micro_recall(t), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(pt::micro_f(t), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(pt::class_scores(t, 0).f, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(pt::class_scores(t, 1).f, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(pt::macro_f(t), 2.0 / 3.0);
}

TEST(Tally, AllPredictionsOneClass) {
  const auto t = pt::tally(Ids{0, 1, 1, 0, 1}, Ids{2, 2, 2, 2, 2}, 3);
  EXPECT_EQ(t.fp[2], 5u);
  EXPECT_EQ(pt::micro_f(t), 0.0);
}

TEST(Tally, Errors) {
  EXPECT_THROW(pt::tally(Ids{0, 1}, Ids{0}, 2), pt::ValidationError);
  EXPECT_THROW(pt::tally(Ids{}, Ids{}, 2), pt::ValidationError);
  EXPECT_THROW(pt::tally(Ids{0, 3}, Ids{0, 1}, 2), pt::ValidationError);
}

TEST(MacroF, EmptyClassesCountAsZero) {
  const auto t = pt::tally(Ids{0, 0, 0}, Ids{0, 0, 0}, 4);
  EXPECT_EQ(pt::macro_f(t), 0.25);
  EXPECT_EQ(pt::macro_f(t, /*present_only=*/true), 1.0);
}

TEST(Evaluate, ReportTextAndJson) {
  const auto r = pt::evaluate(Ids{0, 0, 1}, Ids{0, 1, 1}, {"Adenoma", "Thymoma"});
  EXPECT_EQ(r.n_instances, 3u);
  ASSERT_EQ(r.per_class.size(), 2u);
  EXPECT_EQ(r.per_class[0].support, 2u);
  const auto text = r.to_text();
  EXPECT_NE(text.find("micro_f          0.6667"), std::string::npos);
  EXPECT_NE(text.find("Thymoma"), std::string::npos);
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_DOUBLE_EQ(j.at("micro_f").get<double>(), 2.0 / 3.0);
}

TEST(MetricProperties, OracleAccuracyAndPermutation) {
  pt::Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(50);
    const std::size_t k = 1 + rng.uniform_index(10);
    Ids gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = rng.uniform_index(k);
      pred[i] = rng.uniform_index(k);
    }
    const auto t = pt::tally(gold, pred, k);
    const auto o = ptt::metric_oracle(gold, pred, k);
    ASSERT_EQ(pt::micro_f(t), o.micro_f);
    ASSERT_EQ(pt::macro_f(t), o.macro_f);
    ASSERT_EQ(pt::micro_f(t), o.accuracy);
    ASSERT_LE(pt::macro_f(t), 1.0);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(std::span<std::size_t>(perm));
    Ids g2, p2;
    for (auto i : perm) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    const auto t2 = pt::tally(g2, p2, k);
    ASSERT_EQ(pt::micro_f(t2), pt::micro_f(t));
    ASSERT_EQ(pt::macro_f(t2), pt::macro_f(t));
  }
}

TEST(MetricProperties, MacroEqualsMicroForIdenticalTallies) {
  // every class: 2 correct, 1 sent to the next class
  Ids gold, pred;
  for (std::size_t c = 0; c < 4; ++c) {
    gold.insert(gold.end(), {c, c, c});
    pred.insert(pred.end(), {c, c, (c + 1) % 4});
  }
  const auto t = pt::tally(gold, pred, 4);
  EXPECT_DOUBLE_EQ(pt::macro_f(t), pt::micro_f(t));
}

TEST(LabelEncoding, SortedUniqueIds) {
  const pt::LabelEncoding enc({"thymus", "kidney", "lung", "kidney"});
  EXPECT_EQ(enc.classes(), (std::vector<std::string>{"kidney", "lung", "thymus"}));
  EXPECT_EQ(enc.id("lung"), 1u);
  EXPECT_FALSE(enc.contains("testis"));
  EXPECT_THROW(enc.id("testis"), pt::ValidationError);
  EXPECT_EQ(enc.encode({"thymus", "kidney"}), (Ids{2, 0}));
}
