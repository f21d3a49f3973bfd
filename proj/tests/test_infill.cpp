// Copyright 2026 The tabenc Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "tabenc/infill.hpp"
#include "tabenc/rng.hpp"

using namespace tabenc;

namespace {

FeatureSchema numeric_schema(const std::string& name) {
  FeatureSchema s;
  s.name = name;
  s.role = FeatureRole::kNumeric;
  return s;
}

FeatureSchema categoric_schema(const std::string& name) {
  FeatureSchema s;
  s.name = name;
  s.role = FeatureRole::kCategoric;
  return s;
}

FeatureData numeric_data(const std::vector<double>& values,
                         const std::vector<uint8_t>& missing) {
  FeatureData d;
  d.numeric = values;
  d.missing = missing;
  for (size_t i = 0; i < d.missing.size(); ++i) {
    if (d.missing[i]) d.numeric[i] = std::nan("");
  }
  return d;
}

FeatureData text_data(const std::vector<std::string>& values,
                      const std::vector<uint8_t>& missing) {
  FeatureData d;
  d.text = values;
  d.missing = missing;
  for (size_t i = 0; i < d.missing.size(); ++i) {
    if (d.missing[i]) d.text[i].clear();
  }
  return d;
}

bool tables_equal(const FeatureTable& a, const FeatureTable& b) {
  if (a.names != b.names || a.n_rows != b.n_rows) return false;
  for (size_t f = 0; f < a.features.size(); ++f) {
    if (a.features[f].numeric != b.features[f].numeric) return false;
    if (a.features[f].text != b.features[f].text) return false;
    if (a.features[f].missing != b.features[f].missing) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("simple numeric fill uses the train mean") {
  FeatureTable t;
  t.names = {"x"};
  t.features = {numeric_data({1, 0, 3}, {0, 1, 0})};
  t.n_rows = 3;
  const auto plan =
      plan_infill({numeric_schema("x")}, InfillStrategy::kSimple, t);
  REQUIRE(plan.features.size() == 1);
  CHECK(plan.features[0].kind == FillKind::kMeanFill);
  CHECK(plan.features[0].fill_value == doctest::Approx(2.0));

  const auto result = apply_infill(plan, t);
  CHECK(result.table.features[0].numeric ==
        std::vector<double>{1.0, 2.0, 3.0});
  CHECK(result.table.features[0].missing ==
        std::vector<uint8_t>{0, 0, 0});
  CHECK(result.indicators.empty());
}

TEST_CASE("simple categoric fill lands on the missing token") {
  FeatureTable t;
  t.names = {"c"};
  t.features = {text_data({"a", ""}, {0, 1})};
  t.n_rows = 2;
  const auto plan =
      plan_infill({categoric_schema("c")}, InfillStrategy::kSimple, t);
  CHECK(plan.features[0].kind == FillKind::kMissingToken);

  const auto result = apply_infill(plan, t);
  CHECK(result.table.features[0].missing == std::vector<uint8_t>{0, 0});
  // The filled cell encodes to the reserved slot 0.
  const auto basis = fit_categoric(CategoricKind::kOrd3,
                                   result.table.features[0].text, {0, 0});
  CHECK(encode_ordinal(basis, result.table.features[0].text[1], false) == 0);
}

TEST_CASE("indicator columns mark exactly the missing cells") {
  FeatureTable t;
  t.names = {"x"};
  t.features = {numeric_data({1, 0, 3}, {0, 1, 0})};
  t.n_rows = 3;
  const auto plan = plan_infill({numeric_schema("x")},
                                InfillStrategy::kSimple, t, true);
  const auto result = apply_infill(plan, t);
  REQUIRE(result.indicators.size() == 1);
  CHECK(result.indicators[0] == std::vector<double>{0.0, 1.0, 0.0});
  CHECK(result.table.features[0].numeric ==
        std::vector<double>{1.0, 2.0, 3.0});

  // Without missing cells the table passes through and indicators stay 0.
  const auto second = apply_infill(plan, result.table);
  CHECK(tables_equal(second.table, result.table));
  CHECK(second.indicators[0] == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("infill is idempotent and leaves present cells alone") {
  Rng rng(40);
  FeatureTable t;
  t.names = {"a", "b", "c"};
  t.n_rows = 60;
  std::vector<double> av;
  std::vector<std::string> bv;
  std::vector<double> cv;
  std::vector<uint8_t> am, bm, cm;
  const std::vector<std::string> cats{"u", "v", "w"};
  for (size_t i = 0; i < 60; ++i) {
    av.push_back(rng.uniform(-5.0, 5.0));
    bv.push_back(cats[static_cast<size_t>(rng.uniform_int(0, 2))]);
    cv.push_back(rng.normal(0.0, 2.0));
    am.push_back(i % 7 == 0);
    bm.push_back(i % 5 == 0);
    cm.push_back(0);
  }
  t.features = {numeric_data(av, am), text_data(bv, bm),
                numeric_data(cv, cm)};
  const std::vector<FeatureSchema> schema{
      numeric_schema("a"), categoric_schema("b"), numeric_schema("c")};

  for (const auto strategy : {InfillStrategy::kSimple, InfillStrategy::kMl}) {
    const auto plan = plan_infill(schema, strategy, t, false, 7);
    const auto once = apply_infill(plan, t);
    const auto twice = apply_infill(plan, once.table);
    CHECK(tables_equal(once.table, twice.table));

    for (size_t f = 0; f < 3; ++f) {
      const auto& before = t.features[f];
      const auto& after = once.table.features[f];
      for (size_t r = 0; r < 60; ++r) {
        CHECK(after.missing[r] == 0);
        if (before.missing[r]) continue;
        if (!before.numeric.empty())
          CHECK(after.numeric[r] == before.numeric[r]);
        else
          CHECK(after.text[r] == before.text[r]);
      }
    }
  }
}

TEST_CASE("ml infill recovers a copied categoric feature") {
  Rng rng(99);
  const std::vector<std::string> cats{"alpha", "beta", "gamma", "delta"};
  FeatureTable t;
  t.names = {"a", "b"};
  t.n_rows = 240;
  std::vector<std::string> av, bv;
  std::vector<uint8_t> am(240, 0), bm;
  for (size_t i = 0; i < 240; ++i) {
    av.push_back(cats[static_cast<size_t>(rng.uniform_int(0, 3))]);
    bv.push_back(av.back());
    bm.push_back(i % 10 == 0);  // 10% of the copy goes missing
  }
  t.features = {text_data(av, am), text_data(bv, bm)};
  const auto plan =
      plan_infill({categoric_schema("a"), categoric_schema("b")},
                  InfillStrategy::kMl, t, false, 3);
  REQUIRE(plan.features[1].kind == FillKind::kModel);
  REQUIRE(plan.features[1].cls_model.has_value());
  CHECK(plan.features[0].kind == FillKind::kPassthrough);

  const auto result = apply_infill(plan, t);
  size_t hits = 0, total = 0;
  for (size_t r = 0; r < 240; ++r) {
    if (!bm[r]) continue;
    ++total;
    hits += result.table.features[1].text[r] == av[r] ? 1 : 0;
  }
  REQUIRE(total == 24);
  CHECK(static_cast<double>(hits) / static_cast<double>(total) >= 0.95);
}

TEST_CASE("ml infill recovers a copied numeric feature") {
  Rng rng(123);
  FeatureTable t;
  t.names = {"a", "b"};
  t.n_rows = 240;
  std::vector<double> av, bv;
  std::vector<uint8_t> am(240, 0), bm;
  for (size_t i = 0; i < 240; ++i) {
    av.push_back(rng.uniform(0.0, 10.0));
    bv.push_back(av.back());
    bm.push_back(i % 10 == 0);
  }
  t.features = {numeric_data(av, am), numeric_data(bv, bm)};
  const auto plan = plan_infill({numeric_schema("a"), numeric_schema("b")},
                                InfillStrategy::kMl, t, false, 3);
  REQUIRE(plan.features[1].kind == FillKind::kModel);
  REQUIRE(plan.features[1].reg_model.has_value());

  const auto result = apply_infill(plan, t);
  size_t close = 0, total = 0;
  for (size_t r = 0; r < 240; ++r) {
    if (!bm[r]) continue;
    ++total;
    close += std::fabs(result.table.features[1].numeric[r] - av[r]) < 0.5
                 ? 1
                 : 0;
  }
  CHECK(static_cast<double>(close) / static_cast<double>(total) >= 0.95);
}

TEST_CASE("ml plan falls back where a model cannot be trained") {
  FeatureTable t;
  t.names = {"a", "b", "c"};
  t.n_rows = 6;
  // b has one observed category; c is fully missing.
  t.features = {numeric_data({1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0, 0}),
                text_data({"x", "x", "", "x", "x", "x"}, {0, 0, 1, 0, 0, 0}),
                text_data({"", "", "", "", "", ""}, {1, 1, 1, 1, 1, 1})};
  const auto plan = plan_infill(
      {numeric_schema("a"), categoric_schema("b"), categoric_schema("c")},
      InfillStrategy::kMl, t, false, 1);
  CHECK(plan.features[0].kind == FillKind::kPassthrough);
  CHECK(plan.features[1].kind == FillKind::kMissingToken);
  CHECK(plan.features[2].kind == FillKind::kMissingToken);
  const auto result = apply_infill(plan, t);
  for (const auto& f : result.table.features) {
    for (uint8_t m : f.missing) CHECK(m == 0);
  }
}

TEST_CASE("apply-time missing in an always-present feature gets the fallback") {
  FeatureTable train;
  train.names = {"a", "b"};
  train.n_rows = 40;
  std::vector<double> av, bv;
  std::vector<uint8_t> am(40, 0), bm;
  Rng rng(8);
  for (size_t i = 0; i < 40; ++i) {
    av.push_back(rng.uniform(0.0, 4.0));
    bv.push_back(rng.uniform(0.0, 4.0));
    bm.push_back(i % 4 == 0);
  }
  train.features = {numeric_data(av, am), numeric_data(bv, bm)};
  const auto plan = plan_infill({numeric_schema("a"), numeric_schema("b")},
                                InfillStrategy::kMl, train, false, 5);
  REQUIRE(plan.features[0].kind == FillKind::kPassthrough);

  FeatureTable apply;
  apply.names = {"a", "b"};
  apply.n_rows = 2;
  apply.features = {numeric_data({0, 1}, {1, 0}),
                    numeric_data({2, 3}, {0, 0})};
  const auto result = apply_infill(plan, apply);
  CHECK(result.table.features[0].numeric[0] ==
        doctest::Approx(plan.features[0].fill_value));
  CHECK(result.table.features[0].numeric[1] == 1.0);
}

TEST_CASE("infill input validation") {
  FeatureTable t;
  t.names = {"x"};
  t.features = {numeric_data({1, 2}, {0, 0})};
  t.n_rows = 2;

  SUBCASE("ml needs a second feature") {
    CHECK_THROWS_AS(
        plan_infill({numeric_schema("x")}, InfillStrategy::kMl, t),
        std::invalid_argument);
  }
  SUBCASE("label columns are rejected") {
    FeatureSchema label;
    label.name = "x";
    label.role = FeatureRole::kLabel;
    CHECK_THROWS_AS(plan_infill({label}, InfillStrategy::kSimple, t),
                    std::invalid_argument);
  }
  SUBCASE("schema and table must align") {
    CHECK_THROWS_AS(plan_infill({numeric_schema("y")},
                                InfillStrategy::kSimple, t),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        plan_infill({numeric_schema("x"), numeric_schema("y")},
                    InfillStrategy::kSimple, t),
        std::invalid_argument);
  }
  SUBCASE("apply rejects a mismatched table") {
    const auto plan =
        plan_infill({numeric_schema("x")}, InfillStrategy::kSimple, t);
    FeatureTable other;
    other.names = {"z"};
    other.features = {numeric_data({1}, {0})};
    other.n_rows = 1;
    CHECK_THROWS_AS(apply_infill(plan, other), std::invalid_argument);
  }
  SUBCASE("strategy names round trip") {
    CHECK(infill_strategy_from_name("simple") == InfillStrategy::kSimple);
    CHECK(infill_strategy_from_name("ml") == InfillStrategy::kMl);
    CHECK(infill_strategy_name(InfillStrategy::kMl) == "ml");
    CHECK_THROWS_AS(infill_strategy_from_name("median"),
                    std::invalid_argument);
  }
}

TEST_CASE("infill plans survive serialization") {
  Rng rng(77);
  FeatureTable t;
  t.names = {"n", "c"};
  t.n_rows = 80;
  std::vector<double> nv;
  std::vector<std::string> cv;
  std::vector<uint8_t> nm, cm;
  const std::vector<std::string> cats{"p", "q", "r"};
  for (size_t i = 0; i < 80; ++i) {
    nv.push_back(rng.normal(1.0, 3.0));
    cv.push_back(cats[static_cast<size_t>(rng.uniform_int(0, 2))]);
    nm.push_back(i % 6 == 0);
    cm.push_back(i % 9 == 0);
  }
  t.features = {numeric_data(nv, nm), text_data(cv, cm)};
  const std::vector<FeatureSchema> schema{numeric_schema("n"),
                                          categoric_schema("c")};
  const auto plan = plan_infill(schema, InfillStrategy::kMl, t, true, 11);

  const nlohmann::json j = plan;
  const InfillPlan back = j.get<InfillPlan>();
  CHECK(back.strategy == plan.strategy);
  CHECK(back.indicator == plan.indicator);
  REQUIRE(back.features.size() == plan.features.size());

  const auto a = apply_infill(plan, t);
  const auto b = apply_infill(back, t);
  CHECK(tables_equal(a.table, b.table));
  CHECK(a.indicators == b.indicators);
  // The reparsed plan reproduces the original serialization byte for byte.
  CHECK(nlohmann::json(back).dump() == j.dump());
}
