// Copyright (c) 2026 pinyinqa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pinyinqa/error.hpp"
#include "pinyinqa/metrics.hpp"
#include "pinyinqa/rng.hpp"
#include "pinyinqa/text.hpp"
#include "support/oracles.hpp"

using namespace pinyinqa;
using pinyinqa::testing::edit_distance_oracle;
using pinyinqa::testing::enumerate_sequences;
using pinyinqa::testing::golden_metric_table;

namespace {

Dataset tiny_dataset(const std::vector<std::pair<std::string, std::string>>& id_answers) {
  Dataset ds;
  for (const auto& [id, answer] : id_answers) {
    QAExample example;
    example.id = id;
    example.question = {"q"};
    example.document = segment_units("xx" + answer + "yy", UnitMode::kChar);
    example.answer_start = 2;
    example.answer_end = 2 + codepoint_count(answer) - 1;
    example.answer_text = answer;
    ds.examples.push_back(std::move(example));
  }
  return ds;
}

std::vector<std::string> random_chars(RandomStream& rng, std::size_t max_len) {
  static const std::vector<std::string> pool = {"長", "江", "水", "北", "京", "a", "b"};
  std::vector<std::string> out;
  const std::size_t len = rng.bounded(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) out.push_back(pool[rng.bounded(pool.size())]);
  return out;
}

std::string concat(const std::vector<std::string>& units) {
  std::string out;
  for (const auto& u : units) out += u;
  return out;
}

}  // namespace

TEST_CASE("golden table: hand-computed EM and F1 values") {
  for (const auto& entry : golden_metric_table()) {
    CAPTURE(entry.prediction);
    CAPTURE(entry.note);
    CHECK(exact_match(entry.prediction, entry.golds) == entry.em);
    CHECK(char_f1(entry.prediction, entry.golds) == doctest::Approx(entry.f1).epsilon(1e-9));
  }
}

TEST_CASE("empty golds list is a contract violation") {
  CHECK_THROWS_AS(exact_match("x", {}), ContractError);
  CHECK_THROWS_AS(char_f1("x", {}), ContractError);
}

TEST_CASE("exact match implies F1 = 1 for that gold") {
  RandomStream rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string text = concat(random_chars(rng, 6));
    if (exact_match(text, {text}) == 1) {
      CHECK(char_f1(text, {text}) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("char_f1 is symmetric in prediction and single gold") {
  RandomStream rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string a = concat(random_chars(rng, 6));
    const std::string b = concat(random_chars(rng, 6));
    CHECK(char_f1(a, {b}) == doctest::Approx(char_f1(b, {a})).epsilon(1e-12));
  }
}

TEST_CASE("adding a gold can only raise char_f1") {
  RandomStream rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string pred = concat(random_chars(rng, 6));
    std::vector<std::string> golds = {concat(random_chars(rng, 6))};
    const double before = char_f1(pred, golds);
    golds.push_back(concat(random_chars(rng, 6)));
    CHECK(char_f1(pred, golds) >= before - 1e-12);
    CHECK(char_f1(pred, golds) <= 1.0);
    CHECK(char_f1(pred, golds) >= 0.0);
  }
}

TEST_CASE("evaluate macro-averages per-example scores") {
  const Dataset ds = tiny_dataset({{"e1", "長江"}, {"e2", "北京"}});
  SUBCASE("perfect predictions") {
    const EvalReport report = evaluate({{"e1", "長江"}, {"e2", "北京"}}, ds);
    CHECK(report.em == doctest::Approx(1.0));
    CHECK(report.f1 == doctest::Approx(1.0));
    CHECK(report.n == 2);
  }
  SUBCASE("mixed example pair: em (1, 0), f1 (1.0, 0.5)") {
    // 水水水 vs gold 水: p=1/3, r=1, f1=0.5.
    const Dataset mixed = tiny_dataset({{"e1", "長江"}, {"e2", "水"}});
    const EvalReport report = evaluate({{"e1", "長江"}, {"e2", "水水水"}}, mixed);
    CHECK(report.em == doctest::Approx(0.5));
    CHECK(report.f1 == doctest::Approx(0.75));
    double em_mean = 0.0;
    double f1_mean = 0.0;
    for (const auto& score : report.per_example) {
      em_mean += score.em;
      f1_mean += score.f1;
    }
    em_mean /= static_cast<double>(report.per_example.size());
    f1_mean /= static_cast<double>(report.per_example.size());
    CHECK(std::fabs(report.em - em_mean) < 1e-12);
    CHECK(std::fabs(report.f1 - f1_mean) < 1e-12);
  }
  SUBCASE("per-example scores keep dataset order") {
    const EvalReport report = evaluate({{"e1", "長江"}, {"e2", "北京"}}, ds);
    REQUIRE(report.per_example.size() == 2);
    CHECK(report.per_example[0].id == "e1");
    CHECK(report.per_example[1].id == "e2");
  }
}

TEST_CASE("evaluate rejects empty datasets and missing ids") {
  CHECK_THROWS_AS(evaluate({}, Dataset{}), ContractError);
  const Dataset ds = tiny_dataset({{"e1", "長江"}, {"e2", "北京"}});
  CHECK_THROWS_WITH_AS(evaluate({{"e1", "長江"}}, ds), doctest::Contains("e2"), ContractError);
}

TEST_CASE("wer basics") {
  CHECK(wer({"a", "b", "c"}, {"a", "b", "c"}) == doctest::Approx(0.0));
  CHECK(wer({"a", "b", "c"}, {"a", "c"}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(wer({"a"}, {"a", "b"}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(wer({}, {"a"}), ContractError);
}

TEST_CASE("wer is invariant under consistent token relabeling") {
  RandomStream rng(17);
  const std::vector<std::string> alphabet = {"x", "y", "z"};
  const std::vector<std::string> relabeled = {"лев", "β", "丙"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> ref;
    std::vector<std::string> hyp;
    const std::size_t ref_len = 1 + rng.bounded(5);
    const std::size_t hyp_len = rng.bounded(6);
    std::vector<std::string> ref2, hyp2;
    for (std::size_t i = 0; i < ref_len; ++i) {
      const std::size_t s = rng.bounded(3);
      ref.push_back(alphabet[s]);
      ref2.push_back(relabeled[s]);
    }
    for (std::size_t i = 0; i < hyp_len; ++i) {
      const std::size_t s = rng.bounded(3);
      hyp.push_back(alphabet[s]);
      hyp2.push_back(relabeled[s]);
    }
    CHECK(wer(ref, hyp) == doctest::Approx(wer(ref2, hyp2)).epsilon(1e-12));
  }
}

TEST_CASE("wer matches the brute-force oracle on short sequences") {
  // Full exhaustive run up to length 6 lives in the acceptance suite; this
  // covers lengths up to 4 to stay quick.
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  const auto refs = enumerate_sequences(alphabet, 1, 4);
  const auto hyps = enumerate_sequences(alphabet, 0, 4);
  for (const auto& ref : refs) {
    for (const auto& hyp : hyps) {
      const double expected =
          static_cast<double>(edit_distance_oracle(ref, hyp)) / static_cast<double>(ref.size());
      REQUIRE(wer(ref, hyp) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalization details") {
  CHECK(normalize_answer("  長江  ") == "長江");
  CHECK(normalize_answer("長 江") == "長江");
  CHECK(normalize_answer("長江。，！？") == "長江");
  CHECK(normalize_answer("「長江」") == "長江");
  CHECK(normalize_answer("ABCdef") == "abcdef");
  CHECK(normalize_answer("，。") == "");
}
