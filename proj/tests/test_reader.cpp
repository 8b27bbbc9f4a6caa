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
#include "pinyinqa/reader.hpp"
#include "pinyinqa/serialize.hpp"
#include "support/synthetic.hpp"

using namespace pinyinqa;

namespace {

const char* kToyLexicon =
    "甲\tjia3\n乙\tyi3\n丙\tbing3\n丁\tding1\n戊\twu4\n己\tji3\n庚\tgeng1\n";

QAExample toy_example() {
  QAExample example;
  example.id = "toy";
  example.question = {"己", "甲"};
  example.document = {"丙", "甲", "乙", "丁", "戊"};
  example.answer_start = 2;
  example.answer_end = 3;
  example.answer_text = "乙丁";
  return example;
}

TrainConfig toy_config(bool use_pinyin) {
  TrainConfig config;
  config.use_pinyin = use_pinyin;
  config.lexical_dim = 3;
  config.hidden_dim = 2;
  config.pinyin_embed_dim = 2;
  config.pinyin_filter_width = 2;
  config.pinyin_filter_count = 2;
  config.max_span_len = 3;
  return config;
}

ReaderParams toy_params(bool use_pinyin, const Lexicon& lex, std::uint64_t seed) {
  RandomStream rng(seed);
  return ReaderParams::init({"<unk>", "甲", "乙", "丙", "丁", "戊", "己"}, toy_config(use_pinyin),
                            static_cast<std::int64_t>(lex.token_count()), rng);
}

// The ±0.05 init leaves some attention-path gradients near 1e-10, where the
// finite-difference quotient is pure roundoff; gradient checks run at a
// larger parameter scale so the oracle resolves every component.
ReaderParams scaled_toy_params(bool use_pinyin, const Lexicon& lex, std::uint64_t seed) {
  ReaderParams params = toy_params(use_pinyin, lex, seed);
  for (auto* tensor : params.tensors()) *tensor *= 10.0;
  return params;
}

Eigen::VectorXd logits(std::initializer_list<double> values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) out(i++) = v;
  return out;
}

// Exhaustive decode: stable sort over all admissible pairs.
std::pair<std::size_t, std::size_t> decode_oracle(const Eigen::VectorXd& start,
                                                  const Eigen::VectorXd& end, int max_span) {
  double best = -1e300;
  std::pair<std::size_t, std::size_t> arg{0, 0};
  for (Eigen::Index s = 0; s < start.size(); ++s) {
    for (Eigen::Index e = s; e < start.size() && e <= s + max_span - 1; ++e) {
      const double score = start(s) + end(e);
      if (score > best + 1e-15) {
        best = score;
        arg = {static_cast<std::size_t>(s), static_cast<std::size_t>(e)};
      }
    }
  }
  return arg;
}

}  // namespace

TEST_CASE("predict_span contract examples") {
  CHECK(predict_span(logits({3.0}), logits({-1.0}), 1) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(predict_span(logits({0, 9, 0}), logits({0, 0, 9}), 3) ==
        std::pair<std::size_t, std::size_t>{1, 2});
  // Lmax=1 forces s == e; 9+0 ties 0+9 and the smaller start wins.
  CHECK(predict_span(logits({9, 0}), logits({0, 9}), 1) ==
        std::pair<std::size_t, std::size_t>{0, 0});
}

TEST_CASE("predict_span matches exhaustive enumeration and respects bounds") {
  RandomStream rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.bounded(8));
    const int max_span = 1 + static_cast<int>(rng.bounded(4));
    Eigen::VectorXd start(n);
    Eigen::VectorXd end(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      // Quantized logits provoke ties.
      start(i) = static_cast<double>(rng.bounded(4));
      end(i) = static_cast<double>(rng.bounded(4));
    }
    const auto [s, e] = predict_span(start, end, max_span);
    CHECK(s <= e);
    CHECK(e <= s + static_cast<std::size_t>(max_span) - 1);
    CHECK(e < static_cast<std::size_t>(n));
    CHECK(std::pair{s, e} == decode_oracle(start, end, max_span));

    // Constant shifts change nothing.
    const auto shifted = predict_span((start.array() + 7.5).matrix(),
                                      (end.array() - 3.25).matrix(), max_span);
    CHECK(shifted == std::pair{s, e});
  }
}

TEST_CASE("predict_span rejects bad inputs") {
  CHECK_THROWS_AS(predict_span(Eigen::VectorXd(), Eigen::VectorXd(), 1), ContractError);
  CHECK_THROWS_AS(predict_span(logits({1.0}), logits({1.0}), 0), ContractError);
  CHECK_THROWS_AS(predict_span(logits({1.0, 2.0}), logits({1.0}), 1), ContractError);
}

TEST_CASE("uniform logits give loss 2 ln n") {
  for (int n : {1, 3, 7}) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    CHECK(span_cross_entropy(zero, zero, 0, static_cast<std::size_t>(n - 1)) ==
          doctest::Approx(2.0 * std::log(n)).epsilon(1e-12));
  }
}

TEST_CASE("raising the gold logit drives the loss toward zero") {
  double previous = 1e300;
  for (double value : {0.0, 5.0, 10.0}) {
    Eigen::VectorXd start = Eigen::VectorXd::Zero(4);
    Eigen::VectorXd end = Eigen::VectorXd::Zero(4);
    start(1) = value;
    end(2) = value;
    const double loss = span_cross_entropy(start, end, 1, 2);
    CHECK(loss < previous);
    previous = loss;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("span_cross_entropy rejects out-of-bounds golds") {
  CHECK_THROWS_AS(span_cross_entropy(logits({0, 0}), logits({0, 0}), 2, 0), ContractError);
}

TEST_CASE("logit lists match the document length") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  const ReaderParams params = toy_params(true, lex, 1);
  DecomposeCache decomp(lex);
  QAExample example = toy_example();
  example.document = {"丙", "甲", "乙", "丁", "戊", "己", "庚"};
  example.answer_start = example.answer_end = 0;
  example.answer_text = "丙";
  const ReaderCache cache = model_forward(example, params, decomp);
  CHECK(cache.start_logits.size() == 7);
  CHECK(cache.end_logits.size() == 7);
}

TEST_CASE("all-zero parameters give zero logits and uniform attention") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  ReaderParams params = toy_params(true, lex, 2);
  for (auto* tensor : params.tensors()) tensor->setZero();
  DecomposeCache decomp(lex);
  const ReaderCache cache = model_forward(toy_example(), params, decomp);
  CHECK(cache.start_logits.isZero(0.0));
  CHECK(cache.end_logits.isZero(0.0));
  CHECK(cache.attn_weights.isApproxToConstant(0.5, 1e-12));
}

TEST_CASE("empty question or document is rejected") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  const ReaderParams params = toy_params(false, lex, 3);
  DecomposeCache decomp(lex);
  QAExample no_question = toy_example();
  no_question.question.clear();
  CHECK_THROWS_AS(model_forward(no_question, params, decomp), ContractError);
  QAExample no_document = toy_example();
  no_document.document.clear();
  CHECK_THROWS_AS(model_forward(no_document, params, decomp), ContractError);
}

TEST_CASE("whole-model gradients match central finite differences") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  SUBCASE("with pinyin") {
    const ReaderParams params = scaled_toy_params(true, lex, 4);
    CHECK(reader_grad_check(toy_example(), params, lex, 1e-5) < 1e-5);
  }
  SUBCASE("without pinyin") {
    const ReaderParams params = scaled_toy_params(false, lex, 5);
    CHECK(reader_grad_check(toy_example(), params, lex, 1e-5) < 1e-5);
  }
}

TEST_CASE("with pinyin off, outputs ignore the pinyin parameters") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  ReaderParams params = toy_params(false, lex, 6);
  DecomposeCache decomp(lex);
  const ReaderCache before = model_forward(toy_example(), params, decomp);
  params.pinyin.embeddings.array() += 3.5;
  for (auto& filter : params.pinyin.filters) filter.array() -= 1.25;
  const ReaderCache after = model_forward(toy_example(), params, decomp);
  CHECK(before.start_logits == after.start_logits);
  CHECK(before.end_logits == after.end_logits);
}

TEST_CASE("loss is invariant under unit relabeling that permutes embedding rows") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  ReaderParams params = toy_params(false, lex, 7);
  DecomposeCache decomp(lex);
  const QAExample example = toy_example();
  const double base = loss_only(example, params, decomp);

  // Swap the embedding rows of 甲 and 戊 and rename the units accordingly.
  ReaderParams relabeled = params;
  const auto row_a = static_cast<Eigen::Index>(params.row_of("甲"));
  const auto row_b = static_cast<Eigen::Index>(params.row_of("戊"));
  relabeled.lexical.row(row_a) = params.lexical.row(row_b);
  relabeled.lexical.row(row_b) = params.lexical.row(row_a);
  QAExample renamed = example;
  auto rename = [](std::vector<std::string>& units) {
    for (auto& unit : units) {
      if (unit == "甲") unit = "戊";
      else if (unit == "戊") unit = "甲";
    }
  };
  rename(renamed.question);
  rename(renamed.document);
  CHECK(loss_only(renamed, relabeled, decomp) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("zero epochs returns the initialized parameters unchanged") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  Dataset ds;
  ds.examples = {toy_example()};
  TrainConfig config = toy_config(true);
  config.epochs = 0;
  const TrainResult result = train(ds, config, lex);
  CHECK(result.log.empty());

  RandomStream rng(config.seed);
  const ReaderParams expected = ReaderParams::init(
      result.params.vocab, config, static_cast<std::int64_t>(lex.token_count()), rng);
  CHECK(checkpoint_to_json(result.params).dump() == checkpoint_to_json(expected).dump());
}

TEST_CASE("training is bit-deterministic under a fixed seed") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  pinyinqa::testing::SyntheticConfig world_cfg;
  world_cfg.train_examples = 12;
  world_cfg.test_examples = 0;
  const auto world = pinyinqa::testing::make_synthetic_world(world_cfg);
  const Lexicon world_lex = parse_lexicon(world.lexicon_tsv);

  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 4;
  config.lexical_dim = 6;
  config.hidden_dim = 8;
  config.pinyin_filter_count = 5;
  config.seed = 42;

  const TrainResult a = train(world.train, config, world_lex);
  const TrainResult b = train(world.train, config, world_lex);
  CHECK(checkpoint_to_json(a.params).dump() == checkpoint_to_json(b.params).dump());
  REQUIRE(a.log.size() == 2);
  CHECK(a.log[0].mean_loss == b.log[0].mean_loss);

  config.seed = 43;
  const TrainResult c = train(world.train, config, world_lex);
  CHECK(checkpoint_to_json(a.params).dump() != checkpoint_to_json(c.params).dump());
}

TEST_CASE("training loss decreases on a tiny corpus") {
  pinyinqa::testing::SyntheticConfig world_cfg;
  world_cfg.train_examples = 16;
  world_cfg.test_examples = 0;
  const auto world = pinyinqa::testing::make_synthetic_world(world_cfg);
  const Lexicon lex = parse_lexicon(world.lexicon_tsv);

  TrainConfig config;
  config.epochs = 12;
  config.batch_size = 8;
  config.lexical_dim = 8;
  config.hidden_dim = 12;
  config.pinyin_filter_count = 8;
  config.seed = 0;
  const TrainResult result = train(world.train, config, lex);
  REQUIRE(result.log.size() == 12);
  CHECK(result.log.back().mean_loss < result.log.front().mean_loss);
}

TEST_CASE("train rejects empty datasets and invalid configs") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  CHECK_THROWS_AS(train(Dataset{}, TrainConfig{}, lex), ContractError);
  TrainConfig bad;
  bad.batch_size = 0;
  Dataset ds;
  ds.examples = {toy_example()};
  CHECK_THROWS_AS(train(ds, bad, lex), ConfigError);
}

TEST_CASE("exploding training aborts with a batch diagnostic") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  Dataset ds;
  for (int i = 0; i < 4; ++i) {
    QAExample example = toy_example();
    example.id = "toy-" + std::to_string(i);
    example.answer_start = static_cast<std::size_t>(i);
    example.answer_end = static_cast<std::size_t>(i);
    example.answer_text = example.document[example.answer_start];
    ds.examples.push_back(std::move(example));
  }
  TrainConfig config = toy_config(false);
  config.epochs = 5;
  config.batch_size = 2;
  // One step of this size pushes parameters to ~1e300, so the next batch
  // overflows into inf/NaN logits.
  config.learning_rate = 1e300;
  config.clip_norm = 1e30;
  CHECK_THROWS_WITH_AS(train(ds, config, lex), doctest::Contains("non-finite"), ContractError);
}

TEST_CASE("predict decodes spans within Lmax and is deterministic") {
  pinyinqa::testing::SyntheticConfig world_cfg;
  world_cfg.train_examples = 20;
  world_cfg.test_examples = 8;
  const auto world = pinyinqa::testing::make_synthetic_world(world_cfg);
  const Lexicon lex = parse_lexicon(world.lexicon_tsv);

  TrainConfig config;
  config.epochs = 1;
  config.lexical_dim = 6;
  config.hidden_dim = 8;
  config.pinyin_filter_count = 5;
  config.max_span_len = 3;
  const TrainResult result = train(world.train, config, lex);

  const auto predictions = predict(world.test, result.params, lex);
  CHECK(predictions.size() == world.test.size());
  for (const QAExample& example : world.test.examples) {
    REQUIRE(predictions.count(example.id) == 1);
    CHECK(codepoint_count(predictions.at(example.id)) <= 3);
  }
  CHECK(predict(world.test, result.params, lex) == predictions);
}

TEST_CASE("a gold-span prediction scores EM 1 through evaluate") {
  Dataset ds;
  QAExample example = toy_example();
  ds.examples = {example};
  const std::string answer =
      join_units(example.document, example.answer_start, example.answer_end + 1, UnitMode::kChar);
  const EvalReport report = evaluate({{example.id, answer}}, ds);
  CHECK(report.em == doctest::Approx(1.0));
  CHECK(report.f1 == doctest::Approx(1.0));
}

TEST_CASE("checkpoints round-trip through JSON exactly") {
  const Lexicon lex = parse_lexicon(kToyLexicon);
  pinyinqa::testing::SyntheticConfig world_cfg;
  world_cfg.train_examples = 10;
  world_cfg.test_examples = 4;
  const auto world = pinyinqa::testing::make_synthetic_world(world_cfg);
  const Lexicon world_lex = parse_lexicon(world.lexicon_tsv);

  TrainConfig config;
  config.epochs = 1;
  config.lexical_dim = 5;
  config.hidden_dim = 6;
  config.pinyin_filter_count = 4;
  const TrainResult result = train(world.train, config, world_lex);

  const nlohmann::json dumped = checkpoint_to_json(result.params);
  const ReaderParams restored = checkpoint_from_json(dumped);
  CHECK(checkpoint_to_json(restored).dump() == dumped.dump());
  CHECK(predict(world.test, restored, world_lex) == predict(world.test, result.params, world_lex));

  nlohmann::json bad = dumped;
  bad.erase("format_version");
  CHECK_THROWS_AS(checkpoint_from_json(bad), ParseError);
}
