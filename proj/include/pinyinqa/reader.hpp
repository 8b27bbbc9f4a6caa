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

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pinyinqa/dataset.hpp"
#include "pinyinqa/lexicon.hpp"
#include "pinyinqa/pinyin_cnn.hpp"

namespace pinyinqa {

struct TrainConfig {
  std::uint64_t seed = 0;
  double learning_rate = 1e-3;
  int batch_size = 16;
  int epochs = 1;
  double clip_norm = 5.0;
  bool use_pinyin = true;
  int max_span_len = 30;  // Lmax, decoding span cap in units
  int lexical_dim = 24;   // Dw
  int hidden_dim = 48;    // Dh
  int pinyin_embed_dim = 6;
  int pinyin_filter_width = 3;
  int pinyin_filter_count = 100;

  void validate() const;  // throws ConfigError
};

/// All trainable tensors of the span reader.
///
/// Token vectors are the lexical embedding row, concatenated with the
/// pinyin subword embedding when use_pinyin is on. The question is summarized
/// by learned attention, documents by a three-token window mixer, and start /
/// end positions are scored bilinearly against the question summary.
struct ReaderParams {
  std::vector<std::string> vocab;  // [0] is the shared UNK row
  std::unordered_map<std::string, std::int32_t> vocab_index;

  Eigen::MatrixXd lexical;         // |vocab| x Dw
  PinyinParams pinyin;
  Eigen::MatrixXd attn_proj;       // A:   Dh x Dx
  Eigen::MatrixXd attn_query;      // v:   Dh x 1
  Eigen::MatrixXd mixer;           // B:   Dh x 3*Dx
  Eigen::MatrixXd start_bilinear;  // W_s: Dh x Dx
  Eigen::MatrixXd end_bilinear;    // W_e: Dh x Dx

  bool use_pinyin = true;
  int max_span_len = 30;

  std::int64_t lexical_dim() const { return lexical.cols(); }
  std::int64_t hidden_dim() const { return attn_proj.rows(); }
  std::int64_t input_dim() const {
    return lexical_dim() + (use_pinyin ? pinyin.filter_count() : 0);
  }

  /// Lexical row for a unit; OOV units share row 0 (UNK).
  std::int32_t row_of(const std::string& unit) const;

  /// Trainable tensors in a fixed order (optimizer, clipping, checkpoints).
  std::vector<Eigen::MatrixXd*> tensors();
  std::vector<const Eigen::MatrixXd*> tensors() const;

  static ReaderParams init(std::vector<std::string> vocab, const TrainConfig& config,
                           std::int64_t pinyin_token_count, RandomStream& rng);
  void validate() const;
};

/// Gradients for every ReaderParams tensor, same shapes and order.
struct ReaderGrads {
  Eigen::MatrixXd lexical;
  PinyinGrads pinyin;
  Eigen::MatrixXd attn_proj;
  Eigen::MatrixXd attn_query;
  Eigen::MatrixXd mixer;
  Eigen::MatrixXd start_bilinear;
  Eigen::MatrixXd end_bilinear;

  static ReaderGrads zeros_like(const ReaderParams& params);
  void set_zero();
  std::vector<Eigen::MatrixXd*> tensors();
};

/// Memoizes pinyin decompositions across examples.
class DecomposeCache {
 public:
  explicit DecomposeCache(const Lexicon& lex) : lex_(lex) {}
  const PinyinSequence& get(const std::string& unit);

 private:
  const Lexicon& lex_;
  std::unordered_map<std::string, PinyinSequence> memo_;
};

struct ReaderCache {
  // Example-local unique units; tokens refer into them.
  std::vector<std::string> unique_units;
  std::vector<std::int32_t> unit_rows;
  std::vector<PinyinForwardCache> unit_pinyin;  // empty when pinyin is off
  std::vector<std::int32_t> question_unit;      // m entries
  std::vector<std::int32_t> document_unit;      // n entries

  Eigen::MatrixXd question_inputs;  // m x Dx
  Eigen::MatrixXd document_inputs;  // n x Dx
  Eigen::MatrixXd question_tanh;    // m x Dh
  Eigen::VectorXd attn_weights;     // m
  Eigen::VectorXd question_summary; // Dx
  Eigen::MatrixXd document_hidden;  // n x Dh
  Eigen::VectorXd start_logits;     // n
  Eigen::VectorXd end_logits;       // n
};

/// Runs the reader over one example; both logit vectors have |document|
/// entries. Throws ContractError on empty question/document.
ReaderCache model_forward(const QAExample& example, const ReaderParams& params,
                          DecomposeCache& decomp);

/// -log softmax(start_logits)[gold_start] - log softmax(end_logits)[gold_end].
double span_cross_entropy(const Eigen::VectorXd& start_logits, const Eigen::VectorXd& end_logits,
                          std::size_t gold_start, std::size_t gold_end);

/// Start/end cross-entropy against the gold span plus exact gradients for
/// every tensor, accumulated into `grads`.
double loss_and_grads(const ReaderCache& cache, std::size_t gold_start, std::size_t gold_end,
                      const ReaderParams& params, ReaderGrads& grads);

/// Loss only (finite-difference probes).
double loss_only(const QAExample& example, const ReaderParams& params, DecomposeCache& decomp);

/// Best (start, end) with start <= end <= start + max_span_len - 1 by summed
/// logits; ties prefer the smaller start, then the smaller end.
std::pair<std::size_t, std::size_t> predict_span(const Eigen::VectorXd& start_logits,
                                                 const Eigen::VectorXd& end_logits,
                                                 int max_span_len);

struct EpochLog {
  int epoch = 0;
  double mean_loss = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  ReaderParams params;
  std::vector<EpochLog> log;
};

/// Seeded, deterministic training: per-epoch Fisher-Yates shuffling,
/// mini-batch gradient averaging, global-norm clipping, adaptive-moment
/// updates. Aborts with ContractError naming the batch on non-finite loss.
TrainResult train(const Dataset& dataset, const TrainConfig& config, const Lexicon& lex);

/// Decoded answer strings keyed by example id.
std::map<std::string, std::string> predict(const Dataset& dataset, const ReaderParams& params,
                                           const Lexicon& lex);

/// Central-finite-difference check over every ReaderParams scalar at the
/// given example. Returns the max relative error.
double reader_grad_check(const QAExample& example, const ReaderParams& params, const Lexicon& lex,
                         double eps);

}  // namespace pinyinqa
