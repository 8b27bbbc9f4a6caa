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
#include <functional>
#include <vector>

#include "pinyinqa/lexicon.hpp"
#include "pinyinqa/rng.hpp"

namespace pinyinqa {

/// Phonetic subword embedding parameters: a pinyin-token embedding table and
/// a bank of convolution filters. The subword embedding of a token sequence
/// is one max-pooled convolution response per filter.
struct PinyinParams {
  Eigen::MatrixXd embeddings;            // C x d, row per pinyin-token
  std::vector<Eigen::MatrixXd> filters;  // filter_count matrices, each k x d

  std::int64_t token_count() const { return embeddings.rows(); }   // C
  std::int64_t embed_dim() const { return embeddings.cols(); }     // d
  std::int64_t filter_width() const { return filters.empty() ? 0 : filters[0].rows(); }  // k
  std::int64_t filter_count() const { return static_cast<std::int64_t>(filters.size()); }

  /// Uniform init in [-0.05, 0.05] from the given stream.
  /// Defaults: token embedding size 6, filter size 3x6, 100 filters.
  static PinyinParams init(std::int64_t token_count, RandomStream& rng, std::int64_t embed_dim = 6,
                           std::int64_t filter_width = 3, std::int64_t filter_count = 100);

  /// Shape sanity: consistent filter shapes, C >= 2, finite entries.
  void validate() const;
};

/// Everything forward() computed that backward() needs. argmax holds, per
/// filter, the smallest window index attaining the max.
struct PinyinForwardCache {
  std::vector<std::int32_t> padded_ids;  // input right-padded with PAD to >= k
  Eigen::MatrixXd token_embeds;          // E: l x d rows for padded_ids
  Eigen::MatrixXd window_scores;         // Z: (l-k+1) x filter_count
  std::vector<Eigen::Index> argmax;      // per filter
  Eigen::VectorXd output;                // filter_count
};

struct PinyinGrads {
  Eigen::MatrixXd d_embeddings;
  std::vector<Eigen::MatrixXd> d_filters;

  static PinyinGrads zeros_like(const PinyinParams& params);
};

/// Convolves the token embeddings of P with every filter at stride 1 and
/// max-pools each response. Inputs shorter than the filter width are
/// right-padded with PAD. Throws ContractError on out-of-range token ids.
PinyinForwardCache pinyin_forward(const PinyinSequence& sequence, const PinyinParams& params);

/// Subgradient through the max-pool: each upstream component is routed to its
/// cached argmax window. Accumulates into `grads`.
void pinyin_backward(const PinyinForwardCache& cache, const Eigen::VectorXd& upstream,
                     const PinyinParams& params, PinyinGrads& grads);

/// Lexical embedding concatenated with the subword embedding of the unit's
/// pinyin decomposition.
Eigen::VectorXd word_repr(const std::string& unit, const Eigen::VectorXd& lexical_emb,
                          const PinyinParams& params, const Lexicon& lex);

/// A scalar loss over the subword embedding together with its exact gradient,
/// as needed by grad_check.
struct PinyinLoss {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

/// Central-finite-difference check of pinyin_backward over every parameter
/// scalar. Returns max over scalars of |analytic - numeric| /
/// max(|analytic|, |numeric|, 1e-12).
double pinyin_grad_check(const PinyinParams& params, const PinyinSequence& sequence,
                         const PinyinLoss& loss, double eps);

}  // namespace pinyinqa
