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

#include "pinyinqa/pinyin_cnn.hpp"

#include <cmath>

#include "pinyinqa/error.hpp"

namespace pinyinqa {

PinyinParams PinyinParams::init(std::int64_t token_count, RandomStream& rng,
                                std::int64_t embed_dim, std::int64_t filter_width,
                                std::int64_t filter_count) {
  if (token_count < 2 || embed_dim < 1 || filter_width < 1 || filter_count < 1) {
    throw ConfigError("PinyinParams::init: dimensions must be positive and token_count >= 2");
  }
  PinyinParams params;
  params.embeddings.resize(token_count, embed_dim);
  for (std::int64_t r = 0; r < token_count; ++r) {
    for (std::int64_t c = 0; c < embed_dim; ++c) {
      params.embeddings(r, c) = rng.uniform(-0.05, 0.05);
    }
  }
  params.filters.reserve(static_cast<std::size_t>(filter_count));
  for (std::int64_t f = 0; f < filter_count; ++f) {
    Eigen::MatrixXd filter(filter_width, embed_dim);
    for (std::int64_t r = 0; r < filter_width; ++r) {
      for (std::int64_t c = 0; c < embed_dim; ++c) {
        filter(r, c) = rng.uniform(-0.05, 0.05);
      }
    }
    params.filters.push_back(std::move(filter));
  }
  return params;
}

void PinyinParams::validate() const {
  if (token_count() < 2) {
    throw ConfigError("PinyinParams: token table must contain at least PAD and UNK");
  }
  if (filters.empty()) {
    throw ConfigError("PinyinParams: filter bank is empty");
  }
  for (const auto& filter : filters) {
    if (filter.rows() != filter_width() || filter.cols() != embed_dim()) {
      throw ConfigError("PinyinParams: filters must share one k x d shape");
    }
  }
  if (!embeddings.allFinite()) {
    throw ConfigError("PinyinParams: non-finite token embedding");
  }
  for (const auto& filter : filters) {
    if (!filter.allFinite()) throw ConfigError("PinyinParams: non-finite filter entry");
  }
}

PinyinGrads PinyinGrads::zeros_like(const PinyinParams& params) {
  PinyinGrads grads;
  grads.d_embeddings = Eigen::MatrixXd::Zero(params.embeddings.rows(), params.embeddings.cols());
  grads.d_filters.reserve(params.filters.size());
  for (const auto& filter : params.filters) {
    grads.d_filters.push_back(Eigen::MatrixXd::Zero(filter.rows(), filter.cols()));
  }
  return grads;
}

PinyinForwardCache pinyin_forward(const PinyinSequence& sequence, const PinyinParams& params) {
  const std::int64_t k = params.filter_width();
  const std::int64_t nf = params.filter_count();

  PinyinForwardCache cache;
  cache.padded_ids = sequence.tokens;
  while (static_cast<std::int64_t>(cache.padded_ids.size()) < k) {
    cache.padded_ids.push_back(Lexicon::kPadId);
  }
  const auto l = static_cast<std::int64_t>(cache.padded_ids.size());

  cache.token_embeds.resize(l, params.embed_dim());
  for (std::int64_t t = 0; t < l; ++t) {
    const std::int32_t id = cache.padded_ids[static_cast<std::size_t>(t)];
    if (id < 0 || id >= params.token_count()) {
      throw ContractError("pinyin_forward: token id " + std::to_string(id) +
                          " out of range [0, " + std::to_string(params.token_count()) + ")");
    }
    cache.token_embeds.row(t) = params.embeddings.row(id);
  }

  const std::int64_t windows = l - k + 1;
  cache.window_scores.resize(windows, nf);
  cache.argmax.resize(static_cast<std::size_t>(nf));
  cache.output.resize(nf);
  for (std::int64_t f = 0; f < nf; ++f) {
    const Eigen::MatrixXd& filter = params.filters[static_cast<std::size_t>(f)];
    Eigen::Index best = 0;
    for (std::int64_t t = 0; t < windows; ++t) {
      const double z = (cache.token_embeds.middleRows(t, k).array() * filter.array()).sum();
      cache.window_scores(t, f) = z;
      // Smallest index attaining the max wins; strict > keeps the first.
      if (z > cache.window_scores(best, f)) best = t;
    }
    cache.argmax[static_cast<std::size_t>(f)] = best;
    cache.output(f) = cache.window_scores(best, f);
  }
  return cache;
}

void pinyin_backward(const PinyinForwardCache& cache, const Eigen::VectorXd& upstream,
                     const PinyinParams& params, PinyinGrads& grads) {
  const std::int64_t nf = params.filter_count();
  const std::int64_t k = params.filter_width();
  if (upstream.size() != nf) {
    throw ContractError("pinyin_backward: upstream length " + std::to_string(upstream.size()) +
                        " != filter count " + std::to_string(nf));
  }
  if (grads.d_embeddings.rows() != params.embeddings.rows() ||
      grads.d_filters.size() != params.filters.size()) {
    throw ContractError("pinyin_backward: gradient shapes do not match params");
  }
  for (std::int64_t f = 0; f < nf; ++f) {
    const double g = upstream(f);
    if (g == 0.0) continue;
    const Eigen::Index t0 = cache.argmax[static_cast<std::size_t>(f)];
    // output_f = sum(E[t0..t0+k) .* F_f), so dF_f = g * E-window and the
    // window's token rows receive g * F_f.
    grads.d_filters[static_cast<std::size_t>(f)] += g * cache.token_embeds.middleRows(t0, k);
    const Eigen::MatrixXd& filter = params.filters[static_cast<std::size_t>(f)];
    for (std::int64_t r = 0; r < k; ++r) {
      const std::int32_t id = cache.padded_ids[static_cast<std::size_t>(t0 + r)];
      grads.d_embeddings.row(id) += g * filter.row(r);
    }
  }
}

Eigen::VectorXd word_repr(const std::string& unit, const Eigen::VectorXd& lexical_emb,
                          const PinyinParams& params, const Lexicon& lex) {
  const PinyinForwardCache cache = pinyin_forward(decompose(unit, lex), params);
  Eigen::VectorXd out(lexical_emb.size() + cache.output.size());
  out << lexical_emb, cache.output;
  return out;
}

namespace {

double loss_at(const PinyinParams& params, const PinyinSequence& sequence,
               const PinyinLoss& loss) {
  return loss.value(pinyin_forward(sequence, params).output);
}

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-12});
  return std::fabs(analytic - numeric) / scale;
}

}  // namespace

double pinyin_grad_check(const PinyinParams& params, const PinyinSequence& sequence,
                         const PinyinLoss& loss, double eps) {
  if (eps <= 0.0) {
    throw ContractError("pinyin_grad_check: eps must be positive");
  }
  const PinyinForwardCache cache = pinyin_forward(sequence, params);
  PinyinGrads grads = PinyinGrads::zeros_like(params);
  pinyin_backward(cache, loss.gradient(cache.output), params, grads);

  PinyinParams probe = params;
  double max_err = 0.0;
  auto check_scalar = [&](double& slot, double analytic) {
    const double saved = slot;
    slot = saved + eps;
    const double hi = loss_at(probe, sequence, loss);
    slot = saved - eps;
    const double lo = loss_at(probe, sequence, loss);
    slot = saved;
    const double numeric = (hi - lo) / (2.0 * eps);
    max_err = std::max(max_err, relative_error(analytic, numeric));
  };

  for (Eigen::Index r = 0; r < probe.embeddings.rows(); ++r) {
    for (Eigen::Index c = 0; c < probe.embeddings.cols(); ++c) {
      check_scalar(probe.embeddings(r, c), grads.d_embeddings(r, c));
    }
  }
  for (std::size_t f = 0; f < probe.filters.size(); ++f) {
    for (Eigen::Index r = 0; r < probe.filters[f].rows(); ++r) {
      for (Eigen::Index c = 0; c < probe.filters[f].cols(); ++c) {
        check_scalar(probe.filters[f](r, c), grads.d_filters[f](r, c));
      }
    }
  }
  return max_err;
}

}  // namespace pinyinqa
