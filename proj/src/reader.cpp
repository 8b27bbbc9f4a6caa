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

#include "pinyinqa/reader.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "pinyinqa/error.hpp"

namespace pinyinqa {

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ConfigError("train config: learning_rate must be positive");
  if (batch_size < 1) throw ConfigError("train config: batch_size must be >= 1");
  if (epochs < 0) throw ConfigError("train config: epochs must be >= 0");
  if (clip_norm <= 0.0) throw ConfigError("train config: clip_norm must be positive");
  if (max_span_len < 1) throw ConfigError("train config: max_span_len must be >= 1");
  if (lexical_dim < 1 || hidden_dim < 1) {
    throw ConfigError("train config: embedding dims must be >= 1");
  }
  if (pinyin_embed_dim < 1 || pinyin_filter_width < 1 || pinyin_filter_count < 1) {
    throw ConfigError("train config: pinyin dims must be >= 1");
  }
}

std::int32_t ReaderParams::row_of(const std::string& unit) const {
  auto it = vocab_index.find(unit);
  return it == vocab_index.end() ? 0 : it->second;
}

std::vector<Eigen::MatrixXd*> ReaderParams::tensors() {
  std::vector<Eigen::MatrixXd*> out = {&lexical, &pinyin.embeddings};
  for (auto& filter : pinyin.filters) out.push_back(&filter);
  out.insert(out.end(), {&attn_proj, &attn_query, &mixer, &start_bilinear, &end_bilinear});
  return out;
}

std::vector<const Eigen::MatrixXd*> ReaderParams::tensors() const {
  std::vector<const Eigen::MatrixXd*> out = {&lexical, &pinyin.embeddings};
  for (const auto& filter : pinyin.filters) out.push_back(&filter);
  out.insert(out.end(), {&attn_proj, &attn_query, &mixer, &start_bilinear, &end_bilinear});
  return out;
}

namespace {

void fill_uniform(Eigen::MatrixXd& m, RandomStream& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rng.uniform(-0.05, 0.05);
    }
  }
}

}  // namespace

ReaderParams ReaderParams::init(std::vector<std::string> vocab, const TrainConfig& config,
                                std::int64_t pinyin_token_count, RandomStream& rng) {
  config.validate();
  ReaderParams params;
  params.vocab = std::move(vocab);
  for (std::size_t i = 0; i < params.vocab.size(); ++i) {
    params.vocab_index[params.vocab[i]] = static_cast<std::int32_t>(i);
  }
  params.use_pinyin = config.use_pinyin;
  params.max_span_len = config.max_span_len;

  params.lexical.resize(static_cast<Eigen::Index>(params.vocab.size()), config.lexical_dim);
  fill_uniform(params.lexical, rng);
  params.pinyin = PinyinParams::init(pinyin_token_count, rng, config.pinyin_embed_dim,
                                     config.pinyin_filter_width, config.pinyin_filter_count);

  const Eigen::Index dx = params.input_dim();
  const Eigen::Index dh = config.hidden_dim;
  params.attn_proj.resize(dh, dx);
  params.attn_query.resize(dh, 1);
  params.mixer.resize(dh, 3 * dx);
  params.start_bilinear.resize(dh, dx);
  params.end_bilinear.resize(dh, dx);
  fill_uniform(params.attn_proj, rng);
  fill_uniform(params.attn_query, rng);
  fill_uniform(params.mixer, rng);
  fill_uniform(params.start_bilinear, rng);
  fill_uniform(params.end_bilinear, rng);
  return params;
}

void ReaderParams::validate() const {
  if (vocab.empty() || vocab[0] != "<unk>") {
    throw ConfigError("reader params: vocab must start with the <unk> row");
  }
  if (lexical.rows() != static_cast<Eigen::Index>(vocab.size())) {
    throw ConfigError("reader params: lexical table rows != vocab size");
  }
  pinyin.validate();
  const Eigen::Index dx = input_dim();
  const Eigen::Index dh = attn_proj.rows();
  if (attn_proj.cols() != dx || attn_query.rows() != dh || attn_query.cols() != 1 ||
      mixer.rows() != dh || mixer.cols() != 3 * dx || start_bilinear.rows() != dh ||
      start_bilinear.cols() != dx || end_bilinear.rows() != dh || end_bilinear.cols() != dx) {
    throw ConfigError("reader params: inconsistent tensor shapes");
  }
  for (const auto* tensor : tensors()) {
    if (!tensor->allFinite()) throw ConfigError("reader params: non-finite entry");
  }
}

ReaderGrads ReaderGrads::zeros_like(const ReaderParams& params) {
  ReaderGrads grads;
  grads.lexical = Eigen::MatrixXd::Zero(params.lexical.rows(), params.lexical.cols());
  grads.pinyin = PinyinGrads::zeros_like(params.pinyin);
  grads.attn_proj = Eigen::MatrixXd::Zero(params.attn_proj.rows(), params.attn_proj.cols());
  grads.attn_query = Eigen::MatrixXd::Zero(params.attn_query.rows(), params.attn_query.cols());
  grads.mixer = Eigen::MatrixXd::Zero(params.mixer.rows(), params.mixer.cols());
  grads.start_bilinear =
      Eigen::MatrixXd::Zero(params.start_bilinear.rows(), params.start_bilinear.cols());
  grads.end_bilinear = Eigen::MatrixXd::Zero(params.end_bilinear.rows(), params.end_bilinear.cols());
  return grads;
}

void ReaderGrads::set_zero() {
  for (auto* tensor : tensors()) tensor->setZero();
}

std::vector<Eigen::MatrixXd*> ReaderGrads::tensors() {
  std::vector<Eigen::MatrixXd*> out = {&lexical, &pinyin.d_embeddings};
  for (auto& filter : pinyin.d_filters) out.push_back(&filter);
  out.insert(out.end(), {&attn_proj, &attn_query, &mixer, &start_bilinear, &end_bilinear});
  return out;
}

const PinyinSequence& DecomposeCache::get(const std::string& unit) {
  auto it = memo_.find(unit);
  if (it != memo_.end()) return it->second;
  return memo_.emplace(unit, decompose(unit, lex_)).first->second;
}

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd shifted = (logits.array() - logits.maxCoeff()).exp();
  return shifted / shifted.sum();
}

// Fills cache.unique_units/unit_rows/unit_pinyin and the token->unit maps,
// then materializes the input matrices.
void build_inputs(const QAExample& example, const ReaderParams& params, DecomposeCache& decomp,
                  ReaderCache& cache) {
  std::unordered_map<std::string, std::int32_t> local;
  auto intern = [&](const std::string& unit) {
    auto it = local.find(unit);
    if (it != local.end()) return it->second;
    const auto idx = static_cast<std::int32_t>(cache.unique_units.size());
    local.emplace(unit, idx);
    cache.unique_units.push_back(unit);
    cache.unit_rows.push_back(params.row_of(unit));
    if (params.use_pinyin) {
      cache.unit_pinyin.push_back(pinyin_forward(decomp.get(unit), params.pinyin));
    }
    return idx;
  };

  for (const std::string& unit : example.question) cache.question_unit.push_back(intern(unit));
  for (const std::string& unit : example.document) cache.document_unit.push_back(intern(unit));

  const Eigen::Index dx = params.input_dim();
  const Eigen::Index dw = params.lexical_dim();
  Eigen::MatrixXd unit_repr(static_cast<Eigen::Index>(cache.unique_units.size()), dx);
  for (std::size_t u = 0; u < cache.unique_units.size(); ++u) {
    const auto row = static_cast<Eigen::Index>(u);
    unit_repr.row(row).head(dw) = params.lexical.row(cache.unit_rows[u]);
    if (params.use_pinyin) {
      unit_repr.row(row).tail(params.pinyin.filter_count()) = cache.unit_pinyin[u].output;
    }
  }

  cache.question_inputs.resize(static_cast<Eigen::Index>(cache.question_unit.size()), dx);
  for (std::size_t j = 0; j < cache.question_unit.size(); ++j) {
    cache.question_inputs.row(static_cast<Eigen::Index>(j)) = unit_repr.row(cache.question_unit[j]);
  }
  cache.document_inputs.resize(static_cast<Eigen::Index>(cache.document_unit.size()), dx);
  for (std::size_t i = 0; i < cache.document_unit.size(); ++i) {
    cache.document_inputs.row(static_cast<Eigen::Index>(i)) = unit_repr.row(cache.document_unit[i]);
  }
}

// Rows shifted down/up by one with a zeroed edge row; the window mixer sees
// x_{i-1} and x_{i+1} through these.
Eigen::MatrixXd shifted_down(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  if (m.rows() > 1) out.bottomRows(m.rows() - 1) = m.topRows(m.rows() - 1);
  return out;
}

Eigen::MatrixXd shifted_up(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  if (m.rows() > 1) out.topRows(m.rows() - 1) = m.bottomRows(m.rows() - 1);
  return out;
}

}  // namespace

ReaderCache model_forward(const QAExample& example, const ReaderParams& params,
                          DecomposeCache& decomp) {
  if (example.question.empty()) {
    throw ContractError("model_forward: empty question (example '" + example.id + "')");
  }
  if (example.document.empty()) {
    throw ContractError("model_forward: empty document (example '" + example.id + "')");
  }

  ReaderCache cache;
  build_inputs(example, params, decomp, cache);

  const Eigen::Index dx = params.input_dim();
  // Question summary via attention.
  cache.question_tanh = (cache.question_inputs * params.attn_proj.transpose()).array().tanh();
  const Eigen::VectorXd scores = cache.question_tanh * params.attn_query.col(0);
  cache.attn_weights = softmax(scores);
  cache.question_summary = cache.question_inputs.transpose() * cache.attn_weights;

  // Document window mixer.
  const Eigen::MatrixXd prev = shifted_down(cache.document_inputs);
  const Eigen::MatrixXd next = shifted_up(cache.document_inputs);
  Eigen::MatrixXd pre = prev * params.mixer.middleCols(0, dx).transpose();
  pre.noalias() += cache.document_inputs * params.mixer.middleCols(dx, dx).transpose();
  pre.noalias() += next * params.mixer.middleCols(2 * dx, dx).transpose();
  cache.document_hidden = pre.array().tanh();

  // Bilinear span scores.
  const Eigen::VectorXd start_key = params.start_bilinear * cache.question_summary;
  const Eigen::VectorXd end_key = params.end_bilinear * cache.question_summary;
  cache.start_logits = cache.document_hidden * start_key;
  cache.end_logits = cache.document_hidden * end_key;
  return cache;
}

double span_cross_entropy(const Eigen::VectorXd& start_logits, const Eigen::VectorXd& end_logits,
                          std::size_t gold_start, std::size_t gold_end) {
  const auto n = static_cast<std::size_t>(start_logits.size());
  if (gold_start >= n || gold_end >= n) {
    throw ContractError("span_cross_entropy: gold span out of document bounds");
  }
  const Eigen::VectorXd start_prob = softmax(start_logits);
  const Eigen::VectorXd end_prob = softmax(end_logits);
  return -std::log(start_prob(static_cast<Eigen::Index>(gold_start))) -
         std::log(end_prob(static_cast<Eigen::Index>(gold_end)));
}

double loss_and_grads(const ReaderCache& cache, std::size_t gold_start, std::size_t gold_end,
                      const ReaderParams& params, ReaderGrads& grads) {
  const auto n = static_cast<std::size_t>(cache.start_logits.size());
  if (gold_start >= n || gold_end >= n) {
    throw ContractError("loss_and_grads: gold span out of document bounds");
  }

  const Eigen::VectorXd start_prob = softmax(cache.start_logits);
  const Eigen::VectorXd end_prob = softmax(cache.end_logits);
  const double loss = -std::log(start_prob(static_cast<Eigen::Index>(gold_start))) -
                      std::log(end_prob(static_cast<Eigen::Index>(gold_end)));

  Eigen::VectorXd d_start = start_prob;
  d_start(static_cast<Eigen::Index>(gold_start)) -= 1.0;
  Eigen::VectorXd d_end = end_prob;
  d_end(static_cast<Eigen::Index>(gold_end)) -= 1.0;

  const Eigen::Index dx = params.input_dim();
  const Eigen::VectorXd start_key = params.start_bilinear * cache.question_summary;
  const Eigen::VectorXd end_key = params.end_bilinear * cache.question_summary;

  // Bilinear scores.
  const Eigen::VectorXd d_start_key = cache.document_hidden.transpose() * d_start;
  const Eigen::VectorXd d_end_key = cache.document_hidden.transpose() * d_end;
  grads.start_bilinear.noalias() += d_start_key * cache.question_summary.transpose();
  grads.end_bilinear.noalias() += d_end_key * cache.question_summary.transpose();
  Eigen::VectorXd d_summary = params.start_bilinear.transpose() * d_start_key;
  d_summary.noalias() += params.end_bilinear.transpose() * d_end_key;

  // Window mixer, through tanh.
  Eigen::MatrixXd d_hidden = d_start * start_key.transpose();
  d_hidden.noalias() += d_end * end_key.transpose();
  const Eigen::MatrixXd d_pre =
      d_hidden.array() * (1.0 - cache.document_hidden.array().square());

  const Eigen::MatrixXd prev = shifted_down(cache.document_inputs);
  const Eigen::MatrixXd next = shifted_up(cache.document_inputs);
  grads.mixer.middleCols(0, dx).noalias() += d_pre.transpose() * prev;
  grads.mixer.middleCols(dx, dx).noalias() += d_pre.transpose() * cache.document_inputs;
  grads.mixer.middleCols(2 * dx, dx).noalias() += d_pre.transpose() * next;

  Eigen::MatrixXd d_doc_inputs = d_pre * params.mixer.middleCols(dx, dx);
  d_doc_inputs.noalias() += shifted_up(Eigen::MatrixXd(d_pre * params.mixer.middleCols(0, dx)));
  d_doc_inputs.noalias() +=
      shifted_down(Eigen::MatrixXd(d_pre * params.mixer.middleCols(2 * dx, dx)));

  // Question attention.
  const Eigen::VectorXd d_weights = cache.question_inputs * d_summary;
  Eigen::MatrixXd d_q_inputs = cache.attn_weights * d_summary.transpose();
  const double weighted = cache.attn_weights.dot(d_weights);
  const Eigen::VectorXd d_scores =
      cache.attn_weights.array() * (d_weights.array() - weighted);
  grads.attn_query.col(0).noalias() += cache.question_tanh.transpose() * d_scores;
  const Eigen::MatrixXd d_q_pre =
      (d_scores * params.attn_query.col(0).transpose()).array() *
      (1.0 - cache.question_tanh.array().square());
  grads.attn_proj.noalias() += d_q_pre.transpose() * cache.question_inputs;
  d_q_inputs.noalias() += d_q_pre * params.attn_proj;

  // Scatter input gradients onto the shared unit representations, then into
  // the embedding tables.
  Eigen::MatrixXd d_units =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cache.unique_units.size()), dx);
  for (std::size_t j = 0; j < cache.question_unit.size(); ++j) {
    d_units.row(cache.question_unit[j]) += d_q_inputs.row(static_cast<Eigen::Index>(j));
  }
  for (std::size_t i = 0; i < cache.document_unit.size(); ++i) {
    d_units.row(cache.document_unit[i]) += d_doc_inputs.row(static_cast<Eigen::Index>(i));
  }

  const Eigen::Index dw = params.lexical_dim();
  for (std::size_t u = 0; u < cache.unique_units.size(); ++u) {
    const auto row = static_cast<Eigen::Index>(u);
    grads.lexical.row(cache.unit_rows[u]) += d_units.row(row).head(dw);
    if (params.use_pinyin) {
      pinyin_backward(cache.unit_pinyin[u],
                      d_units.row(row).tail(params.pinyin.filter_count()).transpose(),
                      params.pinyin, grads.pinyin);
    }
  }
  return loss;
}

double loss_only(const QAExample& example, const ReaderParams& params, DecomposeCache& decomp) {
  const ReaderCache cache = model_forward(example, params, decomp);
  return span_cross_entropy(cache.start_logits, cache.end_logits, example.answer_start,
                            example.answer_end);
}

std::pair<std::size_t, std::size_t> predict_span(const Eigen::VectorXd& start_logits,
                                                 const Eigen::VectorXd& end_logits,
                                                 int max_span_len) {
  const Eigen::Index n = start_logits.size();
  if (n < 1 || end_logits.size() != n) {
    throw ContractError("predict_span: logit lists must be non-empty and equal length");
  }
  if (max_span_len < 1) {
    throw ContractError("predict_span: max_span_len must be >= 1");
  }
  std::size_t best_s = 0;
  std::size_t best_e = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index s = 0; s < n; ++s) {
    const Eigen::Index last = std::min<Eigen::Index>(n - 1, s + max_span_len - 1);
    for (Eigen::Index e = s; e <= last; ++e) {
      const double score = start_logits(s) + end_logits(e);
      if (score > best) {  // strict: ties keep the earlier (s, e)
        best = score;
        best_s = static_cast<std::size_t>(s);
        best_e = static_cast<std::size_t>(e);
      }
    }
  }
  return {best_s, best_e};
}

namespace {

/// Adam with standard defaults over the fixed tensor order.
class AdamState {
 public:
  explicit AdamState(const ReaderParams& params)
      : first_(ReaderGrads::zeros_like(params)), second_(ReaderGrads::zeros_like(params)) {}

  void step(ReaderParams& params, ReaderGrads& grads, double learning_rate) {
    ++t_;
    const double correction1 = 1.0 - std::pow(kBeta1, t_);
    const double correction2 = 1.0 - std::pow(kBeta2, t_);
    auto param_tensors = params.tensors();
    auto grad_tensors = grads.tensors();
    auto m_tensors = first_.tensors();
    auto v_tensors = second_.tensors();
    for (std::size_t i = 0; i < param_tensors.size(); ++i) {
      Eigen::MatrixXd& g = *grad_tensors[i];
      Eigen::MatrixXd& m = *m_tensors[i];
      Eigen::MatrixXd& v = *v_tensors[i];
      m = kBeta1 * m + (1.0 - kBeta1) * g;
      v = kBeta2 * v.array().matrix() + (1.0 - kBeta2) * g.array().square().matrix();
      param_tensors[i]->array() -=
          learning_rate * (m.array() / correction1) /
          ((v.array() / correction2).sqrt() + kEpsilon);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;
  ReaderGrads first_;
  ReaderGrads second_;
  long t_ = 0;
};

double global_norm(ReaderGrads& grads) {
  double sum = 0.0;
  for (auto* tensor : grads.tensors()) sum += tensor->squaredNorm();
  return std::sqrt(sum);
}

std::vector<std::string> build_vocab(const Dataset& dataset) {
  std::set<std::string> units;
  for (const QAExample& example : dataset.examples) {
    units.insert(example.question.begin(), example.question.end());
    units.insert(example.document.begin(), example.document.end());
  }
  std::vector<std::string> vocab = {"<unk>"};
  vocab.insert(vocab.end(), units.begin(), units.end());
  return vocab;
}

}  // namespace

TrainResult train(const Dataset& dataset, const TrainConfig& config, const Lexicon& lex) {
  config.validate();
  if (dataset.empty()) {
    throw ContractError("train: dataset is empty");
  }
  validate_dataset(dataset);

  RandomStream rng(config.seed);
  TrainResult result;
  result.params = ReaderParams::init(build_vocab(dataset), config,
                                     static_cast<std::int64_t>(lex.token_count()), rng);

  DecomposeCache decomp(lex);
  AdamState adam(result.params);
  ReaderGrads grads = ReaderGrads::zeros_like(result.params);

  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    rng.shuffle(order);
    double epoch_loss = 0.0;

    const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size, ++batch_index) {
      const std::size_t end = std::min(begin + batch_size, order.size());
      grads.set_zero();
      double batch_loss = 0.0;
      for (std::size_t pos = begin; pos < end; ++pos) {
        const QAExample& example = dataset.examples[order[pos]];
        const ReaderCache cache = model_forward(example, result.params, decomp);
        batch_loss +=
            loss_and_grads(cache, example.answer_start, example.answer_end, result.params, grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw ContractError("train: non-finite loss in epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(batch_index));
      }
      epoch_loss += batch_loss;

      const double scale = 1.0 / static_cast<double>(end - begin);
      for (auto* tensor : grads.tensors()) *tensor *= scale;
      const double norm = global_norm(grads);
      if (norm > config.clip_norm) {
        const double clip = config.clip_norm / norm;
        for (auto* tensor : grads.tensors()) *tensor *= clip;
      }
      adam.step(result.params, grads, config.learning_rate);
    }

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    result.log.push_back({epoch, epoch_loss / static_cast<double>(dataset.size()),
                          elapsed.count()});
  }
  return result;
}

std::map<std::string, std::string> predict(const Dataset& dataset, const ReaderParams& params,
                                           const Lexicon& lex) {
  params.validate();
  DecomposeCache decomp(lex);
  std::map<std::string, std::string> predictions;
  for (const QAExample& example : dataset.examples) {
    const ReaderCache cache = model_forward(example, params, decomp);
    const auto [s, e] = predict_span(cache.start_logits, cache.end_logits, params.max_span_len);
    predictions[example.id] = join_units(example.document, s, e + 1, dataset.unit_mode);
  }
  return predictions;
}

double reader_grad_check(const QAExample& example, const ReaderParams& params, const Lexicon& lex,
                         double eps) {
  if (eps <= 0.0) throw ContractError("reader_grad_check: eps must be positive");

  DecomposeCache decomp(lex);
  ReaderGrads grads = ReaderGrads::zeros_like(params);
  const ReaderCache cache = model_forward(example, params, decomp);
  loss_and_grads(cache, example.answer_start, example.answer_end, params, grads);

  ReaderParams probe = params;
  auto probe_tensors = probe.tensors();
  auto grad_tensors = grads.tensors();

  double max_err = 0.0;
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    Eigen::MatrixXd& tensor = *probe_tensors[t];
    const Eigen::MatrixXd& grad = *grad_tensors[t];
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
        const double saved = tensor(r, c);
        tensor(r, c) = saved + eps;
        const double hi = loss_only(example, probe, decomp);
        tensor(r, c) = saved - eps;
        const double lo = loss_only(example, probe, decomp);
        tensor(r, c) = saved;
        const double numeric = (hi - lo) / (2.0 * eps);
        const double analytic = grad(r, c);
        const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-12});
        max_err = std::max(max_err, std::fabs(analytic - numeric) / scale);
      }
    }
  }
  return max_err;
}

}  // namespace pinyinqa
