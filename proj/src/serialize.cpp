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

#include "pinyinqa/serialize.hpp"

#include "pinyinqa/error.hpp"

namespace pinyinqa {

using json = nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c));
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& node, const std::string& path) {
  if (!node.is_object() || !node.contains("rows") || !node.contains("cols") ||
      !node.contains("data") || !node.at("data").is_array()) {
    throw ParseError("checkpoint: malformed matrix at " + path);
  }
  const auto rows = node.at("rows").get<Eigen::Index>();
  const auto cols = node.at("cols").get<Eigen::Index>();
  const json& data = node.at("data");
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ParseError("checkpoint: matrix size mismatch at " + path);
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = data.at(i++).get<double>();
    }
  }
  return m;
}

json pinyin_params_to_json(const PinyinParams& params) {
  json filters = json::array();
  for (const auto& filter : params.filters) filters.push_back(matrix_to_json(filter));
  return {
      {"format_version", kCheckpointFormatVersion},
      {"token_count", params.token_count()},
      {"embed_dim", params.embed_dim()},
      {"filter_width", params.filter_width()},
      {"filter_count", params.filter_count()},
      {"embeddings", matrix_to_json(params.embeddings)},
      {"filters", std::move(filters)},
  };
}

PinyinParams pinyin_params_from_json(const json& node) {
  if (!node.contains("format_version")) {
    throw ParseError("pinyin checkpoint: missing format_version");
  }
  PinyinParams params;
  params.embeddings = matrix_from_json(node.at("embeddings"), "embeddings");
  for (std::size_t i = 0; i < node.at("filters").size(); ++i) {
    params.filters.push_back(
        matrix_from_json(node.at("filters").at(i), "filters[" + std::to_string(i) + "]"));
  }
  params.validate();
  return params;
}

json checkpoint_to_json(const ReaderParams& params) {
  return {
      {"format_version", kCheckpointFormatVersion},
      {"kind", "reader-checkpoint"},
      {"use_pinyin", params.use_pinyin},
      {"max_span_len", params.max_span_len},
      {"vocab", params.vocab},
      {"lexical", matrix_to_json(params.lexical)},
      {"pinyin", pinyin_params_to_json(params.pinyin)},
      {"attn_proj", matrix_to_json(params.attn_proj)},
      {"attn_query", matrix_to_json(params.attn_query)},
      {"mixer", matrix_to_json(params.mixer)},
      {"start_bilinear", matrix_to_json(params.start_bilinear)},
      {"end_bilinear", matrix_to_json(params.end_bilinear)},
  };
}

ReaderParams checkpoint_from_json(const json& node) {
  if (!node.is_object() || !node.contains("format_version")) {
    throw ParseError("checkpoint: missing format_version");
  }
  if (node.at("format_version").get<int>() != kCheckpointFormatVersion) {
    throw ParseError("checkpoint: unsupported format_version");
  }
  ReaderParams params;
  params.use_pinyin = node.at("use_pinyin").get<bool>();
  params.max_span_len = node.at("max_span_len").get<int>();
  params.vocab = node.at("vocab").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < params.vocab.size(); ++i) {
    params.vocab_index[params.vocab[i]] = static_cast<std::int32_t>(i);
  }
  params.lexical = matrix_from_json(node.at("lexical"), "lexical");
  params.pinyin = pinyin_params_from_json(node.at("pinyin"));
  params.attn_proj = matrix_from_json(node.at("attn_proj"), "attn_proj");
  params.attn_query = matrix_from_json(node.at("attn_query"), "attn_query");
  params.mixer = matrix_from_json(node.at("mixer"), "mixer");
  params.start_bilinear = matrix_from_json(node.at("start_bilinear"), "start_bilinear");
  params.end_bilinear = matrix_from_json(node.at("end_bilinear"), "end_bilinear");
  params.validate();
  return params;
}

json eval_report_to_json(const EvalReport& report) {
  json per_example = json::array();
  for (const ExampleScore& score : report.per_example) {
    per_example.push_back({{"id", score.id}, {"em", score.em}, {"f1", score.f1}});
  }
  return {
      {"em", report.em},
      {"f1", report.f1},
      {"n", report.n},
      {"per_example", std::move(per_example)},
  };
}

json corpus_stats_to_json(const CorpusStats& stats) {
  json out = {
      {"qa_pairs", stats.qa_pairs},
      {"avg_doc_len", stats.avg_doc_len},
      {"avg_q_len", stats.avg_q_len},
      {"wer", nullptr},
  };
  if (stats.wer) out["wer"] = *stats.wer;
  return out;
}

}  // namespace pinyinqa
