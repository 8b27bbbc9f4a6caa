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

#include <nlohmann/json.hpp>

#include "pinyinqa/corpus.hpp"
#include "pinyinqa/metrics.hpp"
#include "pinyinqa/pinyin_cnn.hpp"
#include "pinyinqa/reader.hpp"

namespace pinyinqa {

inline constexpr int kCheckpointFormatVersion = 1;

/// {"rows", "cols", "data": row-major doubles}
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& node, const std::string& path);

/// Standalone subword-embedding checkpoint: C, d, k, nf, H row-major,
/// filters in order, plus a format version.
nlohmann::json pinyin_params_to_json(const PinyinParams& params);
PinyinParams pinyin_params_from_json(const nlohmann::json& node);

/// Full reader checkpoint bundling all tensors, the vocab, use_pinyin and
/// the decoding span cap.
nlohmann::json checkpoint_to_json(const ReaderParams& params);
ReaderParams checkpoint_from_json(const nlohmann::json& node);

nlohmann::json eval_report_to_json(const EvalReport& report);
nlohmann::json corpus_stats_to_json(const CorpusStats& stats);

}  // namespace pinyinqa
