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

#include <map>
#include <string>
#include <vector>

#include "pinyinqa/dataset.hpp"

namespace pinyinqa {

struct ExampleScore {
  std::string id;
  int em = 0;        // 0 or 1
  double f1 = 0.0;   // [0, 1]
};

struct EvalReport {
  double em = 0.0;  // macro average of per-example EM
  double f1 = 0.0;  // macro average of per-example F1
  std::size_t n = 0;
  std::vector<ExampleScore> per_example;  // dataset order
};

/// Answer normalization: trim, drop all whitespace and punctuation, lowercase
/// ASCII letters. CJK characters pass through unchanged.
std::string normalize_answer(const std::string& text);

/// 1 iff the normalized prediction equals any normalized gold answer.
/// Throws ContractError on an empty golds list.
int exact_match(const std::string& prediction, const std::vector<std::string>& golds);

/// Character-level F1: multiset character overlap after normalization,
/// harmonic mean of precision and recall, max over golds. An empty
/// normalized prediction scores 0 unless some gold is also empty (then 1).
double char_f1(const std::string& prediction, const std::vector<std::string>& golds);

/// Scores every dataset example against the predictions map and macro-averages.
/// Throws ContractError on an empty dataset or missing prediction ids.
EvalReport evaluate(const std::map<std::string, std::string>& predictions,
                    const Dataset& dataset);

/// Edit distance (substitutions + insertions + deletions) divided by the
/// reference length. Throws ContractError on an empty reference.
double wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

}  // namespace pinyinqa
