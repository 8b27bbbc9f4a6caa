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

#include "pinyinqa/metrics.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pinyinqa/error.hpp"
#include "pinyinqa/text.hpp"

namespace pinyinqa {

std::string normalize_answer(const std::string& text) {
  std::vector<char32_t> kept;
  for (char32_t cp : decode_utf8(text)) {
    if (is_unicode_space(cp) || is_unicode_punct(cp)) continue;
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
    kept.push_back(cp);
  }
  return encode_utf8(kept);
}

int exact_match(const std::string& prediction, const std::vector<std::string>& golds) {
  if (golds.empty()) {
    throw ContractError("exact_match: golds list must be non-empty");
  }
  const std::string pred = normalize_answer(prediction);
  return std::any_of(golds.begin(), golds.end(),
                     [&](const std::string& g) { return normalize_answer(g) == pred; })
             ? 1
             : 0;
}

namespace {

std::map<char32_t, std::size_t> char_counts(const std::string& normalized) {
  std::map<char32_t, std::size_t> counts;
  for (char32_t cp : decode_utf8(normalized)) ++counts[cp];
  return counts;
}

double f1_against(const std::map<char32_t, std::size_t>& pred_counts, std::size_t pred_len,
                  const std::string& gold_normalized) {
  const std::size_t gold_len = codepoint_count(gold_normalized);
  if (pred_len == 0 || gold_len == 0) {
    return (pred_len == 0 && gold_len == 0) ? 1.0 : 0.0;
  }
  const auto gold_counts = char_counts(gold_normalized);
  std::size_t overlap = 0;
  for (const auto& [cp, count] : pred_counts) {
    auto it = gold_counts.find(cp);
    if (it != gold_counts.end()) overlap += std::min(count, it->second);
  }
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / static_cast<double>(pred_len);
  const double recall = static_cast<double>(overlap) / static_cast<double>(gold_len);
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double char_f1(const std::string& prediction, const std::vector<std::string>& golds) {
  if (golds.empty()) {
    throw ContractError("char_f1: golds list must be non-empty");
  }
  const std::string pred = normalize_answer(prediction);
  const auto pred_counts = char_counts(pred);
  const std::size_t pred_len = codepoint_count(pred);
  double best = 0.0;
  for (const std::string& gold : golds) {
    best = std::max(best, f1_against(pred_counts, pred_len, normalize_answer(gold)));
  }
  return best;
}

EvalReport evaluate(const std::map<std::string, std::string>& predictions,
                    const Dataset& dataset) {
  if (dataset.empty()) {
    throw ContractError("evaluate: dataset is empty (macro average undefined)");
  }
  std::vector<std::string> missing;
  for (const QAExample& example : dataset.examples) {
    if (!predictions.count(example.id)) missing.push_back(example.id);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "evaluate: missing prediction ids:";
    for (const std::string& id : missing) msg << ' ' << id;
    throw ContractError(msg.str());
  }

  EvalReport report;
  report.n = dataset.size();
  double em_sum = 0.0;
  double f1_sum = 0.0;
  for (const QAExample& example : dataset.examples) {
    const std::string& pred = predictions.at(example.id);
    const std::vector<std::string> golds = {example.answer_text};
    ExampleScore score;
    score.id = example.id;
    score.em = exact_match(pred, golds);
    score.f1 = char_f1(pred, golds);
    em_sum += score.em;
    f1_sum += score.f1;
    report.per_example.push_back(std::move(score));
  }
  report.em = em_sum / static_cast<double>(report.n);
  report.f1 = f1_sum / static_cast<double>(report.n);
  return report;
}

double wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis) {
  if (reference.empty()) {
    throw ContractError("wer: reference must be non-empty");
  }
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  // Single-row Levenshtein.
  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = diag + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({sub, row[j] + 1, row[j - 1] + 1});
    }
  }
  return static_cast<double>(row[m]) / static_cast<double>(n);
}

}  // namespace pinyinqa
