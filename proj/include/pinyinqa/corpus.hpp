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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinyinqa/dataset.hpp"
#include "pinyinqa/lexicon.hpp"
#include "pinyinqa/translator.hpp"

namespace pinyinqa {

struct LoadReport {
  Dataset dataset;
  std::vector<std::string> rejected_ids;  // failed span consistency
};

/// Parses a SQuAD-v1-style JSON corpus. answer_start is a code point offset
/// into the context. Span-inconsistent examples are rejected and reported,
/// not fatal; malformed JSON throws ParseError naming the JSON path.
LoadReport load_squad_json(const std::string& content, UnitMode mode = UnitMode::kChar);

/// Serializes a dataset back to the same schema, one paragraph per example.
std::string to_squad_json(const Dataset& dataset, int indent = -1);

enum class ChannelMode { kHomophone, kUniform };

/// Per-character noise channel standing in for a TTS->ASR round trip.
/// One uniform draw per character decides substitute / delete / insert / keep
/// with that priority.
struct ChannelConfig {
  double p_sub = 0.0;
  double p_del = 0.0;
  double p_ins = 0.0;
  std::uint64_t seed = 0;
  ChannelMode mode = ChannelMode::kHomophone;

  void validate() const;  // throws ConfigError
};

/// Applies the channel to documents only; questions stay in text form.
/// Homophone mode substitutes within the character's toneless-pinyin bucket
/// (singleton bucket or unindexed character: kept); uniform mode substitutes
/// any different indexed character. Answer spans are left stale and must be
/// re-established by filter_answerable. Deterministic under cfg.seed via
/// per-example-id streams.
Dataset corrupt(const Dataset& dataset, const ChannelConfig& cfg, const HomophoneIndex& index);

struct FilterReport {
  Dataset dataset;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::vector<std::string> dropped_ids;
};

/// Keeps examples whose answer_text still occurs as a contiguous unit
/// subsequence of the document, relocating the span to the first occurrence.
FilterReport filter_answerable(const Dataset& dataset);

struct BacktransReport {
  Dataset dataset;
  std::size_t translated = 0;
  std::size_t client_failures = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;  // dropped by the answerability filter
};

/// Round-trips every document source -> pivot -> source through the client,
/// leaves questions unchanged, then applies filter_answerable. Client
/// failures drop the example and are counted; the run continues.
BacktransReport backtranslate(const Dataset& dataset, TranslatorClient& client,
                              const std::string& pivot_lang = "en",
                              const std::string& source_lang = "zh");

/// Concatenates datasets, prefixing every id with its source provenance tag.
/// Throws ContractError on id collisions after prefixing.
Dataset merge(const std::vector<Dataset>& datasets);

struct CorpusStats {
  std::size_t qa_pairs = 0;
  double avg_doc_len = 0.0;  // mean characters per document
  double avg_q_len = 0.0;    // mean characters per question
  std::optional<double> wer;  // mean per-document WER vs reference
};

/// Counts and average lengths in characters; with a reference dataset also
/// the mean per-document WER over id-aligned documents (unit sequences).
CorpusStats corpus_stats(const Dataset& dataset, const Dataset* reference = nullptr);

}  // namespace pinyinqa
