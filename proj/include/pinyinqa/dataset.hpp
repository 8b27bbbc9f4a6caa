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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pinyinqa {

/// How documents, questions and answers are segmented into lexical units.
/// Char: one unit per code point (Chinese default). Word: whitespace tokens,
/// joined back with single spaces (synthetic Latin corpora).
enum class UnitMode { kChar, kWord };

std::vector<std::string> segment_units(std::string_view text, UnitMode mode);

/// Units plus the code-point offset where each one starts in the original
/// text (answer_start fields refer to these offsets).
struct SegmentedText {
  std::vector<std::string> units;
  std::vector<std::size_t> offsets;
};
SegmentedText segment_with_offsets(std::string_view text, UnitMode mode);

std::string join_units(const std::vector<std::string>& units, UnitMode mode);
std::string join_units(const std::vector<std::string>& units, std::size_t begin, std::size_t end,
                       UnitMode mode);

const char* unit_mode_name(UnitMode mode);
UnitMode unit_mode_from_name(std::string_view name);

/// One (question, document, answer-span) triple. The span is inclusive over
/// document unit indices and must concatenate to answer_text.
struct QAExample {
  std::string id;
  std::vector<std::string> question;
  std::vector<std::string> document;
  std::size_t answer_start = 0;
  std::size_t answer_end = 0;  // inclusive
  std::string answer_text;
};

enum class Provenance { kOriginal, kCorrupted, kBacktranslated, kMerged };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(std::string_view name);

struct Dataset {
  std::vector<QAExample> examples;
  Provenance provenance = Provenance::kOriginal;
  UnitMode unit_mode = UnitMode::kChar;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

/// True iff the example's span is in bounds and concatenates to answer_text.
bool span_consistent(const QAExample& example, UnitMode mode);

/// Throws ContractError if ids repeat or any example violates the span
/// invariant.
void validate_dataset(const Dataset& dataset);

}  // namespace pinyinqa
