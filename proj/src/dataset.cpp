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

#include "pinyinqa/dataset.hpp"

#include <unordered_set>

#include "pinyinqa/error.hpp"
#include "pinyinqa/text.hpp"

namespace pinyinqa {

SegmentedText segment_with_offsets(std::string_view text, UnitMode mode) {
  SegmentedText out;
  const std::vector<char32_t> codepoints = decode_utf8(text);
  if (mode == UnitMode::kChar) {
    out.units.reserve(codepoints.size());
    for (std::size_t i = 0; i < codepoints.size(); ++i) {
      std::string unit;
      append_utf8(unit, codepoints[i]);
      out.units.push_back(std::move(unit));
      out.offsets.push_back(i);
    }
    return out;
  }
  auto is_sep = [](char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r';
  };
  std::size_t pos = 0;
  while (pos < codepoints.size()) {
    while (pos < codepoints.size() && is_sep(codepoints[pos])) ++pos;
    const std::size_t start = pos;
    std::string unit;
    while (pos < codepoints.size() && !is_sep(codepoints[pos])) {
      append_utf8(unit, codepoints[pos]);
      ++pos;
    }
    if (pos > start) {
      out.units.push_back(std::move(unit));
      out.offsets.push_back(start);
    }
  }
  return out;
}

std::vector<std::string> segment_units(std::string_view text, UnitMode mode) {
  return segment_with_offsets(text, mode).units;
}

std::string join_units(const std::vector<std::string>& units, std::size_t begin, std::size_t end,
                       UnitMode mode) {
  std::string out;
  for (std::size_t i = begin; i < end && i < units.size(); ++i) {
    if (mode == UnitMode::kWord && i > begin) out += ' ';
    out += units[i];
  }
  return out;
}

std::string join_units(const std::vector<std::string>& units, UnitMode mode) {
  return join_units(units, 0, units.size(), mode);
}

const char* unit_mode_name(UnitMode mode) {
  return mode == UnitMode::kChar ? "char" : "word";
}

UnitMode unit_mode_from_name(std::string_view name) {
  if (name == "char") return UnitMode::kChar;
  if (name == "word") return UnitMode::kWord;
  throw ConfigError("unknown unit mode '" + std::string(name) + "' (expected char|word)");
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return "original";
    case Provenance::kCorrupted: return "corrupted";
    case Provenance::kBacktranslated: return "backtranslated";
    case Provenance::kMerged: return "merged";
  }
  return "original";
}

Provenance provenance_from_name(std::string_view name) {
  if (name == "original") return Provenance::kOriginal;
  if (name == "corrupted") return Provenance::kCorrupted;
  if (name == "backtranslated") return Provenance::kBacktranslated;
  if (name == "merged") return Provenance::kMerged;
  throw ConfigError("unknown provenance tag '" + std::string(name) + "'");
}

bool span_consistent(const QAExample& example, UnitMode mode) {
  if (example.document.empty()) return false;
  if (example.answer_start > example.answer_end) return false;
  if (example.answer_end >= example.document.size()) return false;
  return join_units(example.document, example.answer_start, example.answer_end + 1, mode) ==
         example.answer_text;
}

void validate_dataset(const Dataset& dataset) {
  std::unordered_set<std::string> ids;
  for (const QAExample& example : dataset.examples) {
    if (!ids.insert(example.id).second) {
      throw ContractError("dataset: duplicate example id '" + example.id + "'");
    }
    if (!span_consistent(example, dataset.unit_mode)) {
      throw ContractError("dataset: example '" + example.id + "' violates the span invariant");
    }
  }
}

}  // namespace pinyinqa
