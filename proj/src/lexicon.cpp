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

#include "pinyinqa/lexicon.hpp"

#include <algorithm>
#include <set>

#include "pinyinqa/error.hpp"
#include "pinyinqa/text.hpp"

namespace pinyinqa {

namespace {

bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_tone_digit(char c) { return c >= '0' && c <= '5'; }

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t') ++pos;
    if (pos > start) out.push_back(s.substr(start, pos - start));
  }
  return out;
}

}  // namespace

const std::vector<std::string>* Lexicon::lookup(const std::string& headword) const {
  auto it = entries_.find(headword);
  return it == entries_.end() ? nullptr : &it->second;
}

std::int32_t Lexicon::token_id(const std::string& token) const {
  auto it = token_index_.find(token);
  return it == token_index_.end() ? kUnkId : it->second;
}

Lexicon parse_lexicon(std::string_view text, const LexiconOptions& options) {
  Lexicon lex;
  std::set<char> seen_letters;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("lexicon line " + std::to_string(line_no) + ": missing TAB separator");
    }
    std::string headword(line.substr(0, tab));
    if (headword.empty()) {
      throw ParseError("lexicon line " + std::to_string(line_no) + ": empty headword");
    }

    auto raw_syllables = split_ws(line.substr(tab + 1));
    if (raw_syllables.empty()) {
      throw ParseError("lexicon line " + std::to_string(line_no) + ": empty syllable field");
    }

    std::vector<std::string> syllables;
    syllables.reserve(raw_syllables.size());
    for (std::string_view raw : raw_syllables) {
      std::string syl(raw);
      if (!options.keep_tone_digits && !syl.empty() && is_tone_digit(syl.back())) {
        syl.pop_back();
      }
      if (syl.empty()) {
        throw ParseError("lexicon line " + std::to_string(line_no) + ": empty syllable field");
      }
      for (char c : syl) {
        bool ok = is_ascii_lower(c) || (options.keep_tone_digits && is_tone_digit(c));
        if (!ok) {
          throw ParseError("lexicon line " + std::to_string(line_no) +
                           ": non-ASCII syllable '" + syl + "'");
        }
        seen_letters.insert(c);
      }
      syllables.push_back(std::move(syl));
    }

    // First-listed pronunciation wins for duplicate headwords.
    if (lex.entries_.emplace(headword, std::move(syllables)).second) {
      lex.headword_order_.push_back(headword);
    }
  }

  lex.token_vocab_.push_back(Lexicon::kPadToken);
  lex.token_vocab_.push_back(Lexicon::kUnkToken);
  for (char c : seen_letters) {
    lex.token_vocab_.emplace_back(1, c);
  }
  for (std::size_t i = 0; i < lex.token_vocab_.size(); ++i) {
    lex.token_index_[lex.token_vocab_[i]] = static_cast<std::int32_t>(i);
  }
  return lex;
}

namespace {

void append_syllable_tokens(const std::vector<std::string>& syllables, const Lexicon& lex,
                            std::vector<std::int32_t>& out) {
  for (const std::string& syl : syllables) {
    for (char c : syl) {
      out.push_back(lex.token_id(std::string(1, c)));
    }
  }
}

}  // namespace

PinyinSequence decompose(const std::string& unit, const Lexicon& lex) {
  if (unit.empty()) {
    throw ContractError("decompose: unit must be non-empty");
  }
  PinyinSequence seq;
  if (const auto* syllables = lex.lookup(unit)) {
    append_syllable_tokens(*syllables, lex, seq.tokens);
    return seq;
  }
  for (const std::string& ch : split_codepoints(unit)) {
    if (const auto* syllables = lex.lookup(ch)) {
      append_syllable_tokens(*syllables, lex, seq.tokens);
    } else {
      seq.tokens.push_back(Lexicon::kUnkId);
    }
  }
  return seq;
}

std::vector<std::string> decompose_tokens(const std::string& unit, const Lexicon& lex) {
  std::vector<std::string> out;
  for (std::int32_t id : decompose(unit, lex).tokens) {
    out.push_back(lex.token_vocab()[static_cast<std::size_t>(id)]);
  }
  return out;
}

const std::vector<std::string>* HomophoneIndex::bucket(const std::string& syllable) const {
  auto it = buckets_.find(syllable);
  return it == buckets_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* HomophoneIndex::bucket_of(const std::string& character,
                                                          std::string* syllable_out) const {
  auto it = char_to_syllable_.find(character);
  if (it == char_to_syllable_.end()) return nullptr;
  if (syllable_out) *syllable_out = it->second;
  return bucket(it->second);
}

HomophoneIndex build_homophone_index(const Lexicon& lex) {
  HomophoneIndex index;
  for (const std::string& headword : lex.headwords()) {
    if (codepoint_count(headword) != 1) continue;
    const auto& syllables = *lex.lookup(headword);
    if (syllables.size() != 1) continue;
    index.buckets_[syllables[0]].push_back(headword);
    index.char_to_syllable_[headword] = syllables[0];
  }
  for (auto& [syllable, chars] : index.buckets_) {
    std::sort(chars.begin(), chars.end());
    index.characters_.insert(index.characters_.end(), chars.begin(), chars.end());
  }
  std::sort(index.characters_.begin(), index.characters_.end());
  return index;
}

}  // namespace pinyinqa
