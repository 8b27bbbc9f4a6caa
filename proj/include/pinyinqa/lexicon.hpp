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
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pinyinqa {

/// Ordered pinyin-token id sequence for one lexical unit. Tokens are single
/// romanization letters; ids index Lexicon::token_vocab.
struct PinyinSequence {
  std::vector<std::int32_t> tokens;

  std::size_t length() const { return tokens.size(); }
  bool operator==(const PinyinSequence&) const = default;
};

struct LexiconOptions {
  /// Keep trailing tone digits as extra tokens instead of stripping them.
  bool keep_tone_digits = false;
};

/// Pronunciation lexicon: lexical unit -> toneless pinyin syllables, plus the
/// pinyin-token vocabulary. Immutable after parse; safe for concurrent reads.
class Lexicon {
 public:
  static constexpr std::int32_t kPadId = 0;
  static constexpr std::int32_t kUnkId = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  /// Headword pronunciation, or nullptr if absent.
  const std::vector<std::string>* lookup(const std::string& headword) const;

  bool contains(const std::string& headword) const { return lookup(headword) != nullptr; }

  std::size_t entry_count() const { return entries_.size(); }

  /// Token vocabulary C = |token_vocab|, PAD at 0, UNK at 1.
  const std::vector<std::string>& token_vocab() const { return token_vocab_; }
  std::size_t token_count() const { return token_vocab_.size(); }

  /// Token id for a single-letter token string, or kUnkId if unknown.
  std::int32_t token_id(const std::string& token) const;

  /// Headwords in original file order (first occurrence).
  const std::vector<std::string>& headwords() const { return headword_order_; }

  friend Lexicon parse_lexicon(std::string_view text, const LexiconOptions& options);

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
  std::vector<std::string> headword_order_;
  std::vector<std::string> token_vocab_;
  std::unordered_map<std::string, std::int32_t> token_index_;
};

/// Parses TSV lexicon content: `headword<TAB>syllable[ syllable...]` per line,
/// `#` comments and blank lines skipped, trailing tone digits 0-5 stripped
/// (unless options.keep_tone_digits). Duplicate headwords keep the first
/// pronunciation. Throws ParseError naming the offending line.
Lexicon parse_lexicon(std::string_view text, const LexiconOptions& options = {});

/// Decomposes a lexical unit into pinyin-token ids: whole-headword match
/// first, otherwise per-character concatenation, with UNK for characters
/// absent from the lexicon. Total; result length >= 1 for non-empty input.
PinyinSequence decompose(const std::string& unit, const Lexicon& lex);

/// Letter strings of a decomposition (test/debug convenience).
std::vector<std::string> decompose_tokens(const std::string& unit, const Lexicon& lex);

/// Toneless syllable -> single characters sharing that pronunciation.
/// Buckets are sorted for deterministic iteration and sampling.
class HomophoneIndex {
 public:
  const std::vector<std::string>* bucket(const std::string& syllable) const;

  /// The bucket the character belongs to, with its syllable key; nullptr if
  /// the character is not indexed.
  const std::vector<std::string>* bucket_of(const std::string& character,
                                            std::string* syllable_out = nullptr) const;

  /// All indexed characters, sorted. The sampling inventory for the
  /// uniform-substitution and insertion channels.
  const std::vector<std::string>& characters() const { return characters_; }

  std::size_t bucket_count() const { return buckets_.size(); }
  const std::map<std::string, std::vector<std::string>>& buckets() const { return buckets_; }

  friend HomophoneIndex build_homophone_index(const Lexicon& lex);

 private:
  std::map<std::string, std::vector<std::string>> buckets_;
  std::unordered_map<std::string, std::string> char_to_syllable_;
  std::vector<std::string> characters_;
};

/// Inverts the lexicon over single-character, single-syllable headwords.
HomophoneIndex build_homophone_index(const Lexicon& lex);

}  // namespace pinyinqa
