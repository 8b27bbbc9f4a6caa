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
#include <string>
#include <string_view>
#include <vector>

namespace pinyinqa {

/// Decodes UTF-8 into code points. Throws ParseError on invalid bytes.
std::vector<char32_t> decode_utf8(std::string_view text);

std::string encode_utf8(const std::vector<char32_t>& codepoints);
void append_utf8(std::string& out, char32_t cp);

/// One string per code point; the concatenation reproduces the input.
std::vector<std::string> split_codepoints(std::string_view text);

/// Number of code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view text);

bool is_unicode_space(char32_t cp);

/// Punctuation test over the ASCII block plus the common general/CJK/fullwidth
/// punctuation ranges; intentionally not a full Unicode category table.
bool is_unicode_punct(char32_t cp);

/// FNV-1a 64-bit. Used for artifact provenance digests and RNG stream splitting.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace pinyinqa
