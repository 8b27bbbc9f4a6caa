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

#include "pinyinqa/text.hpp"

#include "pinyinqa/error.hpp"

namespace pinyinqa {

namespace {

// Returns the byte length of the sequence starting with `first`, or 0 if the
// byte cannot start a sequence.
int sequence_length(unsigned char first) {
  if (first < 0x80) return 1;
  if ((first & 0xE0) == 0xC0) return 2;
  if ((first & 0xF0) == 0xE0) return 3;
  if ((first & 0xF8) == 0xF0) return 4;
  return 0;
}

char32_t decode_one(std::string_view text, std::size_t pos, int len) {
  static constexpr char32_t kMinValue[] = {0, 0, 0x80, 0x800, 0x10000};
  char32_t cp = 0;
  switch (len) {
    case 1: return static_cast<unsigned char>(text[pos]);
    case 2: cp = static_cast<unsigned char>(text[pos]) & 0x1F; break;
    case 3: cp = static_cast<unsigned char>(text[pos]) & 0x0F; break;
    case 4: cp = static_cast<unsigned char>(text[pos]) & 0x07; break;
    default:
      throw ParseError("invalid UTF-8 lead byte at offset " + std::to_string(pos));
  }
  for (int i = 1; i < len; ++i) {
    unsigned char c = static_cast<unsigned char>(text[pos + i]);
    if ((c & 0xC0) != 0x80) {
      throw ParseError("truncated UTF-8 sequence at offset " + std::to_string(pos));
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < kMinValue[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    throw ParseError("invalid UTF-8 code point at offset " + std::to_string(pos));
  }
  return cp;
}

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    int len = sequence_length(static_cast<unsigned char>(text[pos]));
    if (len == 0 || pos + len > text.size()) {
      throw ParseError("invalid UTF-8 at offset " + std::to_string(pos));
    }
    out.push_back(decode_one(text, pos, len));
    pos += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const std::vector<char32_t>& codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 3);
  for (char32_t cp : codepoints) append_utf8(out, cp);
  return out;
}

std::vector<std::string> split_codepoints(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t cp : decode_utf8(text)) {
    std::string unit;
    append_utf8(unit, cp);
    out.push_back(std::move(unit));
  }
  return out;
}

std::size_t codepoint_count(std::string_view text) {
  return decode_utf8(text).size();
}

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_unicode_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'!' && cp <= U'/') || (cp >= U':' && cp <= U'@') ||
           (cp >= U'[' && cp <= U'`') || (cp >= U'{' && cp <= U'~');
  }
  // General punctuation, supplemental punctuation, CJK symbols and
  // punctuation, and the punctuation slices of the fullwidth forms block.
  if (cp >= 0x2000 && cp <= 0x206F) return !is_unicode_space(cp);
  if (cp >= 0x2E00 && cp <= 0x2E7F) return true;
  if (cp >= 0x3001 && cp <= 0x303F) return true;
  if (cp >= 0xFE10 && cp <= 0xFE1F) return true;
  if (cp >= 0xFE30 && cp <= 0xFE6F) return true;
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
  if (cp >= 0xFF1A && cp <= 0xFF20) return true;
  if (cp >= 0xFF3B && cp <= 0xFF40) return true;
  if (cp >= 0xFF5B && cp <= 0xFF65) return true;
  switch (cp) {
    case 0x00A1: case 0x00B7: case 0x00BF: case 0x2E80:
      return true;
    default:
      return false;
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x00000100000001B3ULL;
  }
  return hash;
}

}  // namespace pinyinqa
