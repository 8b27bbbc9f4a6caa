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
#include <vector>

namespace pinyinqa {

/// Text translation interface used by the back-translation pipeline.
class TranslatorClient {
 public:
  virtual ~TranslatorClient() = default;
  virtual std::string translate(const std::string& text, const std::string& source_lang,
                                const std::string& target_lang) = 0;
};

/// Deterministic stand-in for a translation service: per-character synonym
/// substitution plus seeded character dropout. Each call derives its stream
/// from (seed, text), so results do not depend on call order.
class MockParaphraser : public TranslatorClient {
 public:
  MockParaphraser(std::map<std::string, std::vector<std::string>> synonyms, double dropout,
                  std::uint64_t seed);

  /// Loads {"synonyms": {unit: [alternatives...]}, "dropout": p} from JSON.
  static MockParaphraser from_json(const std::string& json_text, std::uint64_t seed);

  std::string translate(const std::string& text, const std::string& source_lang,
                        const std::string& target_lang) override;

 private:
  std::map<std::string, std::vector<std::string>> synonyms_;
  double dropout_;
  std::uint64_t seed_;
};

/// Minimal client for a user-supplied translation endpoint. Reads the
/// endpoint URL from TRANSLATOR_ENDPOINT and an optional bearer token from
/// TRANSLATOR_API_KEY; POSTs {"text", "source", "target"} and expects
/// {"text": ...} back. Throws on transport or protocol errors.
class HttpTranslator : public TranslatorClient {
 public:
  static HttpTranslator from_env();
  explicit HttpTranslator(std::string endpoint, std::string api_key = "");

  std::string translate(const std::string& text, const std::string& source_lang,
                        const std::string& target_lang) override;

 private:
  std::string host_;
  std::string path_;
  std::string api_key_;
};

}  // namespace pinyinqa
