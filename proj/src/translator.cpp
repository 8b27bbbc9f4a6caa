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

#include "pinyinqa/translator.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pinyinqa/error.hpp"
#include "pinyinqa/rng.hpp"
#include "pinyinqa/text.hpp"

namespace pinyinqa {

using json = nlohmann::json;

MockParaphraser::MockParaphraser(std::map<std::string, std::vector<std::string>> synonyms,
                                 double dropout, std::uint64_t seed)
    : synonyms_(std::move(synonyms)), dropout_(dropout), seed_(seed) {
  if (dropout_ < 0.0 || dropout_ >= 1.0) {
    throw ConfigError("mock paraphraser: dropout must lie in [0, 1)");
  }
}

MockParaphraser MockParaphraser::from_json(const std::string& json_text, std::uint64_t seed) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("synonym table: ") + e.what());
  }
  std::map<std::string, std::vector<std::string>> table;
  if (root.contains("synonyms")) {
    for (const auto& [unit, alts] : root.at("synonyms").items()) {
      if (alts.is_string()) {
        table[unit] = {alts.get<std::string>()};
      } else if (alts.is_array()) {
        std::vector<std::string> list;
        for (const auto& alt : alts) list.push_back(alt.get<std::string>());
        if (!list.empty()) table[unit] = std::move(list);
      }
    }
  }
  const double dropout = root.value("dropout", 0.0);
  return MockParaphraser(std::move(table), dropout, seed);
}

std::string MockParaphraser::translate(const std::string& text, const std::string&,
                                       const std::string&) {
  RandomStream rng(RandomStream::derive(seed_, text));
  std::string out;
  for (const std::string& unit : split_codepoints(text)) {
    if (dropout_ > 0.0 && rng.uniform() < dropout_) continue;
    auto it = synonyms_.find(unit);
    if (it == synonyms_.end()) {
      out += unit;
    } else {
      out += it->second[rng.bounded(it->second.size())];
    }
  }
  return out;
}

HttpTranslator HttpTranslator::from_env() {
  const char* endpoint = std::getenv("TRANSLATOR_ENDPOINT");
  if (!endpoint || !*endpoint) {
    throw ConfigError("http translator: TRANSLATOR_ENDPOINT is not set");
  }
  const char* key = std::getenv("TRANSLATOR_API_KEY");
  return HttpTranslator(endpoint, key ? key : "");
}

HttpTranslator::HttpTranslator(std::string endpoint, std::string api_key)
    : api_key_(std::move(api_key)) {
  // Split scheme://host[:port] from the path.
  const std::size_t scheme = endpoint.find("://");
  const std::size_t path_start =
      endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) {
    host_ = endpoint;
    path_ = "/";
  } else {
    host_ = endpoint.substr(0, path_start);
    path_ = endpoint.substr(path_start);
  }
}

std::string HttpTranslator::translate(const std::string& text, const std::string& source_lang,
                                      const std::string& target_lang) {
  httplib::Client client(host_);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);

  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  const json body = {{"text", text}, {"source", source_lang}, {"target", target_lang}};
  auto result = client.Post(path_, headers, body.dump(), "application/json");
  if (!result) {
    throw ParseError("http translator: request failed: " + httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw ParseError("http translator: HTTP " + std::to_string(result->status));
  }
  const json response = json::parse(result->body, nullptr, false);
  if (response.is_discarded() || !response.contains("text") || !response.at("text").is_string()) {
    throw ParseError("http translator: response is not {\"text\": ...}");
  }
  return response.at("text").get<std::string>();
}

}  // namespace pinyinqa
