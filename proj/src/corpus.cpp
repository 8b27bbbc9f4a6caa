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

#include "pinyinqa/corpus.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "pinyinqa/error.hpp"
#include "pinyinqa/metrics.hpp"
#include "pinyinqa/rng.hpp"
#include "pinyinqa/text.hpp"

namespace pinyinqa {

using json = nlohmann::json;

namespace {

const json& require(const json& node, const char* key, const std::string& path) {
  if (!node.is_object() || !node.contains(key)) {
    throw ParseError("corpus JSON: missing field " + path + "." + key);
  }
  return node.at(key);
}

std::string require_string(const json& node, const char* key, const std::string& path) {
  const json& value = require(node, key, path);
  if (!value.is_string()) {
    throw ParseError("corpus JSON: field " + path + "." + key + " must be a string");
  }
  return value.get<std::string>();
}

// Index of the unit that starts exactly at the given code-point offset, or
// npos when the offset does not start a unit.
std::size_t offset_to_unit(const SegmentedText& segmented, std::size_t offset) {
  for (std::size_t i = 0; i < segmented.offsets.size(); ++i) {
    if (segmented.offsets[i] == offset) return i;
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

LoadReport load_squad_json(const std::string& content, UnitMode mode) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("corpus JSON: ") + e.what());
  }

  LoadReport report;
  report.dataset.unit_mode = mode;
  if (root.contains("unit_mode") && root.at("unit_mode").is_string()) {
    report.dataset.unit_mode = unit_mode_from_name(root.at("unit_mode").get<std::string>());
  }
  if (root.contains("provenance_tag") && root.at("provenance_tag").is_string()) {
    report.dataset.provenance = provenance_from_name(root.at("provenance_tag").get<std::string>());
  }

  mode = report.dataset.unit_mode;

  const json& data = require(root, "data", "$");
  if (!data.is_array()) throw ParseError("corpus JSON: $.data must be an array");

  std::size_t ai = 0;
  for (const json& article : data) {
    const std::string apath = "$.data[" + std::to_string(ai++) + "]";
    const json& paragraphs = require(article, "paragraphs", apath);
    if (!paragraphs.is_array()) throw ParseError("corpus JSON: " + apath + ".paragraphs must be an array");

    std::size_t pi = 0;
    for (const json& paragraph : paragraphs) {
      const std::string ppath = apath + ".paragraphs[" + std::to_string(pi++) + "]";
      const std::string context = require_string(paragraph, "context", ppath);
      const SegmentedText segmented = segment_with_offsets(context, mode);
      const std::vector<std::string>& doc_units = segmented.units;

      const json& qas = require(paragraph, "qas", ppath);
      if (!qas.is_array()) throw ParseError("corpus JSON: " + ppath + ".qas must be an array");

      std::size_t qi = 0;
      for (const json& qa : qas) {
        const std::string qpath = ppath + ".qas[" + std::to_string(qi++) + "]";
        QAExample example;
        example.id = require_string(qa, "id", qpath);
        example.question = segment_units(require_string(qa, "question", qpath), mode);
        example.document = doc_units;

        const json& answers = require(qa, "answers", qpath);
        if (!answers.is_array() || answers.empty()) {
          throw ParseError("corpus JSON: " + qpath + ".answers must be a non-empty array");
        }
        const json& answer = answers.at(0);
        example.answer_text = require_string(answer, "text", qpath + ".answers[0]");
        const json& start = require(answer, "answer_start", qpath + ".answers[0]");
        if (!start.is_number_integer() || start.get<std::int64_t>() < 0) {
          throw ParseError("corpus JSON: " + qpath +
                           ".answers[0].answer_start must be a non-negative integer");
        }

        const auto offset = static_cast<std::size_t>(start.get<std::int64_t>());
        const std::size_t unit_start = offset_to_unit(segmented, offset);
        bool ok = unit_start != static_cast<std::size_t>(-1);
        if (ok) {
          const std::vector<std::string> answer_units = segment_units(example.answer_text, mode);
          ok = !answer_units.empty() &&
               unit_start + answer_units.size() <= doc_units.size() &&
               std::equal(answer_units.begin(), answer_units.end(),
                          doc_units.begin() + static_cast<std::ptrdiff_t>(unit_start));
          if (ok) {
            example.answer_start = unit_start;
            example.answer_end = unit_start + answer_units.size() - 1;
            ok = span_consistent(example, mode);
          }
        }
        if (ok) {
          report.dataset.examples.push_back(std::move(example));
        } else {
          report.rejected_ids.push_back(example.id);
        }
      }
    }
  }
  return report;
}

std::string to_squad_json(const Dataset& dataset, int indent) {
  json data = json::array();
  for (const QAExample& example : dataset.examples) {
    const std::string context = join_units(example.document, dataset.unit_mode);
    std::size_t offset = 0;
    for (std::size_t i = 0; i < example.answer_start; ++i) {
      offset += codepoint_count(example.document[i]);
      if (dataset.unit_mode == UnitMode::kWord) offset += 1;  // joining space
    }
    json qa = {
        {"id", example.id},
        {"question", join_units(example.question, dataset.unit_mode)},
        {"answers", json::array({{{"text", example.answer_text},
                                  {"answer_start", offset}}})},
    };
    data.push_back({
        {"title", example.id},
        {"paragraphs", json::array({{{"context", context}, {"qas", json::array({qa})}}})},
    });
  }
  json root = {
      {"version", "v1.0"},
      {"provenance_tag", provenance_name(dataset.provenance)},
      {"unit_mode", unit_mode_name(dataset.unit_mode)},
      {"data", data},
  };
  return root.dump(indent);
}

void ChannelConfig::validate() const {
  auto in_range = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_range(p_sub) || !in_range(p_del) || !in_range(p_ins)) {
    throw ConfigError("channel: probabilities must lie in [0, 1]");
  }
  if (p_sub + p_del + p_ins > 1.0 + 1e-12) {
    throw ConfigError("channel: p_sub + p_del + p_ins must not exceed 1");
  }
}

namespace {

// Uniformly random element of `bucket` other than `current`; empty when no
// alternative exists.
std::string pick_bucket_mate(const std::vector<std::string>& bucket, const std::string& current,
                             RandomStream& rng) {
  if (bucket.size() < 2) return {};
  std::size_t pick = static_cast<std::size_t>(rng.bounded(bucket.size() - 1));
  if (bucket[pick] == current) pick = bucket.size() - 1;
  return bucket[pick];
}

}  // namespace

Dataset corrupt(const Dataset& dataset, const ChannelConfig& cfg, const HomophoneIndex& index) {
  cfg.validate();
  if (cfg.mode == ChannelMode::kHomophone && index.bucket_count() == 0) {
    throw ConfigError("channel: homophone mode requires a non-empty homophone index");
  }
  const std::vector<std::string>& inventory = index.characters();

  Dataset out;
  out.provenance = Provenance::kCorrupted;
  out.unit_mode = dataset.unit_mode;
  out.examples.reserve(dataset.size());

  for (const QAExample& example : dataset.examples) {
    RandomStream rng(RandomStream::derive(cfg.seed, example.id));
    QAExample corrupted = example;
    corrupted.document.clear();

    for (const std::string& ch : example.document) {
      const double u = rng.uniform();
      if (u < cfg.p_sub) {
        std::string replacement;
        if (cfg.mode == ChannelMode::kHomophone) {
          if (const auto* bucket = index.bucket_of(ch)) {
            replacement = pick_bucket_mate(*bucket, ch, rng);
          }
        } else {
          replacement = pick_bucket_mate(inventory, ch, rng);
        }
        corrupted.document.push_back(replacement.empty() ? ch : replacement);
      } else if (u < cfg.p_sub + cfg.p_del) {
        // deleted
      } else if (u < cfg.p_sub + cfg.p_del + cfg.p_ins) {
        corrupted.document.push_back(ch);
        if (!inventory.empty()) {
          corrupted.document.push_back(inventory[rng.bounded(inventory.size())]);
        }
      } else {
        corrupted.document.push_back(ch);
      }
    }
    if (corrupted.document.empty()) {
      // A fully deleted document keeps one PAD-like copy of the first char
      // rather than producing an empty example.
      corrupted.document.push_back(example.document.front());
    }
    out.examples.push_back(std::move(corrupted));
  }
  return out;
}

FilterReport filter_answerable(const Dataset& dataset) {
  FilterReport report;
  report.dataset.provenance = dataset.provenance;
  report.dataset.unit_mode = dataset.unit_mode;

  for (const QAExample& example : dataset.examples) {
    const std::vector<std::string> answer_units =
        segment_units(example.answer_text, dataset.unit_mode);
    std::size_t found = static_cast<std::size_t>(-1);
    if (!answer_units.empty() && answer_units.size() <= example.document.size()) {
      for (std::size_t s = 0; s + answer_units.size() <= example.document.size(); ++s) {
        if (std::equal(answer_units.begin(), answer_units.end(),
                       example.document.begin() + static_cast<std::ptrdiff_t>(s))) {
          found = s;
          break;
        }
      }
    }
    if (found == static_cast<std::size_t>(-1)) {
      ++report.dropped;
      report.dropped_ids.push_back(example.id);
      continue;
    }
    QAExample kept = example;
    kept.answer_start = found;
    kept.answer_end = found + answer_units.size() - 1;
    report.dataset.examples.push_back(std::move(kept));
    ++report.kept;
  }
  return report;
}

BacktransReport backtranslate(const Dataset& dataset, TranslatorClient& client,
                              const std::string& pivot_lang, const std::string& source_lang) {
  Dataset round_tripped;
  round_tripped.unit_mode = dataset.unit_mode;
  BacktransReport report;

  for (const QAExample& example : dataset.examples) {
    const std::string doc_text = join_units(example.document, dataset.unit_mode);
    std::string back;
    try {
      const std::string pivot = client.translate(doc_text, source_lang, pivot_lang);
      back = client.translate(pivot, pivot_lang, source_lang);
      ++report.translated;
    } catch (const std::exception&) {
      ++report.client_failures;
      continue;
    }
    QAExample translated = example;
    translated.document = segment_units(back, dataset.unit_mode);
    if (translated.document.empty()) {
      ++report.client_failures;
      continue;
    }
    round_tripped.examples.push_back(std::move(translated));
  }

  FilterReport filtered = filter_answerable(round_tripped);
  report.kept = filtered.kept;
  report.dropped = filtered.dropped;
  report.dataset = std::move(filtered.dataset);
  report.dataset.provenance = Provenance::kBacktranslated;
  return report;
}

Dataset merge(const std::vector<Dataset>& datasets) {
  Dataset out;
  out.provenance = Provenance::kMerged;
  out.unit_mode = datasets.empty() ? UnitMode::kChar : datasets.front().unit_mode;

  std::unordered_set<std::string> seen;
  for (const Dataset& source : datasets) {
    if (source.unit_mode != out.unit_mode) {
      throw ContractError("merge: datasets disagree on unit mode");
    }
    const std::string prefix = std::string(provenance_name(source.provenance)) + ":";
    for (const QAExample& example : source.examples) {
      QAExample merged = example;
      merged.id = prefix + example.id;
      if (!seen.insert(merged.id).second) {
        throw ContractError("merge: id collision after prefixing: '" + merged.id + "'");
      }
      out.examples.push_back(std::move(merged));
    }
  }
  return out;
}

CorpusStats corpus_stats(const Dataset& dataset, const Dataset* reference) {
  CorpusStats stats;
  stats.qa_pairs = dataset.size();
  if (dataset.empty()) return stats;

  double doc_chars = 0.0;
  double q_chars = 0.0;
  for (const QAExample& example : dataset.examples) {
    doc_chars += static_cast<double>(codepoint_count(join_units(example.document, dataset.unit_mode)));
    q_chars += static_cast<double>(codepoint_count(join_units(example.question, dataset.unit_mode)));
  }
  stats.avg_doc_len = doc_chars / static_cast<double>(dataset.size());
  stats.avg_q_len = q_chars / static_cast<double>(dataset.size());

  if (reference) {
    std::unordered_map<std::string, const QAExample*> by_id;
    for (const QAExample& example : reference->examples) by_id[example.id] = &example;
    double wer_sum = 0.0;
    for (const QAExample& example : dataset.examples) {
      auto it = by_id.find(example.id);
      if (it == by_id.end()) {
        throw ContractError("stats: reference is missing id '" + example.id + "'");
      }
      wer_sum += wer(it->second->document, example.document);
    }
    stats.wer = wer_sum / static_cast<double>(dataset.size());
  }
  return stats;
}

}  // namespace pinyinqa
