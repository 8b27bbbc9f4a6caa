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

#include "support/synthetic.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pinyinqa/rng.hpp"
#include "pinyinqa/text.hpp"

namespace pinyinqa::testing {

namespace {

constexpr char32_t kCharBase = 0x4E00;
constexpr const char* kQuestionMarker = "龠";  // outside the bucket range

std::string bucket_char(int bucket, int member, int chars_per_bucket) {
  std::string out;
  append_utf8(out, kCharBase + static_cast<char32_t>(bucket * chars_per_bucket + member));
  return out;
}

std::vector<std::string> make_syllables(int count) {
  static const std::vector<std::string> onsets = {"b", "c", "d", "f", "g", "h", "j",
                                                  "k", "l", "m", "n", "p", "q", "r",
                                                  "s", "t", "w", "x", "y", "z"};
  static const std::vector<std::string> finals = {"a",  "e",  "i",   "o",   "u",   "ai",
                                                  "an", "ang", "ao",  "ei",  "en",  "eng",
                                                  "ia", "ie",  "in",  "ing", "iu",  "ong",
                                                  "ou", "ua",  "ui",  "un",  "uo",  "er"};
  std::vector<std::string> out;
  for (const auto& f : finals) {
    for (const auto& o : onsets) {
      out.push_back(o + f);
      if (static_cast<int>(out.size()) == count) return out;
    }
  }
  throw std::runtime_error("synthetic: syllable inventory exhausted");
}

QAExample make_example(const SyntheticConfig& cfg, const SyntheticWorld& world,
                       const std::string& id, RandomStream& rng) {
  QAExample example;
  example.id = id;

  // Distinct keys (hence distinct sounds) for this document.
  std::vector<std::string> keys = world.keys;
  rng.shuffle(keys);
  keys.resize(static_cast<std::size_t>(cfg.pairs_per_doc));

  // Values drawn without replacement within the document so every value
  // character occurs exactly once.
  std::vector<std::string> value_pool = world.values;
  rng.shuffle(value_pool);
  std::size_t next_value = 0;

  auto add_fillers = [&]() {
    const int gap = cfg.min_gap + static_cast<int>(rng.bounded(
                                      static_cast<std::uint64_t>(cfg.max_gap - cfg.min_gap + 1)));
    for (int g = 0; g < gap; ++g) {
      example.document.push_back(world.fillers[rng.bounded(world.fillers.size())]);
    }
  };

  const std::size_t target =
      static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(cfg.pairs_per_doc)));
  for (std::size_t p = 0; p < keys.size(); ++p) {
    add_fillers();
    example.document.push_back(keys[p]);
    const int value_len =
        cfg.min_value_len + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(
                                cfg.max_value_len - cfg.min_value_len + 1)));
    if (p == target) {
      example.answer_start = example.document.size();
      example.answer_end = example.answer_start + static_cast<std::size_t>(value_len) - 1;
    }
    for (int v = 0; v < value_len; ++v) {
      example.document.push_back(value_pool[next_value++]);
    }
  }
  add_fillers();

  example.answer_text =
      join_units(example.document, example.answer_start, example.answer_end + 1, UnitMode::kChar);
  example.question = {kQuestionMarker, keys[target]};
  return example;
}

}  // namespace

SyntheticWorld make_synthetic_world(const SyntheticConfig& cfg) {
  if (cfg.key_buckets + cfg.value_buckets > cfg.bucket_count || cfg.chars_per_bucket < 2) {
    throw std::runtime_error("synthetic: inconsistent bucket layout");
  }

  SyntheticWorld world;
  const std::vector<std::string> syllables = make_syllables(cfg.bucket_count + 1);

  std::string tsv = "# synthetic pronunciation lexicon\n";
  for (int b = 0; b < cfg.bucket_count; ++b) {
    for (int m = 0; m < cfg.chars_per_bucket; ++m) {
      // Tone digits exercise the stripping path; they carry no information.
      const int tone = (b * 7 + m) % 6;
      tsv += bucket_char(b, m, cfg.chars_per_bucket) + "\t" + syllables[b] +
             std::to_string(tone) + "\n";
    }
  }
  tsv += std::string(kQuestionMarker) + "\t" + syllables[cfg.bucket_count] + "\n";
  world.lexicon_tsv = std::move(tsv);

  for (int b = 0; b < cfg.key_buckets; ++b) {
    world.keys.push_back(bucket_char(b, 0, cfg.chars_per_bucket));
  }
  for (int b = cfg.key_buckets; b < cfg.key_buckets + cfg.value_buckets; ++b) {
    world.values.push_back(bucket_char(b, 0, cfg.chars_per_bucket));
    world.values.push_back(bucket_char(b, 1, cfg.chars_per_bucket));
  }
  for (int b = cfg.key_buckets + cfg.value_buckets; b < cfg.bucket_count; ++b) {
    for (int m = 0; m < cfg.chars_per_bucket; ++m) {
      world.fillers.push_back(bucket_char(b, m, cfg.chars_per_bucket));
    }
  }

  world.train.unit_mode = UnitMode::kChar;
  world.test.unit_mode = UnitMode::kChar;
  for (int i = 0; i < cfg.train_examples; ++i) {
    const std::string id = "train-" + std::to_string(i);
    RandomStream rng(RandomStream::derive(cfg.seed, "synthetic/" + id));
    world.train.examples.push_back(make_example(cfg, world, id, rng));
  }
  for (int i = 0; i < cfg.test_examples; ++i) {
    const std::string id = "test-" + std::to_string(i);
    RandomStream rng(RandomStream::derive(cfg.seed, "synthetic/" + id));
    world.test.examples.push_back(make_example(cfg, world, id, rng));
  }
  return world;
}

Dataset restrict_to_ids(const Dataset& dataset, const Dataset& subset) {
  std::unordered_set<std::string> wanted;
  for (const QAExample& example : subset.examples) wanted.insert(example.id);
  Dataset out;
  out.provenance = dataset.provenance;
  out.unit_mode = dataset.unit_mode;
  for (const QAExample& example : dataset.examples) {
    if (wanted.count(example.id)) out.examples.push_back(example);
  }
  return out;
}

}  // namespace pinyinqa::testing
