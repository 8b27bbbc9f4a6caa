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
//
// Single command-line entry point wiring the toolkit into reproducible
// pipelines. All file artifacts are JSON with sorted keys and carry a
// provenance block {tool_version, subcommand, seed, input digests}, so a
// rerun with identical flags and seeds is byte-identical.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pinyinqa/corpus.hpp"
#include "pinyinqa/error.hpp"
#include "pinyinqa/lexicon.hpp"
#include "pinyinqa/metrics.hpp"
#include "pinyinqa/reader.hpp"
#include "pinyinqa/serialize.hpp"
#include "pinyinqa/text.hpp"
#include "pinyinqa/translator.hpp"
#include "pinyinqa/version.hpp"

namespace {

using json = nlohmann::json;
using namespace pinyinqa;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open input file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot open output file: " + path);
  }
  out << content;
  if (!out) {
    throw ParseError("failed while writing: " + path);
  }
}

std::string digest(const std::string& bytes) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buffer;
}

/// Provenance block for output artifacts. Inputs map role -> content digest.
class RunInfo {
 public:
  RunInfo(std::string subcommand, std::uint64_t seed)
      : subcommand_(std::move(subcommand)), seed_(seed) {}

  void add_input(const std::string& role, const std::string& content) {
    inputs_[role] = digest(content);
  }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  json to_json() const {
    return {{"tool_version", kToolVersion},
            {"subcommand", subcommand_},
            {"seed", seed_},
            {"inputs", inputs_}};
  }

 private:
  std::string subcommand_;
  std::uint64_t seed_ = 0;
  std::map<std::string, std::string> inputs_;
};

Lexicon load_lexicon_file(const std::string& path, RunInfo& prov) {
  const std::string content = read_file(path);
  prov.add_input("lexicon", content);
  return parse_lexicon(content);
}

Dataset load_dataset_file(const std::string& path, const std::string& role, RunInfo& prov) {
  const std::string content = read_file(path);
  prov.add_input(role, content);
  LoadReport report = load_squad_json(content);
  if (!report.rejected_ids.empty()) {
    std::cerr << path << ": rejected " << report.rejected_ids.size()
              << " span-inconsistent example(s):";
    for (const auto& id : report.rejected_ids) std::cerr << ' ' << id;
    std::cerr << '\n';
  }
  return std::move(report.dataset);
}

void write_dataset(const std::string& path, const Dataset& dataset, const RunInfo& prov) {
  json root = json::parse(to_squad_json(dataset));
  root["provenance"] = prov.to_json();
  write_file(path, root.dump(2) + "\n");
}

void write_report(const std::string& path, json body, const RunInfo& prov) {
  body["provenance"] = prov.to_json();
  write_file(path, body.dump(2) + "\n");
}

std::map<std::string, std::string> load_predictions_file(const std::string& path,
                                                         RunInfo& prov) {
  const std::string content = read_file(path);
  prov.add_input("predictions", content);
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("predictions JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ParseError("predictions JSON: expected an object mapping id -> answer");
  }
  std::map<std::string, std::string> predictions;
  for (const auto& [key, value] : root.items()) {
    if (key == "_provenance") continue;
    if (!value.is_string()) {
      throw ParseError("predictions JSON: value for id '" + key + "' is not a string");
    }
    predictions[key] = value.get<std::string>();
  }
  return predictions;
}

TrainConfig train_config_from_json(const json& node) {
  TrainConfig config;
  config.seed = node.value("seed", config.seed);
  config.learning_rate = node.value("learning_rate", config.learning_rate);
  config.batch_size = node.value("batch_size", config.batch_size);
  config.epochs = node.value("epochs", config.epochs);
  config.clip_norm = node.value("clip_norm", config.clip_norm);
  config.use_pinyin = node.value("use_pinyin", config.use_pinyin);
  config.max_span_len = node.value("max_span_len", config.max_span_len);
  config.lexical_dim = node.value("lexical_dim", config.lexical_dim);
  config.hidden_dim = node.value("hidden_dim", config.hidden_dim);
  config.pinyin_embed_dim = node.value("pinyin_embed_dim", config.pinyin_embed_dim);
  config.pinyin_filter_width = node.value("pinyin_filter_width", config.pinyin_filter_width);
  config.pinyin_filter_count = node.value("pinyin_filter_count", config.pinyin_filter_count);
  return config;
}

// The filter's whole point is repairing stale spans, so this loader skips the
// span-consistency rejection that load_squad_json applies.
Dataset load_dataset_lenient(const std::string& content) {
  json root = json::parse(content, nullptr, false);
  if (root.is_discarded()) throw ParseError("corpus JSON: parse error");
  Dataset dataset;
  if (root.contains("unit_mode")) {
    dataset.unit_mode = unit_mode_from_name(root.at("unit_mode").get<std::string>());
  }
  if (root.contains("provenance_tag")) {
    dataset.provenance = provenance_from_name(root.at("provenance_tag").get<std::string>());
  }
  for (const auto& article : root.at("data")) {
    for (const auto& paragraph : article.at("paragraphs")) {
      const auto doc =
          segment_units(paragraph.at("context").get<std::string>(), dataset.unit_mode);
      for (const auto& qa : paragraph.at("qas")) {
        QAExample example;
        example.id = qa.at("id").get<std::string>();
        example.question = segment_units(qa.at("question").get<std::string>(), dataset.unit_mode);
        example.document = doc;
        example.answer_text = qa.at("answers").at(0).at("text").get<std::string>();
        dataset.examples.push_back(std::move(example));
      }
    }
  }
  return dataset;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ASR-noise-robust extractive QA toolkit"};
  app.require_subcommand(1);
  std::function<void()> run;

  // decompose --lexicon L --text T
  {
    auto* cmd = app.add_subcommand("decompose", "Print the pinyin-token decomposition of a unit");
    auto lexicon_path = std::make_shared<std::string>();
    auto text = std::make_shared<std::string>();
    cmd->add_option("--lexicon", *lexicon_path, "pronunciation lexicon TSV")->required();
    cmd->add_option("--text", *text, "lexical unit to decompose")->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("decompose", 0);
        const Lexicon lex = load_lexicon_file(*lexicon_path, prov);
        const PinyinSequence seq = decompose(*text, lex);
        json tokens = json::array();
        for (std::int32_t id : seq.tokens) {
          tokens.push_back(lex.token_vocab()[static_cast<std::size_t>(id)]);
        }
        const json out = {{"text", *text}, {"tokens", tokens}, {"token_ids", seq.tokens}};
        std::cout << out.dump(2) << '\n';
      };
    });
  }

  // score --dataset D --predictions P --out R
  {
    auto* cmd = app.add_subcommand("score", "Character-level EM/F1 of predictions on a dataset");
    auto dataset_path = std::make_shared<std::string>();
    auto predictions_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--dataset", *dataset_path)->required();
    cmd->add_option("--predictions", *predictions_path)->required();
    cmd->add_option("--out", *out_path, "report JSON")->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("score", 0);
        const Dataset dataset = load_dataset_file(*dataset_path, "dataset", prov);
        const auto predictions = load_predictions_file(*predictions_path, prov);
        const EvalReport report = evaluate(predictions, dataset);
        write_report(*out_path, eval_report_to_json(report), prov);
        std::cout << "em " << report.em << " f1 " << report.f1 << " n " << report.n << '\n';
      };
    });
  }

  // wer --ref A --hyp B [--unit char|word]
  {
    auto* cmd = app.add_subcommand("wer", "Word error rate between two token files");
    auto ref_path = std::make_shared<std::string>();
    auto hyp_path = std::make_shared<std::string>();
    auto unit = std::make_shared<std::string>("char");
    cmd->add_option("--ref", *ref_path, "reference text file")->required();
    cmd->add_option("--hyp", *hyp_path, "hypothesis text file")->required();
    cmd->add_option("--unit", *unit)->check(CLI::IsMember({"char", "word"}));
    cmd->callback([=, &run] {
      run = [=] {
        const UnitMode mode = unit_mode_from_name(*unit);
        std::string ref = read_file(*ref_path);
        std::string hyp = read_file(*hyp_path);
        while (!ref.empty() && (ref.back() == '\n' || ref.back() == '\r')) ref.pop_back();
        while (!hyp.empty() && (hyp.back() == '\n' || hyp.back() == '\r')) hyp.pop_back();
        const double value = wer(segment_units(ref, mode), segment_units(hyp, mode));
        std::cout << json{{"wer", value}}.dump() << '\n';
      };
    });
  }

  // corrupt --in D --out D2 --lexicon L --p-sub x [--p-del y --p-ins z] --seed s
  {
    auto* cmd = app.add_subcommand("corrupt", "Apply the homophone noise channel to documents");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto lexicon_path = std::make_shared<std::string>();
    auto cfg = std::make_shared<ChannelConfig>();
    cmd->add_option("--in", *in_path)->required();
    cmd->add_option("--out", *out_path)->required();
    cmd->add_option("--lexicon", *lexicon_path)->required();
    cmd->add_option("--p-sub", cfg->p_sub, "substitution probability")->required();
    cmd->add_option("--p-del", cfg->p_del, "deletion probability");
    cmd->add_option("--p-ins", cfg->p_ins, "insertion probability");
    cmd->add_option("--seed", cfg->seed)->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("corrupt", cfg->seed);
        const Lexicon lex = load_lexicon_file(*lexicon_path, prov);
        const HomophoneIndex index = build_homophone_index(lex);
        const Dataset dataset = load_dataset_file(*in_path, "corpus", prov);
        const Dataset corrupted = corrupt(dataset, *cfg, index);
        write_dataset(*out_path, corrupted, prov);
        std::cout << "corrupted " << corrupted.size() << " example(s)\n";
      };
    });
  }

  // filter --in D --out D2
  {
    auto* cmd = app.add_subcommand("filter", "Drop examples whose answer no longer occurs");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--in", *in_path)->required();
    cmd->add_option("--out", *out_path)->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("filter", 0);
        const std::string content = read_file(*in_path);
        prov.add_input("corpus", content);
        const FilterReport report = filter_answerable(load_dataset_lenient(content));
        write_dataset(*out_path, report.dataset, prov);
        std::cout << "kept " << report.kept << " dropped " << report.dropped << '\n';
      };
    });
  }

  // backtranslate --in D --out D2 --client mock|http --synonyms F --seed s
  {
    auto* cmd = app.add_subcommand("backtranslate", "Round-trip documents through a translator");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto client_kind = std::make_shared<std::string>("mock");
    auto synonyms_path = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    cmd->add_option("--in", *in_path)->required();
    cmd->add_option("--out", *out_path)->required();
    cmd->add_option("--client", *client_kind)->check(CLI::IsMember({"mock", "http"}));
    cmd->add_option("--synonyms", *synonyms_path, "synonym table for the mock client");
    cmd->add_option("--seed", *seed)->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("backtranslate", *seed);
        const Dataset dataset = load_dataset_file(*in_path, "corpus", prov);
        std::unique_ptr<TranslatorClient> client;
        if (*client_kind == "http") {
          client = std::make_unique<HttpTranslator>(HttpTranslator::from_env());
        } else {
          std::string table = "{}";
          if (!synonyms_path->empty()) {
            table = read_file(*synonyms_path);
            prov.add_input("synonyms", table);
          }
          client = std::make_unique<MockParaphraser>(MockParaphraser::from_json(table, *seed));
        }
        const BacktransReport report = backtranslate(dataset, *client);
        write_dataset(*out_path, report.dataset, prov);
        std::cout << "kept " << report.kept << " dropped " << report.dropped << " failures "
                  << report.client_failures << '\n';
      };
    });
  }

  // merge --in D1,D2,... --out D
  {
    auto* cmd = app.add_subcommand("merge", "Concatenate datasets with tag-prefixed ids");
    auto in_paths = std::make_shared<std::vector<std::string>>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--in", *in_paths, "comma-separated corpus files")->required()->delimiter(',');
    cmd->add_option("--out", *out_path)->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("merge", 0);
        std::vector<Dataset> sources;
        for (std::size_t i = 0; i < in_paths->size(); ++i) {
          sources.push_back(
              load_dataset_file((*in_paths)[i], "corpus[" + std::to_string(i) + "]", prov));
        }
        const Dataset merged = merge(sources);
        write_dataset(*out_path, merged, prov);
        std::cout << "merged " << merged.size() << " example(s)\n";
      };
    });
  }

  // stats --in D [--ref D0] --out R
  {
    auto* cmd = app.add_subcommand("stats", "Corpus statistics and optional WER vs a reference");
    auto in_path = std::make_shared<std::string>();
    auto ref_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--in", *in_path)->required();
    cmd->add_option("--ref", *ref_path, "reference corpus for WER");
    cmd->add_option("--out", *out_path)->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("stats", 0);
        const Dataset dataset = load_dataset_file(*in_path, "corpus", prov);
        CorpusStats stats;
        if (!ref_path->empty()) {
          const Dataset reference = load_dataset_file(*ref_path, "reference", prov);
          stats = corpus_stats(dataset, &reference);
        } else {
          stats = corpus_stats(dataset);
        }
        write_report(*out_path, corpus_stats_to_json(stats), prov);
        std::cout << "qa_pairs " << stats.qa_pairs << '\n';
      };
    });
  }

  // train --in D --lexicon L --config C --out CKPT [--no-pinyin]
  {
    auto* cmd = app.add_subcommand("train", "Train the span reader");
    auto in_path = std::make_shared<std::string>();
    auto lexicon_path = std::make_shared<std::string>();
    auto config_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto no_pinyin = std::make_shared<bool>(false);
    cmd->add_option("--in", *in_path)->required();
    cmd->add_option("--lexicon", *lexicon_path)->required();
    cmd->add_option("--config", *config_path, "flat JSON mirroring the training options")
        ->required();
    cmd->add_option("--out", *out_path, "checkpoint JSON")->required();
    cmd->add_flag("--no-pinyin", *no_pinyin, "ablation: lexical embeddings only");
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("train", 0);
        const std::string config_text = read_file(*config_path);
        prov.add_input("config", config_text);
        json config_json;
        try {
          config_json = json::parse(config_text);
        } catch (const json::parse_error& e) {
          throw ParseError(std::string("train config: ") + e.what());
        }
        TrainConfig config = train_config_from_json(config_json);
        if (*no_pinyin) config.use_pinyin = false;  // flags override file values
        prov.set_seed(config.seed);

        const Lexicon lex = load_lexicon_file(*lexicon_path, prov);
        const Dataset dataset = load_dataset_file(*in_path, "corpus", prov);
        const TrainResult result = train(dataset, config, lex);

        write_report(*out_path, checkpoint_to_json(result.params), prov);

        std::string log_lines = json{{"provenance", prov.to_json()}}.dump() + "\n";
        for (const EpochLog& entry : result.log) {
          log_lines += json{{"epoch", entry.epoch},
                            {"mean_loss", entry.mean_loss},
                            {"seconds", entry.seconds}}
                           .dump() +
                       "\n";
        }
        write_file(*out_path + ".train.log", log_lines);
        std::cout << "trained " << config.epochs << " epoch(s) on " << dataset.size()
                  << " example(s)\n";
      };
    });
  }

  // predict --in D --ckpt CKPT --lexicon L --out P
  {
    auto* cmd = app.add_subcommand("predict", "Decode answer spans with a trained reader");
    auto in_path = std::make_shared<std::string>();
    auto ckpt_path = std::make_shared<std::string>();
    auto lexicon_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--in", *in_path)->required();
    cmd->add_option("--ckpt", *ckpt_path)->required();
    cmd->add_option("--lexicon", *lexicon_path)->required();
    cmd->add_option("--out", *out_path, "predictions JSON")->required();
    cmd->callback([=, &run] {
      run = [=] {
        RunInfo prov("predict", 0);
        const std::string ckpt_text = read_file(*ckpt_path);
        prov.add_input("checkpoint", ckpt_text);
        json ckpt;
        try {
          ckpt = json::parse(ckpt_text);
        } catch (const json::parse_error& e) {
          throw ParseError(std::string("checkpoint: ") + e.what());
        }
        const ReaderParams params = checkpoint_from_json(ckpt);
        const Lexicon lex = load_lexicon_file(*lexicon_path, prov);
        const Dataset dataset = load_dataset_file(*in_path, "corpus", prov);

        json out = json::object();
        for (const auto& [id, answer] : predict(dataset, params, lex)) {
          out[id] = answer;
        }
        out["_provenance"] = prov.to_json();
        write_file(*out_path, out.dump(2) + "\n");
        std::cout << "predicted " << dataset.size() << " example(s)\n";
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
