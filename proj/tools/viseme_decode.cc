// Copyright 2026 The v2w Authors
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

// viseme-decode: build lexicon artifacts, convert text to visemes, segment
// viseme streams, decode them to sentences and score corpora.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "v2w/artifact.h"
#include "v2w/chunker.h"
#include "v2w/decoder.h"
#include "v2w/error.h"
#include "v2w/external_scorer.h"
#include "v2w/lexicon.h"
#include "v2w/metrics.h"
#include "v2w/pipeline.h"
#include "v2w/scorer.h"

#ifndef V2W_DEFAULT_DATA_DIR
#define V2W_DEFAULT_DATA_DIR "data"
#endif

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

struct Settings {
  std::string data_dir = V2W_DEFAULT_DATA_DIR;
  std::string dict;
  std::string freq;
  std::string viseme_map;
  std::string index;
  int scenario = 1;
  std::size_t beam = 50;
  std::string scorer = "ngram";
  std::string external_cmd;
  double external_timeout = 120.0;
  std::size_t external_batch = 256;
  std::string lm;
  std::vector<std::string> lm_corpus;
  int order = 3;
  double k = 0.01;
  std::size_t max_segmentations = 10000;
  std::size_t max_length = 128;
  std::size_t jobs = 1;
  std::string format = "table";
  bool eager_single_word = false;
  bool literal_recursion = false;
  bool no_char_spaces = false;
  bool no_frequency = false;
};

std::string error_kind(const v2w::Error& e) {
  if (dynamic_cast<const v2w::OutOfVocabularyError*>(&e)) return "OutOfVocabulary";
  if (dynamic_cast<const v2w::NoSegmentationError*>(&e)) return "NoSegmentation";
  if (dynamic_cast<const v2w::EmptyClusterError*>(&e)) return "EmptyCluster";
  if (dynamic_cast<const v2w::CapExceededError*>(&e)) return "CapExceeded";
  if (dynamic_cast<const v2w::UnknownVisemeError*>(&e)) return "UnknownViseme";
  if (dynamic_cast<const v2w::UnknownPhonemeError*>(&e)) return "UnknownPhoneme";
  if (dynamic_cast<const v2w::ParseError*>(&e)) return "Parse";
  if (dynamic_cast<const v2w::ContractError*>(&e)) return "Contract";
  return "Error";
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return v2w::read_text_file(path);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; }

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw v2w::Error("cannot write " + path);
  out << text;
  if (!out) throw v2w::Error("failed writing " + path);
}

class App {
 public:
  explicit App(Settings s) : s_(std::move(s)) {
    if (s_.dict.empty()) s_.dict = s_.data_dir + "/cmudict/cmudict.dict";
    if (s_.freq.empty() && !s_.no_frequency) s_.freq = s_.data_dir + "/frequency_ranks.tsv";
  }

  const v2w::Artifact& artifact() {
    if (!artifact_) {
      if (!s_.index.empty()) {
        artifact_ = std::make_unique<v2w::Artifact>(v2w::parse_artifact(v2w::read_text_file(s_.index), s_.index));
      } else {
        artifact_ = std::make_unique<v2w::Artifact>(build());
      }
    }
    return *artifact_;
  }

  v2w::Artifact build() {
    const std::string dict = v2w::read_text_file(s_.dict);
    std::optional<std::string> freq, vmap;
    if (!s_.freq.empty()) freq = v2w::read_text_file(s_.freq);
    if (!s_.viseme_map.empty()) vmap = v2w::read_text_file(s_.viseme_map);
    return v2w::build_artifact(dict, freq ? std::optional<std::string_view>(*freq) : std::nullopt,
                               vmap ? std::optional<std::string_view>(*vmap) : std::nullopt);
  }

  v2w::NgramModel train_model() {
    std::vector<std::string> paths = s_.lm_corpus;
    if (paths.empty()) paths = {s_.data_dir + "/corpus/train.txt", s_.data_dir + "/corpus/ouluvs.txt"};
    std::string corpus;
    for (const auto& p : paths) {
      corpus += v2w::read_text_file(p);
      corpus += '\n';
    }
    return v2w::NgramModel::train(corpus, s_.order, s_.k);
  }

  v2w::ScorerFactory scorer_factory() {
    if (s_.scorer == "external") {
      if (s_.external_cmd.empty()) throw v2w::ContractError("--scorer external needs --external-cmd");
      v2w::ExternalScorerConfig cfg = external_config();
      return [cfg] { return std::make_shared<v2w::ExternalScorer>(cfg); };
    }
    std::shared_ptr<v2w::Scorer> model;
    if (!s_.lm.empty()) {
      model = std::make_shared<v2w::NgramModel>(v2w::NgramModel::parse(v2w::read_text_file(s_.lm), s_.lm));
    } else {
      model = std::make_shared<v2w::NgramModel>(train_model());
    }
    return [model] { return model; };
  }

  v2w::ExternalScorerConfig external_config() const {
    v2w::ExternalScorerConfig cfg;
    cfg.command = s_.external_cmd;
    cfg.timeout = std::chrono::milliseconds(static_cast<long long>(s_.external_timeout * 1000.0));
    cfg.max_batch = s_.external_batch;
    return cfg;
  }

  v2w::DecodeOptions decode_options() const {
    v2w::DecodeOptions o;
    o.beam_width = s_.beam;
    o.limits.max_segmentations = s_.max_segmentations;
    o.limits.max_sequence_length = s_.max_length;
    o.eager_single_word = s_.eager_single_word;
    return o;
  }

  bool records() const { return s_.format == "records"; }
  const Settings& settings() const { return s_; }

 private:
  Settings s_;
  std::unique_ptr<v2w::Artifact> artifact_;
};

int cmd_build(App& app, const std::string& output) {
  const v2w::Artifact a = app.build();
  write_output(output, v2w::serialize_artifact(a));
  std::cerr << "entries " << a.lexicon.size() << "\nkeys " << a.index.size() << "\nignored-ranks "
            << a.ignored_ranks << "\n";
  return kExitOk;
}

int cmd_to_visemes(App& app, const std::string& input) {
  const auto& a = app.artifact();
  int rc = kExitOk;
  std::size_t n = 0;
  for (const auto& line : split_lines(read_input(input))) {
    ++n;
    if (blank(line)) {
      std::cout << (app.records() ? json{{"line", n}, {"clusters", json::array()}}.dump() : "") << "\n";
      continue;
    }
    try {
      const auto clusters = v2w::sentence_to_clusters(line, a.lexicon, a.map);
      if (app.records()) {
        json j = {{"line", n}, {"text", line}, {"clusters", json::array()}};
        for (const auto& c : clusters) j["clusters"].push_back(v2w::format_visemes(c));
        std::cout << j.dump() << "\n";
        continue;
      }
      std::string out;
      for (const auto& c : clusters) {
        if (!out.empty()) out += app.settings().scenario == 1 ? " | " : " ";
        out += v2w::format_visemes(c);
      }
      std::cout << out << "\n";
    } catch (const v2w::Error& e) {
      rc = kExitPartial;
      if (app.records()) {
        std::cout << json{{"line", n}, {"text", line}, {"error", e.what()}, {"kind", error_kind(e)}}.dump() << "\n";
      } else {
        std::cout << "ERROR\t" << error_kind(e) << "\t" << e.what() << "\n";
      }
    }
  }
  return rc;
}

std::string strip_bars(std::string s) {
  for (auto& c : s) {
    if (c == '|') c = ' ';
  }
  return s;
}

std::vector<v2w::VisemeCluster> parse_clusters(const std::string& line) {
  std::vector<v2w::VisemeCluster> out;
  std::size_t pos = 0;
  for (;;) {
    const auto bar = line.find('|', pos);
    out.push_back(v2w::parse_visemes(line.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos)));
    if (bar == std::string::npos) break;
    pos = bar + 1;
  }
  return out;
}

int cmd_chunk(App& app, const std::string& input) {
  const auto& a = app.artifact();
  const auto opts = app.decode_options();
  int rc = kExitOk;
  std::size_t n = 0;
  for (const auto& line : split_lines(read_input(input))) {
    ++n;
    if (blank(line)) continue;
    try {
      const auto seq = v2w::parse_visemes(strip_bars(line));
      auto segs = app.settings().literal_recursion ? v2w::find_possible_chunks_literal(a.index, seq, opts.limits)
                                                   : v2w::find_possible_chunks(a.index, seq, opts.limits);
      if (app.records()) {
        json j = {{"line", n}, {"input", line}, {"count", segs.size()}, {"segmentations", json::array()}};
        for (const auto& seg : segs) {
          json row = json::array();
          for (const auto& c : seg) row.push_back(v2w::format_visemes(c));
          j["segmentations"].push_back(row);
        }
        std::cout << j.dump() << "\n";
        continue;
      }
      std::cout << "# " << line << " (" << segs.size() << ")\n";
      for (const auto& seg : segs) {
        std::string out;
        for (const auto& c : seg) {
          if (!out.empty()) out += " | ";
          out += v2w::format_visemes(c);
        }
        std::cout << out << "\n";
      }
    } catch (const v2w::Error& e) {
      rc = kExitPartial;
      if (app.records()) {
        std::cout << json{{"line", n}, {"input", line}, {"error", e.what()}, {"kind", error_kind(e)}}.dump() << "\n";
      } else {
        std::cout << "# " << line << "\nERROR\t" << error_kind(e) << "\t" << e.what() << "\n";
      }
    }
  }
  return rc;
}

int cmd_decode(App& app, const std::string& input, std::size_t alternates) {
  const auto& a = app.artifact();
  auto scorer = app.scorer_factory()();
  const auto opts = app.decode_options();
  const int scenario = app.settings().scenario;
  int rc = kExitOk;
  std::size_t n = 0;
  for (const auto& line : split_lines(read_input(input))) {
    ++n;
    if (blank(line)) {
      std::cout << (app.records() ? json{{"line", n}, {"sentence", nullptr}}.dump() : "") << "\n";
      continue;
    }
    try {
      v2w::DecodeResult r;
      if (scenario == 1) {
        r = v2w::decode_scenario1(parse_clusters(line), a.index, *scorer, opts);
      } else {
        const auto seq = v2w::parse_visemes(strip_bars(line));
        r = v2w::decode_scenario2(seq, a.index, *scorer, opts);
      }
      if (app.records()) {
        json j = {{"line", n},
                  {"input", line},
                  {"sentence", v2w::join_words(r.sentence)},
                  {"perplexity", r.perplexity},
                  {"alternates", json::array()}};
        for (std::size_t i = 0; i < r.alternates.size() && i < alternates; ++i) {
          j["alternates"].push_back(
              {{"sentence", v2w::join_words(r.alternates[i].words)}, {"perplexity", r.alternates[i].perplexity}});
        }
        std::cout << j.dump() << "\n";
      } else {
        char ppl[32];
        std::snprintf(ppl, sizeof ppl, "%.4f", r.perplexity);
        std::cout << v2w::join_words(r.sentence) << "\t" << ppl << "\n";
      }
    } catch (const v2w::TransportError&) {
      throw;
    } catch (const v2w::Error& e) {
      rc = kExitPartial;
      if (app.records()) {
        std::cout << json{{"line", n}, {"input", line}, {"error", e.what()}, {"kind", error_kind(e)}}.dump() << "\n";
      } else {
        std::cout << "ERROR\t" << error_kind(e) << "\t" << e.what() << "\n";
      }
    }
  }
  return rc;
}

int cmd_eval(App& app, const std::string& corpus, const std::string& dataset) {
  const auto refs = v2w::read_references(read_input(corpus));
  v2w::EvalOptions opts;
  opts.scenario = app.settings().scenario;
  opts.decode = app.decode_options();
  opts.cer_spaces = !app.settings().no_char_spaces;
  opts.jobs = app.settings().jobs;
  const auto report = v2w::run_eval(app.artifact(), refs, app.scorer_factory(), opts);
  std::cout << (app.records() ? v2w::format_records(report, dataset, opts.scenario)
                              : v2w::format_table(report, dataset, opts.scenario));
  return report.skipped || report.failed ? kExitPartial : kExitOk;
}

int cmd_scorer_train(App& app, const std::string& output) {
  const auto model = app.train_model();
  write_output(output, model.serialize());
  std::cerr << "vocabulary " << model.vocab_size() << "\n";
  return kExitOk;
}

int cmd_scorer_check(App& app) {
  if (app.settings().external_cmd.empty()) throw v2w::ContractError("scorer check needs --external-cmd");
  bool all = true;
  for (const auto& c : v2w::check_protocol(app.external_config())) {
    all = all && c.passed;
    std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  " << c.detail << "\n";
  }
  return all ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Decode viseme streams into English sentences."};
  cli.fallthrough();
  cli.require_subcommand(1);
  cli.set_config("--config", "", "TOML/INI configuration file", false)->envname("VISEME_DECODE_CONFIG");

  Settings s;
  auto env = [](const char* name) { return std::string("VISEME_DECODE_") + name; };
  cli.add_option("--data-dir", s.data_dir, "Directory holding the bundled data")->envname(env("DATA_DIR"))->capture_default_str();
  cli.add_option("--dict", s.dict, "Pronouncing dictionary (default: bundled CMU dictionary)")->envname(env("DICT"));
  cli.add_option("--freq", s.freq, "Word frequency ranks, 'rank<TAB>WORD' per line")->envname(env("FREQ"));
  cli.add_flag("--no-freq", s.no_frequency, "Ignore frequency ranks; ties fall back to spelling order")->envname(env("NO_FREQ"));
  cli.add_option("--viseme-map", s.viseme_map, "Phoneme-to-viseme table overriding the built-in one")->envname(env("VISEME_MAP"));
  cli.add_option("--index", s.index, "Prebuilt artifact from 'build'")->envname(env("INDEX"));
  cli.add_option("--scenario", s.scenario, "1: word boundaries known, 2: flat stream")
      ->check(CLI::IsMember({1, 2}))->envname(env("SCENARIO"))->capture_default_str();
  cli.add_option("--beam", s.beam, "Beam width")->check(CLI::PositiveNumber)->envname(env("BEAM"))->capture_default_str();
  cli.add_option("--scorer", s.scorer, "Sentence scorer")
      ->check(CLI::IsMember({"ngram", "external"}))->envname(env("SCORER"))->capture_default_str();
  cli.add_option("--external-cmd", s.external_cmd, "Shell command starting the external scorer")->envname(env("EXTERNAL_CMD"));
  cli.add_option("--external-timeout", s.external_timeout, "Seconds to wait for each scorer reply")
      ->check(CLI::PositiveNumber)->envname(env("EXTERNAL_TIMEOUT"))->capture_default_str();
  cli.add_option("--external-batch", s.external_batch, "Largest batch sent in one request")
      ->check(CLI::PositiveNumber)->envname(env("EXTERNAL_BATCH"))->capture_default_str();
  cli.add_option("--lm", s.lm, "Serialized n-gram model from 'scorer train'")->envname(env("LM"));
  cli.add_option("--lm-corpus", s.lm_corpus, "Training text for the n-gram model (repeatable)")->envname(env("LM_CORPUS"));
  cli.add_option("--order", s.order, "n-gram order")->check(CLI::Range(1, 10))->envname(env("ORDER"))->capture_default_str();
  cli.add_option("--k", s.k, "Add-k smoothing constant")->check(CLI::PositiveNumber)->envname(env("K"))->capture_default_str();
  cli.add_option("--max-segmentations", s.max_segmentations, "Cap on enumerated segmentations")
      ->check(CLI::PositiveNumber)->envname(env("MAX_SEGMENTATIONS"))->capture_default_str();
  cli.add_option("--max-length", s.max_length, "Longest accepted viseme stream")
      ->check(CLI::PositiveNumber)->envname(env("MAX_LENGTH"))->capture_default_str();
  cli.add_option("--jobs", s.jobs, "Rows decoded in parallel by 'eval'")
      ->check(CLI::PositiveNumber)->envname(env("JOBS"))->capture_default_str();
  cli.add_option("--format", s.format, "Output format")
      ->check(CLI::IsMember({"table", "records"}))->envname(env("FORMAT"))->capture_default_str();
  cli.add_flag("--eager-single-word,--literal-fig8", s.eager_single_word, "Scenario 2: take the single-word reading whenever one exists")
      ->envname(env("EAGER_SINGLE_WORD"));
  cli.add_flag("--literal-recursion", s.literal_recursion, "chunk: use the direct recursive enumeration")
      ->envname(env("LITERAL_RECURSION"));
  cli.add_flag("--no-char-spaces", s.no_char_spaces, "eval: leave spaces out of the character error rate")
      ->envname(env("NO_CHAR_SPACES"));
  bool print_config = false;
  cli.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

  std::string output, input = "-", corpus, dataset = "corpus";
  std::size_t alternates = 5;

  auto* build = cli.add_subcommand("build", "Build the lexicon and inverse index artifact");
  build->add_option("-o,--output", output, "Artifact path (default: stdout)");
  auto* to_vis = cli.add_subcommand("to-visemes", "Convert sentences to viseme clusters");
  to_vis->add_option("input", input, "Text lines (default: stdin)");
  auto* chunk = cli.add_subcommand("chunk", "List every segmentation of viseme streams");
  chunk->add_option("input", input, "Viseme lines (default: stdin)");
  auto* decode = cli.add_subcommand("decode", "Decode viseme lines to sentences");
  decode->add_option("input", input, "Viseme lines; clusters separated by '|' in scenario 1 (default: stdin)");
  decode->add_option("--alternates", alternates, "Alternates listed per record")->capture_default_str();
  auto* eval = cli.add_subcommand("eval", "Decode a reference corpus and report error rates");
  eval->add_option("corpus", corpus, "One reference sentence per line")->required();
  eval->add_option("--dataset", dataset, "Dataset label in the report")->capture_default_str();
  auto* scorer = cli.add_subcommand("scorer", "Language model utilities");
  scorer->require_subcommand(1);
  auto* train = scorer->add_subcommand("train", "Train and serialize the n-gram model");
  train->add_option("-o,--output", output, "Model path (default: stdout)");
  auto* check = scorer->add_subcommand("check", "Run protocol conformance checks against --external-cmd");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kExitFatal;
  }

  if (print_config) {
    std::cout << cli.config_to_str(true, false);
    return kExitOk;
  }

  try {
    App app(s);
    if (build->parsed()) return cmd_build(app, output);
    if (to_vis->parsed()) return cmd_to_visemes(app, input);
    if (chunk->parsed()) return cmd_chunk(app, input);
    if (decode->parsed()) return cmd_decode(app, input, alternates);
    if (eval->parsed()) return cmd_eval(app, corpus, dataset);
    if (train->parsed()) return cmd_scorer_train(app, output);
    if (check->parsed()) return cmd_scorer_check(app);
  } catch (const v2w::ParseError& e) {
    std::cerr << "viseme-decode: " << e.what() << "\n";
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "viseme-decode: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
