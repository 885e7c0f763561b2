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

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).
//
//   acceptance_test <data-dir> <viseme-decode binary>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "testing.h"
#include "v2w/artifact.h"
#include "v2w/chunker.h"
#include "v2w/decoder.h"
#include "v2w/external_scorer.h"
#include "v2w/metrics.h"
#include "v2w/pipeline.h"
#include "v2w/scorer.h"

using namespace v2w;
using v2w::testing::vs;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  [" << detail << "]" << std::endl;
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Data {
  std::string dir;
  Artifact artifact;
  std::string train;
  std::string ouluvs;
  std::string eval50;
};

// ---------------------------------------------------------------- chunker

void chunker_criteria() {
  std::mt19937_64 rng(20240601);
  std::size_t oracle_ok = 0, literal_ok = 0, segmentable = 0, total_segs = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 500; ++i) {
    const std::size_t alphabet = 2 + static_cast<std::size_t>(i % 4);
    auto t = v2w::testing::random_toy(rng, alphabet, 12, 4, 1 + static_cast<std::size_t>(i % 10));
    const auto seq = i % 2 ? t.seq : v2w::testing::random_covered_stream(rng, t, 6, 10);
    const auto segs = find_possible_chunks(t.index, seq);
    oracle_ok += segs == v2w::testing::brute_force_chunks(t.index, seq);
    literal_ok += segs == find_possible_chunks_literal(t.index, seq);
    segmentable += !segs.empty();
    total_segs += segs.size();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(oracle_ok == 500 && secs < 10.0, "chunker oracle equivalence",
         std::to_string(oracle_ok) + "/500 equal to cut-pattern enumeration, " + fmt("%.2f s", secs) + ", " +
             std::to_string(segmentable) + " segmentable, " + std::to_string(total_segs) + " segmentations");
  report(literal_ok == 500, "literal recursion fidelity", std::to_string(literal_ok) + "/500 lattice == literal recursion");
}

// ---------------------------------------------------------------- goldens

const std::vector<std::string> kWattt = {"REITS",  "REITZ",   "RIDES",    "RIGHT'S", "RIGHTS",   "RIGHTS'", "RITE'S",
                                         "RITES",  "RUST",    "RUTS",     "RUTTS",   "RUTZ",     "WHAT'S",  "WHATS",
                                         "WHITE'S", "WHITES", "WIDE'S",   "WISED",   "WRIGHT'S", "WRIGHTS", "WRITES"};
const std::vector<std::string> kAhpiy = {"ABEE", "IP"};
const std::vector<std::string> kTiyt = {
    "TIS",   "C'S",    "C.'S",   "C.S",   "CEASE", "CECE",   "CEDE",   "CEES",  "CID",   "CYD",    "D'S",
    "D.'S",  "D.S",    "DEAS",   "DEASE", "DEDE",  "DEE'S",  "DEED",   "DEES",  "DEESE", "DEET",   "DEIS",
    "DID",   "DIEDE",  "DIS",    "DISS",  "DITH",  "SAEZ",   "SCYTHE", "SEA'S", "SEAS",  "SEASE",  "SEAT",
    "SEED",  "SEES",   "SEESE",  "SEETHE", "SEIS", "SEITH",  "SEIZE",  "SID",   "SIES",  "SIESS",  "SIS",
    "SIT",   "SYD",    "T'S",    "T.'S",  "T.S",   "TEAS",   "TEASE",  "TEAT",  "TEED",  "TEES",   "TEET",
    "TEETH", "TEETHE", "TESE",   "THEDE", "THEE'S", "THESE", "THIEDE", "THIES", "THIS",  "THIS'",  "TIDD",
    "TIEDE", "TIS",    "TIT",    "Z'S",   "Z.'S",  "ZEESE",  "ZEIS"};
const std::vector<std::string> kAhpiyt = {"ABYSS", "AMID", "AMISS", "APIECE", "APPEASE", "EYEPIECE"};
const std::vector<std::string> kIyt = {"E'S", "E.'S", "E.S", "EADE", "EASE", "EAT", "EDE", "ID", "IHDE", "IS", "IT"};

std::string missing_from(const InverseIndex& index, const std::string& key, const std::vector<std::string>& words) {
  const auto* list = index.find(vs(key));
  if (!list) return "(" + key + ") absent";
  std::string missing;
  for (const auto& w : words) {
    if (std::find(list->begin(), list->end(), w) == list->end()) missing += " " + w;
  }
  return missing.empty() ? "" : "(" + key + ") lacks" + missing;
}

void golden_criteria(const Data& d) {
  const auto& a = d.artifact;
  const auto stream = sentence_to_visemes("what time is it", a.lexicon, a.map);
  const auto segs = find_possible_chunks(a.index, stream);
  const Segmentation first_split = {vs("w ah t t"), vs("ah p iy t"), vs("iy t")};
  const Segmentation second_split = {vs("w ah t t"), vs("ah p iy"), vs("t iy t")};
  const bool has_first = std::find(segs.begin(), segs.end(), first_split) != segs.end();
  const bool has_second = std::find(segs.begin(), segs.end(), second_split) != segs.end();

  // Word lists are keyed by the cluster their words actually spell.
  std::string problems;
  for (const auto& [key, words] : std::vector<std::pair<std::string, std::vector<std::string>>>{
           {"w ah t t", kWattt}, {"ah p iy", kAhpiy}, {"t iy t", kTiyt}, {"ah p iy t", kAhpiyt}, {"iy t", kIyt}}) {
    const auto m = missing_from(a.index, key, words);
    if (!m.empty()) problems += (problems.empty() ? "" : "; ") + m;
  }
  report(has_first && has_second && problems.empty(), "segmentation goldens",
         "stream '" + format_visemes(stream) + "', " + std::to_string(segs.size()) + " segmentations, first split " +
             (has_first ? "found" : "MISSING") + ", second split " + (has_second ? "found" : "MISSING") + ", word lists " +
             (problems.empty() ? "complete (" + std::to_string(a.index.find(vs("w ah t t"))->size()) +
                                     " words under w ah t t)"
                               : problems));
}

// ---------------------------------------------------------------- decoder

void beam_criteria() {
  std::mt19937_64 rng(777);
  int s1 = 0, s1_ok = 0, s2 = 0, s2_ok = 0, attempts = 0;
  std::size_t max_candidates = 0;
  while ((s1 < 100 || s2 < 100) && attempts < 100000) {
    ++attempts;
    auto t = v2w::testing::random_toy(rng, 4, 10, 3, 0, 4);
    v2w::testing::TableScorer scorer;
    const DecodeOptions wide{.beam_width = 200};
    if (s2 < 100) {
      const auto seq = v2w::testing::random_covered_stream(rng, t, 5, 9);
      const auto e = v2w::testing::exhaustive_scenario2(seq, t.index, scorer);
      if (e.candidates >= 2 && e.candidates <= 200) {
        ++s2;
        max_candidates = std::max(max_candidates, e.candidates);
        s2_ok += decode_scenario2(seq, t.index, scorer, wide).sentence == e.best;
      }
    }
    if (s1 < 100) {
      std::uniform_int_distribution<std::size_t> pick(0, t.entries.size() - 1), len(2, 5);
      std::vector<VisemeCluster> in;
      for (std::size_t i = len(rng); i > 0; --i) in.push_back(t.entries[pick(rng)].first);
      const auto e = v2w::testing::exhaustive_scenario1(in, t.index, scorer);
      if (e.candidates >= 2 && e.candidates <= 200) {
        ++s1;
        max_candidates = std::max(max_candidates, e.candidates);
        s1_ok += decode_scenario1(in, t.index, scorer, wide).sentence == e.best;
      }
    }
  }
  report(s1 == 100 && s2 == 100 && s1_ok == 100 && s2_ok == 100, "beam vs exhaustive",
         "scenario 1 " + std::to_string(s1_ok) + "/" + std::to_string(s1) + ", scenario 2 " + std::to_string(s2_ok) +
             "/" + std::to_string(s2) + ", B=200, up to " + std::to_string(max_candidates) + " candidates");
}

// ---------------------------------------------------------------- scorer

void perplexity_criteria(const Data& d, const std::string& sidecar) {
  double worst = 0.0;
  std::size_t cases = 0;
  for (int v : {2, 10, 100}) {
    v2w::testing::UniformScorer local(v);
    ExternalScorerConfig cfg;
    cfg.command = sidecar + " uniform " + std::to_string(v);
    ExternalScorer remote(cfg);
    for (std::size_t n = 1; n <= 20; ++n) {
      Sentence s;
      for (std::size_t i = 0; i < n; ++i) s.push_back("W" + std::to_string(i % 7));
      for (double p : {local.perplexity(s), remote.perplexity(s)}) {
        worst = std::max(worst, std::abs(p - v) / v);
        ++cases;
      }
    }
  }
  double worst_sum = 0.0;
  std::size_t contexts = 0;
  for (int order : {1, 2, 3}) {
    auto m = NgramModel::train(d.train + "\n" + d.ouluvs, order, 0.01);
    auto vocab = m.vocabulary();
    vocab.push_back("<unk>");
    for (const auto& c : m.observed_contexts()) {
      double sum = 0.0;
      for (const auto& w : vocab) sum += std::exp(m.log_prob(w, c));
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      ++contexts;
    }
  }
  report(worst <= 1e-9 && worst_sum <= 1e-9, "perplexity contract",
         std::to_string(cases) + " uniform cases (local and over the protocol), worst relative error " +
             fmt("%.3g", worst) + "; " + std::to_string(contexts) + " n-gram contexts, worst |sum-1| " +
             fmt("%.3g", worst_sum));
}

// ---------------------------------------------------------------- metrics

void metrics_criteria() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> len(0, 8), tok(0, 4);
  std::size_t agree = 0, pooled = 0, oracle_total = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<int> a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
    for (auto& x : a) x = tok(rng);
    for (auto& x : b) x = tok(rng);
    const auto c = edit_counts(a, b);
    const auto o = v2w::testing::naive_edit_distance(a, b);
    agree += c.edits() == o;
    pooled += c.edits();
    oracle_total += o;
  }
  const auto w = edit_counts(word_tokens("STICK TO WHAT YOU'RE GOOD AT"), word_tokens("STILL DO WHAT YOU'RE GOOD AT"));
  const double wer = error_rate(w);
  report(agree == 1000 && pooled == oracle_total && std::abs(wer - 2.0 / 6.0) < 1e-12, "metrics oracle",
         std::to_string(agree) + "/1000 pairs agree, pooled " + std::to_string(pooled) + " vs " +
             std::to_string(oracle_total) + "; sample pair WER " + fmt("%.6f", wer));
}

// ---------------------------------------------------------------- corpora

MetricsReport eval(const Data& d, const std::string& corpus, const std::shared_ptr<Scorer>& scorer, int scenario,
                   std::size_t beam) {
  EvalOptions o;
  o.scenario = scenario;
  o.decode.beam_width = beam;
  o.jobs = 4;
  return run_eval(d.artifact, read_references(corpus), [scorer] { return scorer; }, o);
}

std::string rates(const MetricsReport& r) {
  return "CER " + fmt("%.1f", r.cer) + " WER " + fmt("%.1f", r.wer) + " SAR " + fmt("%.1f", r.sar);
}

void ouluvs_criteria(const Data& d) {
  auto lm = std::make_shared<NgramModel>(NgramModel::train(d.train + "\n" + d.ouluvs));
  const auto r1 = eval(d, d.ouluvs, lm, 1, 50);
  const auto r2 = eval(d, d.ouluvs, lm, 2, 50);
  report(r1.scored == 10 && r1.sar == 100.0 && r1.cer == 0.0 && r1.wer == 0.0, "OuluVS scenario 1", rates(r1));
  report(r2.scored == 10 && r2.sar >= 80.0, "OuluVS scenario 2", rates(r2) + ", need SAR >= 80");
}

void corpus50_criteria(const Data& d) {
  // Held out: language model text without the evaluation sentences.
  std::set<std::string> eval_lines;
  for (const auto& l : read_references(d.eval50)) eval_lines.insert(l);
  std::string heldout;
  for (const auto& l : read_references(d.train)) {
    if (!eval_lines.count(l)) heldout += l + "\n";
  }
  const std::vector<std::pair<std::string, std::string>> setups = {{"held-out LM", heldout + d.ouluvs},
                                                                   {"in-domain LM", d.train + "\n" + d.ouluvs}};
  for (const auto& [label, text] : setups) {
    auto lm = std::make_shared<NgramModel>(NgramModel::train(text));
    const auto s1b10 = eval(d, d.eval50, lm, 1, 10), s1b50 = eval(d, d.eval50, lm, 1, 50);
    const auto s2b10 = eval(d, d.eval50, lm, 2, 10), s2b50 = eval(d, d.eval50, lm, 2, 50);
    const bool sizes = s1b50.scored == 50 && s2b50.scored == 50;
    report(sizes && s1b50.wer <= s2b50.wer, "50 sentences, scenario 1 WER <= scenario 2 WER (" + label + ")",
           "S1 " + rates(s1b50) + "; S2 " + rates(s2b50));
    report(sizes && s1b50.wer <= s1b10.wer && s2b50.wer <= s2b10.wer,
           "50 sentences, beam 10 -> 50 never worsens WER (" + label + ")",
           "S1 WER " + fmt("%.1f", s1b10.wer) + " -> " + fmt("%.1f", s1b50.wer) + "; S2 WER " + fmt("%.1f", s2b10.wer) +
               " -> " + fmt("%.1f", s2b50.wer));
  }
}

// ---------------------------------------------------------------- cli

std::pair<int, std::string> run(const std::string& cmd) {
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  return {::pclose(p), out};
}

void determinism_criteria(const Data& d, const std::string& cli) {
  const std::string cmd = cli + " eval --format records --scenario 2 --jobs 4 " + d.dir + "/corpus/eval50.txt";
  const auto a = run(cmd), b = run(cmd);
  const bool ok = a.first == 0 && b.first == 0 && !a.second.empty() && a.second == b.second;
  report(ok, "determinism", "two eval runs, " + std::to_string(a.second.size()) + " bytes, " +
                                (a.second == b.second ? "identical" : "DIFFERENT") + ", exit " +
                                std::to_string(a.first) + "/" + std::to_string(b.first));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: acceptance_test <data-dir> <viseme-decode> <mock-sidecar>\n";
    return 2;
  }
  Data d;
  d.dir = argv[1];
  const std::string cli = argv[2], sidecar = argv[3];
  try {
    d.artifact = build_artifact(read_text_file(d.dir + "/cmudict/cmudict.dict"),
                                read_text_file(d.dir + "/frequency_ranks.tsv"));
    d.train = read_text_file(d.dir + "/corpus/train.txt");
    d.ouluvs = read_text_file(d.dir + "/corpus/ouluvs.txt");
    d.eval50 = read_text_file(d.dir + "/corpus/eval50.txt");

    chunker_criteria();
    golden_criteria(d);
    beam_criteria();
    perplexity_criteria(d, sidecar);
    metrics_criteria();
    ouluvs_criteria(d);
    corpus50_criteria(d);
    determinism_criteria(d, cli);
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance run aborted  [" << e.what() << "]" << std::endl;
    return 1;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : "acceptance: all criteria met")
            << std::endl;
  return failures ? 1 : 0;
}
