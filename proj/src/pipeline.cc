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

#include "v2w/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "v2w/error.h"
#include "v2w/lexicon.h"

namespace v2w {
namespace {

SentenceRow eval_row(std::size_t id, const std::string& line, const Artifact& artifact, Scorer& scorer,
                     const EvalOptions& options) {
  SentenceRow row;
  row.id = id;
  const Sentence ref_words = normalize_sentence(line);
  row.reference = join_words(ref_words);

  std::vector<VisemeCluster> clusters;
  try {
    if (ref_words.empty()) throw ContractError("empty reference");
    clusters = sentence_to_clusters(row.reference, artifact.lexicon, artifact.map);
  } catch (const Error& e) {
    row.status = RowStatus::kSkipped;
    row.error = e.what();
    return row;
  }
  VisemeSequence stream;
  for (const auto& c : clusters) stream.insert(stream.end(), c.begin(), c.end());

  row.reference_perplexity = scorer.perplexity(ref_words);

  VisemeSequence hyp_stream;
  try {
    DecodeResult result = options.scenario == 1
                              ? decode_scenario1(clusters, artifact.index, scorer, options.decode)
                              : decode_scenario2(stream, artifact.index, scorer, options.decode);
    row.hypothesis = join_words(result.sentence);
    row.hypothesis_perplexity = result.perplexity;
    // Decoded words always spell out the input clusters exactly.
    hyp_stream = stream;
  } catch (const TransportError&) {
    throw;
  } catch (const Error& e) {
    row.status = RowStatus::kFailed;
    row.error = e.what();
  }

  row.words = edit_counts(ref_words, normalize_sentence(row.hypothesis));
  row.chars = edit_counts(char_tokens(row.reference, options.cer_spaces),
                          char_tokens(row.hypothesis, options.cer_spaces));
  row.visemes = edit_counts(stream, hyp_stream);
  row.sar = row.status == RowStatus::kOk ? sar(row.reference, row.hypothesis) : 0;
  return row;
}

}  // namespace

std::vector<std::string> read_references(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back(std::move(line));
    pos = nl + 1;
  }
  return out;
}

MetricsReport run_eval(const Artifact& artifact, const std::vector<std::string>& references,
                       const ScorerFactory& factory, const EvalOptions& options) {
  if (options.scenario != 1 && options.scenario != 2) throw ContractError("scenario must be 1 or 2");
  if (references.empty()) throw ContractError("no reference sentences");

  std::vector<SentenceRow> rows(references.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    try {
      auto scorer = factory();
      while (!stop.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= references.size()) break;
        rows[i] = eval_row(i + 1, references[i], artifact, *scorer, options);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, references.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(std::move(rows));
}

}  // namespace v2w
