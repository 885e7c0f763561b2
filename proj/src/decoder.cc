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

#include "v2w/decoder.h"

#include <algorithm>
#include <iterator>
#include <set>
#include <tuple>
#include <utility>

#include "v2w/error.h"

namespace v2w {
namespace {

void score_all(std::vector<Hypothesis>& hyps, Scorer& scorer, DecodeStats& stats) {
  if (hyps.empty()) return;
  std::vector<Sentence> sentences;
  sentences.reserve(hyps.size());
  for (const auto& h : hyps) sentences.push_back(h.words);
  auto ppl = scorer.batch_perplexity(sentences);
  if (ppl.size() != hyps.size()) throw ContractError("scorer returned a batch of the wrong size");
  for (std::size_t i = 0; i < hyps.size(); ++i) hyps[i].perplexity = ppl[i];
  stats.hypotheses_scored += hyps.size();
}

DecodeResult finish(const Beam& beam, DecodeStats stats) {
  DecodeResult r;
  const auto& best = beam.members().front();
  r.sentence = best.words;
  r.perplexity = best.perplexity;
  r.alternates.assign(beam.members().begin() + 1, beam.members().end());
  r.stats = stats;
  return r;
}

DecodeResult single_word(const std::string& word, Scorer& scorer, DecodeStats stats) {
  DecodeResult r;
  r.sentence = {word};
  r.perplexity = scorer.perplexity(r.sentence);
  stats.hypotheses_scored += 1;
  stats.single_word_rule = true;
  r.stats = stats;
  return r;
}

void check_width(const DecodeOptions& options) {
  if (options.beam_width == 0) throw ContractError("beam width must be at least 1");
}

}  // namespace

bool ranks_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.perplexity != b.perplexity) return a.perplexity < b.perplexity;
  if (a.words.size() != b.words.size()) return a.words.size() < b.words.size();
  if (a.words != b.words) return a.words < b.words;
  return a.cursor < b.cursor;
}

Beam::Beam(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ContractError("beam capacity must be at least 1");
}

void Beam::merge(std::vector<Hypothesis> candidates) {
  members_.insert(members_.end(), std::make_move_iterator(candidates.begin()),
                  std::make_move_iterator(candidates.end()));
  std::sort(members_.begin(), members_.end(), ranks_before);
  // Keep the best-ranked copy of each (words, cursor).
  std::vector<Hypothesis> kept;
  kept.reserve(std::min(members_.size(), capacity_));
  std::set<std::pair<Sentence, std::size_t>> seen;
  for (auto& h : members_) {
    if (kept.size() == capacity_) break;
    if (!seen.emplace(h.words, h.cursor).second) continue;
    kept.push_back(std::move(h));
  }
  members_ = std::move(kept);
}

bool Beam::all_complete() const {
  return std::all_of(members_.begin(), members_.end(), [](const Hypothesis& h) { return h.complete; });
}

Beam extend_and_prune(const Beam& beam, std::span<const std::vector<Extension>> continuations,
                      Scorer& scorer, std::size_t width, DecodeStats* stats) {
  if (beam.empty()) throw ContractError("extend_and_prune needs a nonempty beam");
  if (continuations.size() != beam.size()) {
    throw ContractError("one continuation list per beam member is required");
  }
  DecodeStats local;
  DecodeStats& st = stats ? *stats : local;

  std::vector<Hypothesis> carried, fresh;
  for (std::size_t i = 0; i < beam.size(); ++i) {
    const auto& h = beam.members()[i];
    if (h.complete) {
      carried.push_back(h);
      continue;
    }
    for (const auto& ext : continuations[i]) {
      Hypothesis next;
      next.words = h.words;
      next.words.push_back(ext.word);
      next.cursor = ext.cursor;
      next.complete = ext.complete;
      fresh.push_back(std::move(next));
    }
  }
  score_all(fresh, scorer, st);
  ++st.iterations;

  Beam out(width);
  carried.insert(carried.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
  out.merge(std::move(carried));
  return out;
}

DecodeResult decode_scenario1(std::span<const VisemeCluster> input, const InverseIndex& index,
                              Scorer& scorer, const DecodeOptions& options) {
  check_width(options);
  std::vector<const std::vector<std::string>*> words;
  for (const auto& raw : input) {
    VisemeCluster c;
    std::copy_if(raw.begin(), raw.end(), std::back_inserter(c), [](Viseme v) { return v != Viseme::SIL; });
    if (c.empty()) continue;
    const auto* w = index.find(c);
    if (!w) throw EmptyClusterError(format_visemes(c));
    words.push_back(w);
  }
  if (words.empty()) throw ContractError("no clusters to decode");

  DecodeStats stats;
  const std::size_t n = words.size();
  stats.clusters_processed = n;
  stats.segmentations = 1;
  if (n == 1) return single_word(words[0]->front(), scorer, stats);

  std::vector<Hypothesis> seed;
  seed.reserve(words[0]->size() * words[1]->size());
  for (const auto& a : *words[0]) {
    for (const auto& b : *words[1]) seed.push_back({{a, b}, 0.0, 2, n == 2});
  }
  score_all(seed, scorer, stats);
  ++stats.iterations;
  Beam beam(options.beam_width);
  beam.merge(std::move(seed));

  for (std::size_t i = 2; i < n; ++i) {
    std::vector<Extension> exts;
    exts.reserve(words[i]->size());
    for (const auto& w : *words[i]) exts.push_back({w, i + 1, i + 1 == n});
    std::vector<std::vector<Extension>> conts(beam.size(), exts);
    beam = extend_and_prune(beam, conts, scorer, options.beam_width, &stats);
  }
  return finish(beam, stats);
}

DecodeResult decode_scenario2(std::span<const Viseme> seq, const InverseIndex& index, Scorer& scorer,
                              const DecodeOptions& options) {
  check_width(options);
  const auto lattice = SegmentLattice::build(index, seq, options.limits);
  if (lattice.empty()) {
    throw NoSegmentationError("viseme stream [" + format_visemes(seq) + "] cannot be split into words");
  }
  const std::size_t n = lattice.length();

  DecodeStats stats;
  stats.segmentations = lattice.path_count();

  // Word lists of the live edges leaving each position.
  std::vector<std::vector<std::pair<std::size_t, const std::vector<std::string>*>>> edges(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (auto end : lattice.next(pos)) {
      edges[pos].emplace_back(end, index.find(lattice.cluster(pos, end)));
      ++stats.clusters_processed;
    }
  }

  const auto& first = edges[0];
  const bool whole_is_key = std::any_of(first.begin(), first.end(), [&](const auto& e) { return e.first == n; });
  if (whole_is_key && (options.eager_single_word || lattice.path_count() == 1)) {
    return single_word(index.find(lattice.cluster(0, n))->front(), scorer, stats);
  }

  std::vector<Hypothesis> seed;
  for (const auto& [mid, words1] : first) {
    if (mid == n) {
      for (const auto& a : *words1) seed.push_back({{a}, 0.0, n, true});
      continue;
    }
    for (const auto& [end, words2] : edges[mid]) {
      for (const auto& a : *words1) {
        for (const auto& b : *words2) seed.push_back({{a, b}, 0.0, end, end == n});
      }
    }
  }
  score_all(seed, scorer, stats);
  ++stats.iterations;
  Beam beam(options.beam_width);
  beam.merge(std::move(seed));

  while (!beam.all_complete()) {
    std::vector<std::vector<Extension>> conts(beam.size());
    for (std::size_t i = 0; i < beam.size(); ++i) {
      const auto& h = beam.members()[i];
      if (h.complete) continue;
      for (const auto& [end, words] : edges[h.cursor]) {
        for (const auto& w : *words) conts[i].push_back({w, end, end == n});
      }
    }
    beam = extend_and_prune(beam, conts, scorer, options.beam_width, &stats);
  }
  return finish(beam, stats);
}

}  // namespace v2w
