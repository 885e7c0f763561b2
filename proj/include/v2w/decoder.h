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

#ifndef V2W_DECODER_H_
#define V2W_DECODER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "v2w/chunker.h"
#include "v2w/inverse_index.h"
#include "v2w/lexicon.h"
#include "v2w/scorer.h"
#include "v2w/viseme.h"

namespace v2w {

struct DecodeOptions {
  std::size_t beam_width = 50;
  ChunkerLimits limits;
  // Scenario 2: pick the most frequent single word whenever the whole stream
  // is one key, even if multi-word segmentations exist. Off by default: the
  // shortcut then only fires when that is the sole segmentation.
  bool eager_single_word = false;
};

// A partial or complete word sequence. cursor counts consumed clusters
// (Scenario 1) or consumed visemes (Scenario 2).
struct Hypothesis {
  Sentence words;
  double perplexity = 0.0;
  std::size_t cursor = 0;
  bool complete = false;

  bool operator==(const Hypothesis&) const = default;
};

// Beam order: lower perplexity, then fewer words, then lexicographically
// smaller word list, then smaller cursor.
bool ranks_before(const Hypothesis& a, const Hypothesis& b);

// Capacity-bounded set of hypotheses kept in beam order.
class Beam {
 public:
  explicit Beam(std::size_t capacity);

  // Adds scored hypotheses, drops repeats of (words, cursor), and keeps the
  // best capacity() members.
  void merge(std::vector<Hypothesis> candidates);

  std::size_t capacity() const { return capacity_; }
  const std::vector<Hypothesis>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool all_complete() const;

 private:
  std::size_t capacity_;
  std::vector<Hypothesis> members_;
};

// One way to extend a hypothesis by a word.
struct Extension {
  std::string word;
  std::size_t cursor = 0;
  bool complete = false;
};

struct DecodeStats {
  std::size_t clusters_processed = 0;
  std::size_t hypotheses_scored = 0;
  std::size_t iterations = 0;
  std::uint64_t segmentations = 0;
  bool single_word_rule = false;
};

// One beam step. continuations[i] lists the extensions of members()[i];
// complete members are carried over unchanged. All new hypotheses are scored
// in a single batch_perplexity call, then merged and pruned to width.
Beam extend_and_prune(const Beam& beam, std::span<const std::vector<Extension>> continuations,
                      Scorer& scorer, std::size_t width, DecodeStats* stats = nullptr);

struct DecodeResult {
  Sentence sentence;
  double perplexity = 0.0;
  // The rest of the final beam, best first.
  std::vector<Hypothesis> alternates;
  DecodeStats stats;
};

// Known word boundaries. A single cluster yields its most frequent word;
// otherwise all word pairs of the first two clusters seed the beam and each
// later cluster extends every member.
//
// Throws ContractError for zero clusters or zero width, EmptyClusterError for
// a cluster that is not an index key. Silent visemes inside clusters are
// ignored.
DecodeResult decode_scenario1(std::span<const VisemeCluster> clusters, const InverseIndex& index,
                              Scorer& scorer, const DecodeOptions& options = {});

// Unknown word boundaries: beam search over the segmentation lattice.
// Complete hypotheses stay in the beam without extension; the search stops
// once every member is complete.
//
// Throws NoSegmentationError when the stream cannot be split into keys and
// CapExceededError when it is too long.
DecodeResult decode_scenario2(std::span<const Viseme> seq, const InverseIndex& index, Scorer& scorer,
                              const DecodeOptions& options = {});

}  // namespace v2w

#endif  // V2W_DECODER_H_
