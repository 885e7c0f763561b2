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

#ifndef V2W_CHUNKER_H_
#define V2W_CHUNKER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "v2w/inverse_index.h"
#include "v2w/viseme.h"

namespace v2w {

struct ChunkerLimits {
  // Enumeration refuses to materialize more segmentations than this.
  std::size_t max_segmentations = 10000;
  // Longest stream accepted, silences excluded.
  std::size_t max_sequence_length = 128;
};

using Segmentation = std::vector<VisemeCluster>;

// Length of the shortest key prefix of seq that is at least min_length + 1
// long, or 0 if there is none. Requires min_length < seq.size().
std::size_t find_shortest_prefix(const InverseIndex& index, std::span<const Viseme> seq,
                                 std::size_t min_length);

// Every way to split seq into index keys, deduplicated, in canonical order
// (fewer clusters first, then by the list of cluster lengths). Silent visemes
// are hard boundaries and are not part of any cluster.
//
// Throws CapExceededError when the result would exceed
// limits.max_segmentations or the stream exceeds limits.max_sequence_length.
std::vector<Segmentation> find_possible_chunks(const InverseIndex& index, std::span<const Viseme> seq,
                                               const ChunkerLimits& limits = {});

// The same set computed by direct prefix-probing recursion without
// memoization. Exponential; kept for differential testing.
std::vector<Segmentation> find_possible_chunks_literal(const InverseIndex& index,
                                                       std::span<const Viseme> seq,
                                                       const ChunkerLimits& limits = {});

void sort_canonical(std::vector<Segmentation>& segmentations);

// DAG over cut positions 0..length() whose source-to-sink paths are exactly
// the segmentations of the stream. Only positions that lie on some complete
// path are kept.
class SegmentLattice {
 public:
  // Throws CapExceededError if the stream is longer than
  // limits.max_sequence_length. Never enumerates paths.
  static SegmentLattice build(const InverseIndex& index, std::span<const Viseme> seq,
                              const ChunkerLimits& limits = {});

  bool empty() const { return path_count() == 0; }
  // Stream length with silences removed; the sink position.
  std::size_t length() const { return visemes_.size(); }
  std::span<const Viseme> visemes() const { return visemes_; }

  std::size_t node_count() const;
  // Saturates at UINT64_MAX.
  std::uint64_t path_count() const { return paths_from_.empty() ? 0 : paths_from_[0]; }

  // End positions of the live edges leaving a position, increasing.
  std::span<const std::size_t> next(std::size_t position) const { return next_[position]; }
  std::span<const Viseme> cluster(std::size_t begin, std::size_t end) const {
    return std::span<const Viseme>(visemes_).subspan(begin, end - begin);
  }

  // Throws CapExceededError when path_count() > cap.
  std::vector<Segmentation> segmentations(std::size_t cap) const;

  // Distinct clusters that can follow the given cluster prefix on some
  // complete path. Empty if the prefix is not a path prefix.
  std::vector<VisemeCluster> continuations(std::span<const VisemeCluster> prefix) const;

 private:
  VisemeSequence visemes_;
  std::vector<std::vector<std::size_t>> next_;
  std::vector<std::uint64_t> paths_from_;
  std::vector<bool> reachable_;
};

}  // namespace v2w

#endif  // V2W_CHUNKER_H_
