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

#include "v2w/chunker.h"

#include <algorithm>
#include <limits>
#include <string>

#include "v2w/error.h"

namespace v2w {
namespace {

constexpr auto kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

// Splits at silent visemes, dropping empty runs.
std::vector<VisemeSequence> split_at_silence(std::span<const Viseme> seq) {
  std::vector<VisemeSequence> parts(1);
  for (Viseme v : seq) {
    if (v == Viseme::SIL) {
      if (!parts.back().empty()) parts.emplace_back();
    } else {
      parts.back().push_back(v);
    }
  }
  if (parts.back().empty()) parts.pop_back();
  return parts;
}

void check_length(std::size_t length, const ChunkerLimits& limits) {
  if (length > limits.max_sequence_length) {
    throw CapExceededError("viseme stream of length " + std::to_string(length) +
                           " exceeds the maximum of " + std::to_string(limits.max_sequence_length));
  }
}

class LiteralChunker {
 public:
  LiteralChunker(const InverseIndex& index, std::size_t cap) : index_(index), cap_(cap) {}

  // A direct transcription of the prefix-probing recursion: probe viable
  // prefixes in increasing length; a prefix spanning the whole remainder
  // closes the branch, anything shorter recurses on the rest.
  std::vector<Segmentation> run(std::span<const Viseme> visemes, const Segmentation& current) {
    std::vector<Segmentation> successes;
    std::size_t n = 0;
    while (n < visemes.size()) {
      n = find_shortest_prefix(index_, visemes, n);
      if (n == 0) break;
      if (n == visemes.size()) {
        Segmentation done = current;
        done.emplace_back(visemes.begin(), visemes.end());
        successes.push_back(std::move(done));
        note(1);
        return successes;
      }
      Segmentation next = current;
      next.emplace_back(visemes.begin(), visemes.begin() + static_cast<std::ptrdiff_t>(n));
      auto rest = run(visemes.subspan(n), next);
      successes.insert(successes.end(), std::make_move_iterator(rest.begin()),
                       std::make_move_iterator(rest.end()));
    }
    return successes;
  }

 private:
  void note(std::size_t found) {
    found_ += found;
    if (found_ > cap_) {
      throw CapExceededError("more than " + std::to_string(cap_) + " segmentations");
    }
  }

  const InverseIndex& index_;
  std::size_t cap_;
  std::size_t found_ = 0;
};

}  // namespace

std::size_t find_shortest_prefix(const InverseIndex& index, std::span<const Viseme> seq,
                                 std::size_t min_length) {
  if (min_length >= seq.size()) {
    throw ContractError("find_shortest_prefix: min_length must be below the sequence length");
  }
  for (std::size_t len = min_length + 1; len <= seq.size(); ++len) {
    if (index.contains(seq.first(len))) return len;
  }
  return 0;
}

void sort_canonical(std::vector<Segmentation>& segs) {
  auto lengths = [](const Segmentation& s) {
    std::vector<std::size_t> out;
    out.reserve(s.size());
    for (const auto& c : s) out.push_back(c.size());
    return out;
  };
  auto less = [&](const Segmentation& a, const Segmentation& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    auto la = lengths(a), lb = lengths(b);
    if (la != lb) return la < lb;
    return a < b;
  };
  std::sort(segs.begin(), segs.end(), less);
  segs.erase(std::unique(segs.begin(), segs.end()), segs.end());
}

std::vector<Segmentation> find_possible_chunks(const InverseIndex& index, std::span<const Viseme> seq,
                                               const ChunkerLimits& limits) {
  return SegmentLattice::build(index, seq, limits).segmentations(limits.max_segmentations);
}

std::vector<Segmentation> find_possible_chunks_literal(const InverseIndex& index,
                                                       std::span<const Viseme> seq,
                                                       const ChunkerLimits& limits) {
  auto parts = split_at_silence(seq);
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  check_length(total, limits);
  if (parts.empty()) return {};

  std::vector<Segmentation> product{Segmentation{}};
  for (const auto& part : parts) {
    LiteralChunker chunker(index, limits.max_segmentations);
    auto local = chunker.run(part, {});
    if (local.empty()) return {};
    if (product.size() * local.size() > limits.max_segmentations) {
      throw CapExceededError("more than " + std::to_string(limits.max_segmentations) + " segmentations");
    }
    std::vector<Segmentation> next;
    for (const auto& head : product) {
      for (const auto& tail : local) {
        Segmentation s = head;
        s.insert(s.end(), tail.begin(), tail.end());
        next.push_back(std::move(s));
      }
    }
    product = std::move(next);
  }
  sort_canonical(product);
  return product;
}

SegmentLattice SegmentLattice::build(const InverseIndex& index, std::span<const Viseme> seq,
                                     const ChunkerLimits& limits) {
  SegmentLattice lat;
  std::vector<bool> forced_cut;
  for (Viseme v : seq) {
    if (v == Viseme::SIL) {
      if (!lat.visemes_.empty()) forced_cut.back() = true;
    } else {
      lat.visemes_.push_back(v);
      forced_cut.push_back(false);
    }
  }
  const std::size_t n = lat.visemes_.size();
  check_length(n, limits);

  // Raw edges; an edge may not straddle a silence.
  std::vector<std::vector<std::size_t>> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t stop = i;
    while (stop < n && !forced_cut[stop]) ++stop;
    stop = std::min(stop + 1, n);
    index.for_each_prefix(std::span<const Viseme>(lat.visemes_).subspan(i, stop - i),
                          [&](std::size_t len, const auto&) { edges[i].push_back(i + len); });
  }

  lat.paths_from_.assign(n + 1, 0);
  if (n == 0) {
    lat.next_.assign(1, {});
    lat.reachable_.assign(1, false);
    return lat;
  }
  lat.paths_from_[n] = 1;
  for (std::size_t i = n; i-- > 0;) {
    for (auto j : edges[i]) lat.paths_from_[i] = saturating_add(lat.paths_from_[i], lat.paths_from_[j]);
  }

  lat.next_.assign(n + 1, {});
  lat.reachable_.assign(n + 1, false);
  if (lat.paths_from_[0] == 0) return lat;
  lat.reachable_[0] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!lat.reachable_[i]) continue;
    for (auto j : edges[i]) {
      if (lat.paths_from_[j] == 0) continue;
      lat.next_[i].push_back(j);
      lat.reachable_[j] = true;
    }
  }
  return lat;
}

std::size_t SegmentLattice::node_count() const {
  if (empty()) return 0;
  return static_cast<std::size_t>(std::count(reachable_.begin(), reachable_.end(), true));
}

std::vector<Segmentation> SegmentLattice::segmentations(std::size_t cap) const {
  if (empty()) return {};
  if (path_count() > cap) {
    throw CapExceededError(std::to_string(path_count()) + " segmentations exceed the cap of " +
                           std::to_string(cap));
  }
  std::vector<Segmentation> out;
  out.reserve(path_count());
  Segmentation current;
  auto walk = [&](auto&& self, std::size_t pos) -> void {
    if (pos == length()) {
      out.push_back(current);
      return;
    }
    for (auto end : next(pos)) {
      auto c = cluster(pos, end);
      current.emplace_back(c.begin(), c.end());
      self(self, end);
      current.pop_back();
    }
  };
  walk(walk, 0);
  sort_canonical(out);
  return out;
}

std::vector<VisemeCluster> SegmentLattice::continuations(std::span<const VisemeCluster> prefix) const {
  if (empty()) return {};
  std::size_t pos = 0;
  for (const auto& c : prefix) {
    const auto end = pos + c.size();
    auto ends = next(pos);
    if (c.empty() || std::find(ends.begin(), ends.end(), end) == ends.end()) return {};
    auto span = cluster(pos, end);
    if (!std::equal(span.begin(), span.end(), c.begin(), c.end())) return {};
    pos = end;
  }
  std::vector<VisemeCluster> out;
  if (pos == length()) return out;
  for (auto end : next(pos)) {
    auto span = cluster(pos, end);
    out.emplace_back(span.begin(), span.end());
  }
  return out;
}

}  // namespace v2w
