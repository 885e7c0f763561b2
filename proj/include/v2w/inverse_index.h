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

#ifndef V2W_INVERSE_INDEX_H_
#define V2W_INVERSE_INDEX_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "v2w/lexicon.h"
#include "v2w/viseme.h"

namespace v2w {

// Viseme cluster -> words whose pronunciation maps to exactly that cluster.
//
// Stored as a trie over viseme classes so that every key that is a prefix of
// a stream can be found in one walk. Word lists are ordered by frequency rank
// (unranked last), ties broken lexicographically; the first word is therefore
// the "most frequent" reading of a cluster.
class InverseIndex {
 public:
  InverseIndex();

  static InverseIndex build(const Lexicon& lexicon, const VisemeMap& map);

  // Explicit key -> ordered words. Keys must be nonempty and free of the
  // silent viseme; word lists nonempty. Used for hand-built indexes.
  static InverseIndex from_entries(std::vector<std::pair<VisemeCluster, std::vector<std::string>>> entries);

  // nullptr when the cluster is not a key.
  const std::vector<std::string>* find(std::span<const Viseme> cluster) const;
  bool contains(std::span<const Viseme> cluster) const { return find(cluster) != nullptr; }

  // Calls fn(length, words) for every prefix of seq that is a key, in
  // increasing length.
  void for_each_prefix(std::span<const Viseme> seq,
                       const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) const;
  // Lengths of the key prefixes of seq, increasing.
  std::vector<std::size_t> prefix_lengths(std::span<const Viseme> seq) const;

  // Visits keys in lexicographic viseme order.
  void for_each_entry(const std::function<void(const VisemeCluster&, const std::vector<std::string>&)>& fn) const;

  std::size_t size() const { return lists_.size(); }
  std::size_t max_key_length() const { return max_key_length_; }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;
  // The silent viseme never occurs in a key.
  static constexpr std::size_t kFanout = kVisemeCount - 1;

  struct Node {
    std::uint32_t children[kFanout];
    std::uint32_t list = kNone;
    Node() { std::fill(std::begin(children), std::end(children), kNone); }
  };

  std::vector<std::string>& slot(std::span<const Viseme> cluster);

  std::vector<Node> nodes_;
  std::vector<std::vector<std::string>> lists_;
  std::size_t max_key_length_ = 0;
};

}  // namespace v2w

#endif  // V2W_INVERSE_INDEX_H_
