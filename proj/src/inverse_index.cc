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

#include "v2w/inverse_index.h"

#include <algorithm>
#include <limits>
#include <tuple>

#include "v2w/error.h"

namespace v2w {

InverseIndex::InverseIndex() : nodes_(1) {}

std::vector<std::string>& InverseIndex::slot(std::span<const Viseme> cluster) {
  std::uint32_t node = 0;
  for (Viseme v : cluster) {
    auto c = static_cast<std::size_t>(v);
    if (v == Viseme::SIL) throw ContractError("index keys cannot contain the silent viseme");
    if (nodes_[node].children[c] == kNone) {
      nodes_[node].children[c] = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
    }
    node = nodes_[node].children[c];
  }
  if (nodes_[node].list == kNone) {
    nodes_[node].list = static_cast<std::uint32_t>(lists_.size());
    lists_.emplace_back();
  }
  max_key_length_ = std::max(max_key_length_, cluster.size());
  return lists_[nodes_[node].list];
}

InverseIndex InverseIndex::build(const Lexicon& lexicon, const VisemeMap& map) {
  InverseIndex index;
  for (const auto& [word, entry] : lexicon.entries()) {
    for (const auto& cluster : word_to_clusters(word, lexicon, map)) {
      // Entries arrive in word order, and a word yields distinct clusters, so
      // a list never sees the same word twice.
      index.slot(cluster).push_back(word);
    }
  }
  constexpr auto kUnranked = std::numeric_limits<std::uint64_t>::max();
  for (auto& words : index.lists_) {
    std::stable_sort(words.begin(), words.end(), [&](const std::string& a, const std::string& b) {
      auto ra = lexicon.rank(a), rb = lexicon.rank(b);
      return std::tuple(ra ? *ra : kUnranked, std::string_view(a)) <
             std::tuple(rb ? *rb : kUnranked, std::string_view(b));
    });
  }
  return index;
}

InverseIndex InverseIndex::from_entries(
    std::vector<std::pair<VisemeCluster, std::vector<std::string>>> entries) {
  InverseIndex index;
  for (auto& [cluster, words] : entries) {
    if (cluster.empty()) throw ContractError("index keys must be nonempty");
    if (words.empty()) throw ContractError("index key [" + format_visemes(cluster) + "] has no words");
    auto& list = index.slot(cluster);
    for (auto& w : words) {
      if (std::find(list.begin(), list.end(), w) == list.end()) list.push_back(std::move(w));
    }
  }
  return index;
}

const std::vector<std::string>* InverseIndex::find(std::span<const Viseme> cluster) const {
  if (cluster.empty()) return nullptr;
  std::uint32_t node = 0;
  for (Viseme v : cluster) {
    if (v == Viseme::SIL) return nullptr;
    node = nodes_[node].children[static_cast<std::size_t>(v)];
    if (node == kNone) return nullptr;
  }
  auto list = nodes_[node].list;
  return list == kNone ? nullptr : &lists_[list];
}

void InverseIndex::for_each_prefix(
    std::span<const Viseme> seq,
    const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) const {
  std::uint32_t node = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] == Viseme::SIL) return;
    node = nodes_[node].children[static_cast<std::size_t>(seq[i])];
    if (node == kNone) return;
    if (nodes_[node].list != kNone) fn(i + 1, lists_[nodes_[node].list]);
  }
}

std::vector<std::size_t> InverseIndex::prefix_lengths(std::span<const Viseme> seq) const {
  std::vector<std::size_t> out;
  for_each_prefix(seq, [&](std::size_t len, const auto&) { out.push_back(len); });
  return out;
}

void InverseIndex::for_each_entry(
    const std::function<void(const VisemeCluster&, const std::vector<std::string>&)>& fn) const {
  VisemeCluster path;
  // Iterative DFS; children visited in enum order gives lexicographic keys.
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [node, next_child] = stack.back();
    if (next_child == 0 && node != 0 && nodes_[node].list != kNone) {
      fn(path, lists_[nodes_[node].list]);
    }
    bool descended = false;
    while (next_child < kFanout) {
      auto child = nodes_[node].children[next_child++];
      if (child != kNone) {
        path.push_back(static_cast<Viseme>(next_child - 1));
        stack.emplace_back(child, 0);
        descended = true;
        break;
      }
    }
    if (!descended) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
    }
  }
}

}  // namespace v2w
