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

#include <random>
#include <set>

#include "doctest.h"
#include "testing.h"
#include "v2w/chunker.h"
#include "v2w/error.h"

using namespace v2w;
using v2w::testing::vs;

namespace {

// Toy alphabet: p stands for "a", t for "b".
InverseIndex ab_index() { return InverseIndex::from_entries({{vs("p"), {"A"}}, {vs("t"), {"B"}}, {vs("p t"), {"AB"}}}); }

VisemeSequence join(const Segmentation& seg) {
  VisemeSequence out;
  for (const auto& c : seg) out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace

TEST_CASE("shortest prefix") {
  const auto idx = InverseIndex::from_entries({{vs("w ah t"), {"WHAT"}}, {vs("w ah t t"), {"WATTS"}}});
  const auto seq = vs("w ah t t ah");
  CHECK(find_shortest_prefix(idx, seq, 0) == 3);
  CHECK(find_shortest_prefix(idx, seq, 3) == 4);
  CHECK(find_shortest_prefix(idx, seq, 4) == 0);
  const auto me = InverseIndex::from_entries({{vs("p iy"), {"ME"}}});
  CHECK(find_shortest_prefix(me, vs("t t"), 0) == 0);
  CHECK_THROWS_AS(find_shortest_prefix(me, vs("t t"), 2), ContractError);
}

TEST_CASE("two-symbol toy") {
  const auto idx = ab_index();
  const auto segs = find_possible_chunks(idx, vs("p t"));
  REQUIRE(segs.size() == 2);
  CHECK(segs[0] == Segmentation{vs("p t")});
  CHECK(segs[1] == Segmentation{vs("p"), vs("t")});
  CHECK(find_possible_chunks_literal(idx, vs("p t")) == segs);

  const auto lat = SegmentLattice::build(idx, vs("p t"));
  CHECK(lat.node_count() == 3);
  CHECK(lat.path_count() == 2);
  CHECK(lat.segmentations(10) == segs);
}

TEST_CASE("unique and missing segmentations") {
  const auto idx = ab_index();
  const auto one = SegmentLattice::build(idx, vs("t t"));
  CHECK(one.path_count() == 1);
  CHECK(one.segmentations(10) == std::vector<Segmentation>{{vs("t"), vs("t")}});
  const auto none = SegmentLattice::build(idx, vs("p k"));
  CHECK(none.path_count() == 0);
  CHECK(none.empty());
  CHECK(find_possible_chunks(idx, vs("p k")).empty());
  CHECK(find_possible_chunks_literal(idx, vs("p k")).empty());
}

TEST_CASE("dead ends are pruned from the lattice") {
  // "p t k": the cut after "p" leads nowhere because "t k" is not coverable.
  const auto idx = InverseIndex::from_entries({{vs("p"), {"A"}}, {vs("p t"), {"AB"}}, {vs("k"), {"C"}}});
  const auto lat = SegmentLattice::build(idx, vs("p t k"));
  CHECK(lat.path_count() == 1);
  CHECK(lat.next(0).size() == 1);
  CHECK(lat.next(0)[0] == 2);
  CHECK(lat.node_count() == 3);
}

TEST_CASE("silence is a hard boundary") {
  const auto idx = ab_index();
  // Without the silence "p t" could be one cluster.
  const auto segs = find_possible_chunks(idx, vs("p s t"));
  CHECK(segs == std::vector<Segmentation>{{vs("p"), vs("t")}});
  CHECK(find_possible_chunks_literal(idx, vs("p s t")) == segs);
  CHECK(find_possible_chunks(idx, vs("s p t s s")) == find_possible_chunks(idx, vs("p t")));
  CHECK(find_possible_chunks(idx, vs("p s k")).empty());
}

TEST_CASE("continuations follow live edges") {
  const auto idx = ab_index();
  const auto lat = SegmentLattice::build(idx, vs("p t p t"));
  CHECK(lat.path_count() == 4);
  const auto first = lat.continuations({});
  CHECK(first == std::vector<VisemeCluster>{vs("p"), vs("p t")});
  const auto after_p = lat.continuations(std::vector<VisemeCluster>{vs("p")});
  CHECK(after_p == std::vector<VisemeCluster>{vs("t")});
  CHECK(lat.continuations(std::vector<VisemeCluster>{vs("t")}).empty());
  CHECK(lat.continuations(std::vector<VisemeCluster>{vs("p t"), vs("p t")}).empty());
}

TEST_CASE("caps are reported, never truncated") {
  const auto idx = ab_index();
  VisemeSequence seq;
  for (int i = 0; i < 12; ++i) {
    seq.push_back(Viseme::P);
    seq.push_back(Viseme::T);
  }
  ChunkerLimits small{.max_segmentations = 100, .max_sequence_length = 128};
  const auto lat = SegmentLattice::build(idx, seq, small);
  CHECK(lat.path_count() == 4096);
  CHECK_THROWS_AS(find_possible_chunks(idx, seq, small), CapExceededError);
  CHECK_THROWS_AS(find_possible_chunks_literal(idx, seq, small), CapExceededError);
  CHECK_THROWS_AS(lat.segmentations(4095), CapExceededError);
  CHECK(lat.segmentations(4096).size() == 4096);

  ChunkerLimits short_len{.max_segmentations = 10000, .max_sequence_length = 8};
  CHECK_THROWS_AS(SegmentLattice::build(idx, seq, short_len), CapExceededError);
  CHECK_THROWS_AS(find_possible_chunks_literal(idx, seq, short_len), CapExceededError);
}

TEST_CASE("path count saturates instead of wrapping") {
  const auto idx = InverseIndex::from_entries({{vs("p"), {"A"}}, {vs("p p"), {"AA"}}});
  const VisemeSequence seq(120, Viseme::P);
  const auto lat = SegmentLattice::build(idx, seq);
  CHECK(lat.path_count() == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("canonical order") {
  std::vector<Segmentation> segs = {{vs("p"), vs("t t")}, {vs("p t"), vs("t")}, {vs("p t t")}, {vs("p"), vs("t t")}};
  sort_canonical(segs);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0] == Segmentation{vs("p t t")});
  CHECK(segs[1] == Segmentation{vs("p"), vs("t t")});
  CHECK(segs[2] == Segmentation{vs("p t"), vs("t")});
}

TEST_CASE("random instances: oracle, literal recursion and invariants") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = v2w::testing::random_toy(rng, 3, 8, 3, 0);
    const auto seq = trial % 2 ? v2w::testing::random_covered_stream(rng, t, 5, 9) : [&] {
      auto r = v2w::testing::random_toy(rng, 3, 1, 1, 1 + trial % 9);
      return r.seq;
    }();
    const auto segs = find_possible_chunks(t.index, seq);
    CAPTURE(format_visemes(seq));
    CHECK(segs == v2w::testing::brute_force_chunks(t.index, seq));
    CHECK(segs == find_possible_chunks_literal(t.index, seq));
    CHECK(SegmentLattice::build(t.index, seq).path_count() == segs.size());
    std::set<Segmentation> unique(segs.begin(), segs.end());
    CHECK(unique.size() == segs.size());
    for (const auto& s : segs) {
      CHECK(join(s) == seq);
      for (const auto& c : s) CHECK(t.index.contains(c));
    }
  }
}
