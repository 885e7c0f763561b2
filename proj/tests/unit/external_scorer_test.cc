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

#include <chrono>
#include <string>
#include <vector>

#include "doctest.h"
#include "testing.h"
#include "v2w/decoder.h"
#include "v2w/error.h"
#include "v2w/external_scorer.h"

using namespace v2w;
using namespace std::chrono_literals;

namespace {

ExternalScorerConfig mock(const std::string& mode, std::chrono::milliseconds timeout = 5000ms) {
  ExternalScorerConfig c;
  c.command = std::string(V2W_MOCK_SIDECAR) + " " + mode;
  c.timeout = timeout;
  return c;
}

double text_score(const std::string& s) {
  unsigned sum = 0;
  for (unsigned char c : s) sum += c;
  return 1.0 + (sum % 97) / 10.0;
}

}  // namespace

TEST_CASE("round trip in order") {
  ExternalScorer s(mock("ok"));
  CHECK(s.handshake().find("viseme-scorer") != std::string::npos);
  const std::vector<std::string> texts = {"EXCUSE ME", "ME EXCUSE", "THANK YOU"};
  const auto ppl = s.score_remote(texts);
  REQUIRE(ppl.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(ppl[i] == text_score(texts[i]));
  CHECK(s.perplexity({"EXCUSE", "ME"}) == ppl[0]);
  CHECK(s.score_remote(texts) == ppl);
}

TEST_CASE("large batches are split but answered in order") {
  auto cfg = mock("ok");
  cfg.max_batch = 3;
  ExternalScorer s(cfg);
  std::vector<Sentence> batch;
  for (int i = 0; i < 10; ++i) batch.push_back({"WORD" + std::to_string(i)});
  const auto ppl = s.batch_perplexity(batch);
  REQUIRE(ppl.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(ppl[static_cast<std::size_t>(i)] == text_score("WORD" + std::to_string(i)));
}

TEST_CASE("uniform remote backend") {
  for (double v : {2.0, 10.0, 100.0}) {
    ExternalScorer s(mock("uniform " + std::to_string(static_cast<int>(v))));
    CHECK(s.perplexity({"ANY", "WORDS"}) == v);
  }
}

TEST_CASE("client-side contract") {
  ExternalScorer s(mock("ok"));
  CHECK_THROWS_AS(s.score_remote(std::vector<std::string>{}), ContractError);
  CHECK_THROWS_AS(s.batch_perplexity(std::vector<Sentence>{{}}), ContractError);
  // The raw exchange lets the empty request through to the sidecar.
  const auto line = s.exchange_raw(std::vector<std::string>{});
  CHECK(line.find("\"error\":\"empty\"") != std::string::npos);
  CHECK(s.score_remote(std::vector<std::string>{"A"}).size() == 1);
}

TEST_CASE("each failure has its own error type") {
  CHECK_THROWS_AS(ExternalScorer(mock("bad-version")), VersionMismatchError);
  CHECK_THROWS_AS(ExternalScorer(mock("no-hello")), MalformedResponseError);
  CHECK_THROWS_AS(ExternalScorer(mock("silent", 300ms)), TimeoutError);
  const std::vector<std::string> one = {"HELLO"};
  {
    ExternalScorer s(mock("garbage"));
    try {
      s.score_remote(one);
      FAIL("expected a malformed response");
    } catch (const MalformedResponseError& e) {
      CHECK(e.payload() == "{not json");
    }
  }
  {
    ExternalScorer s(mock("hang", 300ms));
    const auto start = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(s.score_remote(one), TimeoutError);
    CHECK(std::chrono::steady_clock::now() - start < 3s);
  }
  {
    ExternalScorer s(mock("wrong-id"));
    CHECK_THROWS_AS(s.score_remote(one), MalformedResponseError);
  }
  {
    ExternalScorer s(mock("short"));
    CHECK_THROWS_AS(s.score_remote(std::vector<std::string>{"A", "B"}), MalformedResponseError);
  }
  {
    ExternalScorer s(mock("negative"));
    CHECK_THROWS_AS(s.score_remote(one), MalformedResponseError);
  }
  {
    ExternalScorer s(mock("remote"));
    CHECK_THROWS_AS(s.score_remote(one), RemoteError);
  }
  {
    ExternalScorer s(mock("crash"));
    CHECK_THROWS_AS(s.score_remote(one), TransportError);
  }
  CHECK_THROWS_AS(ExternalScorer(ExternalScorerConfig{"/nonexistent/scorer", 500ms, 256}), TransportError);
}

TEST_CASE("conformance checks") {
  const auto good = check_protocol(mock("ok"));
  REQUIRE(good.size() == 7);
  for (const auto& c : good) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  const auto bad = check_protocol(mock("wrong-id"));
  CHECK(bad[0].passed);
  CHECK_FALSE(bad[1].passed);
  const auto dead = check_protocol(mock("bad-version"));
  REQUIRE(dead.size() == 1);
  CHECK_FALSE(dead[0].passed);
}

TEST_CASE("decoding through the remote scorer matches the local table") {
  const auto idx = InverseIndex::from_entries({{v2w::testing::vs("p"), {"A1", "A2"}}, {v2w::testing::vs("t"), {"B1", "B2"}}});
  ExternalScorer remote(mock("ok"));
  struct Local : Scorer {
    std::vector<double> batch_perplexity(std::span<const Sentence> s) override {
      std::vector<double> out;
      for (const auto& x : s) out.push_back(text_score(join_words(x)));
      return out;
    }
  } local;
  const auto in = v2w::testing::clusters({"p", "t", "p"});
  CHECK(decode_scenario1(in, idx, remote).sentence == decode_scenario1(in, idx, local).sentence);
}
