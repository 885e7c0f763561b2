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

#ifndef V2W_EXTERNAL_SCORER_H_
#define V2W_EXTERNAL_SCORER_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "v2w/scorer.h"

namespace v2w {

// Line protocol spoken with a scorer sidecar over its stdin/stdout:
//
//   sidecar -> {"hello":"viseme-scorer","version":1, ...}       once, on start
//   client  -> {"id":<int>,"texts":["EXCUSE ME", ...]}
//   sidecar -> {"id":<int>,"ppl":[5.3, ...]} | {"id":<int>,"error":"..."}
//
// One JSON object per line; ids strictly increase per connection.
inline constexpr std::string_view kProtocolHello = "viseme-scorer";
inline constexpr int kProtocolVersion = 1;

struct ExternalScorerConfig {
  // Run through /bin/sh -c.
  std::string command;
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
  // Larger batches are split into several requests.
  std::size_t max_batch = 256;
};

// A child process with line-oriented pipes. Killed on destruction if it has
// not exited after its stdin is closed.
class SidecarProcess {
 public:
  SidecarProcess(const std::string& command, std::chrono::milliseconds timeout);
  ~SidecarProcess();
  SidecarProcess(const SidecarProcess&) = delete;
  SidecarProcess& operator=(const SidecarProcess&) = delete;

  // Throws TransportError.
  void write_line(std::string_view line);
  // Throws TimeoutError, or TransportError on EOF.
  std::string read_line();

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::chrono::milliseconds timeout_;
};

class ExternalScorer final : public Scorer {
 public:
  // Spawns the sidecar and validates its handshake.
  explicit ExternalScorer(ExternalScorerConfig config);

  std::vector<double> batch_perplexity(std::span<const Sentence> sentences) override;
  // Raw texts; same errors as batch_perplexity.
  std::vector<double> score_remote(std::span<const std::string> texts);

  // The handshake line as received.
  const std::string& handshake() const { return handshake_; }

  // Sends {"id":<next id>,"texts":texts} without validating the reply beyond
  // JSON syntax and returns the reply line. For protocol conformance checks.
  std::string exchange_raw(std::span<const std::string> texts);

 private:
  std::vector<double> request(std::span<const std::string> texts);

  ExternalScorerConfig config_;
  SidecarProcess process_;
  std::string handshake_;
  std::int64_t next_id_ = 1;
  std::mutex mu_;
};

struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Drives a fresh sidecar through the protocol: handshake, single and multi
// text requests, the empty-texts error path, recovery after an error, and
// determinism. Never throws for sidecar misbehaviour; failures are reported
// as failed checks.
std::vector<ConformanceCheck> check_protocol(const ExternalScorerConfig& config);

}  // namespace v2w

#endif  // V2W_EXTERNAL_SCORER_H_
