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

#include "v2w/external_scorer.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <memory>
#include <thread>

#include "json.hpp"
#include "v2w/error.h"

namespace v2w {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

json parse_line(const std::string& line) {
  try {
    auto j = json::parse(line);
    if (!j.is_object()) throw MalformedResponseError("sidecar sent a non-object line", line);
    return j;
  } catch (const json::exception&) {
    throw MalformedResponseError("sidecar sent invalid JSON", line);
  }
}

void validate_handshake(const std::string& line) {
  auto j = parse_line(line);
  if (!j.contains("hello") || j["hello"] != kProtocolHello) {
    throw MalformedResponseError("sidecar handshake lacks \"hello\":\"viseme-scorer\"", line);
  }
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != kProtocolVersion) {
    throw VersionMismatchError("sidecar speaks an unsupported protocol version", line);
  }
}

}  // namespace

SidecarProcess::SidecarProcess(const std::string& command, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  ignore_sigpipe();
  int in_pipe[2], out_pipe[2];
  // Close-on-exec from the start so sidecars spawned concurrently from other
  // threads do not inherit each other's pipe ends.
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError(errno_text("pipe"));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError(errno_text("pipe"));
  }
  pid_t pid = ::fork();
  if (pid < 0) throw TransportError(errno_text("fork"));
  if (pid == 0) {
    // Own process group, so the whole pipeline started by sh can be killed.
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  pid_ = pid;
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

SidecarProcess::~SidecarProcess() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ <= 0) return;
  const auto deadline = Clock::now() + std::chrono::seconds(2);
  while (Clock::now() < deadline) {
    if (::waitpid(pid_, nullptr, WNOHANG) != 0) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ::kill(-pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
}

void SidecarProcess::write_line(std::string_view line) {
  std::string data(line);
  data += '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    auto n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("write to sidecar"), std::string(line));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SidecarProcess::read_line() {
  const auto deadline = Clock::now() + timeout_;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) throw TimeoutError("sidecar did not answer in time", buffer_);
    pollfd pfd{from_child_, POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("poll"), buffer_);
    }
    if (r == 0) continue;
    char chunk[4096];
    auto n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("read from sidecar"), buffer_);
    }
    if (n == 0) throw TransportError("sidecar closed its output", buffer_);
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

ExternalScorer::ExternalScorer(ExternalScorerConfig config)
    : config_(std::move(config)), process_(config_.command, config_.timeout) {
  if (config_.max_batch == 0) throw ContractError("max_batch must be positive");
  handshake_ = process_.read_line();
  validate_handshake(handshake_);
}

std::string ExternalScorer::exchange_raw(std::span<const std::string> texts) {
  std::lock_guard lock(mu_);
  json req = {{"id", next_id_++}, {"texts", texts}};
  process_.write_line(req.dump());
  auto line = process_.read_line();
  parse_line(line);
  return line;
}

std::vector<double> ExternalScorer::request(std::span<const std::string> texts) {
  const auto id = next_id_++;
  json req = {{"id", id}, {"texts", texts}};
  const std::string payload = req.dump();
  process_.write_line(payload);
  const std::string line = process_.read_line();
  auto resp = parse_line(line);
  if (!resp.contains("id") || !resp["id"].is_number_integer() || resp["id"].get<std::int64_t>() != id) {
    throw MalformedResponseError("sidecar response id does not match request " + std::to_string(id), line);
  }
  if (resp.contains("error")) {
    throw RemoteError("sidecar error: " + resp["error"].dump(), line);
  }
  if (!resp.contains("ppl") || !resp["ppl"].is_array() || resp["ppl"].size() != texts.size()) {
    throw MalformedResponseError("sidecar response lacks one perplexity per text", line);
  }
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto& v : resp["ppl"]) {
    if (!v.is_number()) throw MalformedResponseError("non-numeric perplexity", line);
    double p = v.get<double>();
    if (!std::isfinite(p) || p <= 0.0) throw MalformedResponseError("perplexity out of range", line);
    out.push_back(p);
  }
  return out;
}

std::vector<double> ExternalScorer::score_remote(std::span<const std::string> texts) {
  if (texts.empty()) throw ContractError("empty batch");
  std::lock_guard lock(mu_);
  std::vector<double> out;
  out.reserve(texts.size());
  for (std::size_t off = 0; off < texts.size(); off += config_.max_batch) {
    auto part = request(texts.subspan(off, std::min(config_.max_batch, texts.size() - off)));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<double> ExternalScorer::batch_perplexity(std::span<const Sentence> sentences) {
  std::vector<std::string> texts;
  texts.reserve(sentences.size());
  for (const auto& s : sentences) {
    if (s.empty()) throw ContractError("cannot score an empty sentence");
    texts.push_back(join_words(s));
  }
  return score_remote(texts);
}

std::vector<ConformanceCheck> check_protocol(const ExternalScorerConfig& config) {
  std::vector<ConformanceCheck> checks;
  auto record = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };

  std::unique_ptr<ExternalScorer> scorer;
  try {
    scorer = std::make_unique<ExternalScorer>(config);
    record("handshake", true, scorer->handshake());
  } catch (const TransportError& e) {
    record("handshake", false, std::string(e.what()) + " payload=" + e.payload());
    return checks;
  }

  auto expect_ppl = [&](const std::string& name, std::int64_t id,
                        std::vector<std::string> texts) -> std::vector<double> {
    try {
      auto line = scorer->exchange_raw(texts);
      auto j = json::parse(line);
      bool ok = j.value("id", std::int64_t{-1}) == id && j.contains("ppl") && j["ppl"].is_array() && j["ppl"].size() == texts.size();
      std::vector<double> values;
      if (ok) {
        for (const auto& v : j["ppl"]) {
          ok = ok && v.is_number() && std::isfinite(v.get<double>()) && v.get<double>() >= 1.0;
          if (v.is_number()) values.push_back(v.get<double>());
        }
      }
      record(name, ok, line);
      return ok ? values : std::vector<double>{};
    } catch (const Error& e) {
      record(name, false, e.what());
      return {};
    }
  };

  // Ids sent are 1, 2, 3, ... in the order of the exchanges below.
  auto first = expect_ppl("single text", 1, {"EXCUSE ME"});
  expect_ppl("two texts in order", 2, {"EXCUSE ME", "ME EXCUSE"});
  try {
    auto line = scorer->exchange_raw(std::vector<std::string>{});
    auto j = json::parse(line);
    bool ok = j.value("id", std::int64_t{-1}) == 3 && j.contains("error") && j["error"] == "empty";
    record("empty texts error", ok, line);
  } catch (const Error& e) {
    record("empty texts error", false, e.what());
  }
  auto again = expect_ppl("recovers after error", 4, {"EXCUSE ME"});
  record("deterministic", !first.empty() && first == again,
         first.empty() || again.empty() ? "missing values"
                                        : std::to_string(first[0]) + " vs " + std::to_string(again[0]));
  try {
    auto values = scorer->score_remote(std::vector<std::string>{"HELLO", "THANK YOU"});
    record("client round trip", values.size() == 2, "ids strictly increasing");
  } catch (const Error& e) {
    record("client round trip", false, e.what());
  }
  return checks;
}

}  // namespace v2w
