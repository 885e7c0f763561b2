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

#ifndef V2W_ERROR_H_
#define V2W_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace v2w {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the source name and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class UnknownPhonemeError : public Error {
 public:
  explicit UnknownPhonemeError(std::string symbol)
      : Error("unknown phoneme '" + symbol + "'"), symbol_(std::move(symbol)) {}
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

class UnknownVisemeError : public Error {
 public:
  explicit UnknownVisemeError(std::string symbol)
      : Error("unknown viseme '" + symbol + "'"), symbol_(std::move(symbol)) {}
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

class OutOfVocabularyError : public Error {
 public:
  explicit OutOfVocabularyError(std::string word)
      : Error("out-of-vocabulary token '" + word + "'"), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

// A caller violated a documented precondition (empty input, bad width, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Scenario 1: a supplied cluster is not an index key.
class EmptyClusterError : public Error {
 public:
  explicit EmptyClusterError(std::string cluster)
      : Error("cluster [" + cluster + "] matches no word"), cluster_(std::move(cluster)) {}
  const std::string& cluster() const { return cluster_; }

 private:
  std::string cluster_;
};

class NoSegmentationError : public Error {
 public:
  using Error::Error;
};

class CapExceededError : public Error {
 public:
  using Error::Error;
};

class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

// External scorer failures. The raw payload that caused the failure is kept
// for diagnostics.
class TransportError : public Error {
 public:
  TransportError(const std::string& message, std::string payload = {})
      : Error(message), payload_(std::move(payload)) {}
  const std::string& payload() const { return payload_; }

 private:
  std::string payload_;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

class MalformedResponseError : public TransportError {
 public:
  using TransportError::TransportError;
};

class VersionMismatchError : public TransportError {
 public:
  using TransportError::TransportError;
};

// The sidecar answered with {"error": ...}.
class RemoteError : public TransportError {
 public:
  using TransportError::TransportError;
};

}  // namespace v2w

#endif  // V2W_ERROR_H_
