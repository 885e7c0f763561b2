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

#ifndef V2W_PIPELINE_H_
#define V2W_PIPELINE_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "v2w/artifact.h"
#include "v2w/decoder.h"
#include "v2w/metrics.h"
#include "v2w/scorer.h"

namespace v2w {

struct EvalOptions {
  int scenario = 1;
  DecodeOptions decode;
  bool cer_spaces = true;
  std::size_t jobs = 1;
};

// Called once per worker thread. Returning the same instance from every
// call is fine for scorers that are safe to share (the n-gram model is).
using ScorerFactory = std::function<std::shared_ptr<Scorer>()>;

// Reads one reference sentence per line; blank lines are dropped.
std::vector<std::string> read_references(std::string_view text);

// Converts each reference to visemes, decodes it, and scores the result.
// Rows with out-of-vocabulary references are skipped; rows whose decode
// fails are scored against an empty hypothesis. A TransportError from the
// scorer aborts the run and is rethrown.
MetricsReport run_eval(const Artifact& artifact, const std::vector<std::string>& references,
                       const ScorerFactory& factory, const EvalOptions& options);

}  // namespace v2w

#endif  // V2W_PIPELINE_H_
