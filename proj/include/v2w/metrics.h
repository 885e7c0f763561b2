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

#ifndef V2W_METRICS_H_
#define V2W_METRICS_H_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace v2w {

// Minimal unit-cost alignment counts against a reference of length N.
struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t edits() const { return substitutions + deletions + insertions; }
  EditCounts& operator+=(const EditCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    reference_length += o.reference_length;
    return *this;
  }
  bool operator==(const EditCounts&) const = default;
};

// Levenshtein alignment of two token sequences (any random-access range of
// equality-comparable tokens). Among minimal alignments the backtrace takes
// a substitution before a deletion before an insertion, so S, D and I are
// individually deterministic.
template <typename Seq>
EditCounts edit_counts(const Seq& reference, const Seq& hypothesis) {
  const std::size_t n = std::size(reference), m = std::size(hypothesis);
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  EditCounts c;
  c.reference_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++c.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

// (S + D + I) / N. Can exceed 1 when the hypothesis is much longer. Throws
// UndefinedRateError when N == 0.
double error_rate(const EditCounts& counts);

// Normalized words (uppercase, apostrophes kept, other punctuation dropped).
std::vector<std::string> word_tokens(std::string_view sentence);
// Characters of the normalized sentence; single spaces between words are
// tokens unless include_spaces is false.
std::string char_tokens(std::string_view sentence, bool include_spaces = true);

// 1 iff the normalized sentences are identical.
int sar(std::string_view reference, std::string_view hypothesis);

enum class RowStatus {
  kOk,
  // Reference could not be converted (e.g. out-of-vocabulary); excluded.
  kSkipped,
  // Decoding failed; scored against an empty hypothesis.
  kFailed,
};

struct SentenceRow {
  std::size_t id = 0;
  std::string reference;
  std::string hypothesis;
  EditCounts chars;
  EditCounts words;
  EditCounts visemes;
  int sar = 0;
  std::optional<double> reference_perplexity;
  std::optional<double> hypothesis_perplexity;
  RowStatus status = RowStatus::kOk;
  std::string error;
};

// Corpus rates pool counts across rows (sum of edits over sum of N), they
// are not averages of per-sentence rates. Rates are percentages.
struct MetricsReport {
  std::vector<SentenceRow> rows;
  EditCounts chars;
  EditCounts words;
  EditCounts visemes;
  std::size_t scored = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  double cer = 0.0;
  double wer = 0.0;
  double ver = 0.0;
  double sar = 0.0;
};

// Throws ContractError on no rows and UndefinedRateError when nothing is
// scorable.
MetricsReport aggregate(std::vector<SentenceRow> rows);

// Aligned text: per-sentence rows followed by the corpus summary line.
std::string format_table(const MetricsReport& report, std::string_view dataset, int scenario);
// One JSON object per row, then one aggregate object.
std::string format_records(const MetricsReport& report, std::string_view dataset, int scenario);

}  // namespace v2w

#endif  // V2W_METRICS_H_
