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

#include "v2w/metrics.h"

#include <cstdio>

#include "json.hpp"
#include "v2w/error.h"
#include "v2w/lexicon.h"

namespace v2w {
namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string_view status_name(RowStatus s) {
  switch (s) {
    case RowStatus::kOk:
      return "ok";
    case RowStatus::kSkipped:
      return "skipped";
    case RowStatus::kFailed:
      return "failed";
  }
  return "?";
}

nlohmann::json counts_json(const EditCounts& c) {
  return {{"S", c.substitutions}, {"D", c.deletions}, {"I", c.insertions}, {"N", c.reference_length}};
}

nlohmann::json rate_or_null(const EditCounts& c) {
  if (c.reference_length == 0) return nullptr;
  return 100.0 * error_rate(c);
}

}  // namespace

double error_rate(const EditCounts& counts) {
  if (counts.reference_length == 0) throw UndefinedRateError("error rate with an empty reference");
  return static_cast<double>(counts.edits()) / static_cast<double>(counts.reference_length);
}

std::vector<std::string> word_tokens(std::string_view sentence) { return normalize_sentence(sentence); }

std::string char_tokens(std::string_view sentence, bool include_spaces) {
  std::string out;
  for (const auto& w : normalize_sentence(sentence)) {
    if (include_spaces && !out.empty()) out += ' ';
    out += w;
  }
  return out;
}

int sar(std::string_view reference, std::string_view hypothesis) {
  return normalize_sentence(reference) == normalize_sentence(hypothesis) ? 1 : 0;
}

MetricsReport aggregate(std::vector<SentenceRow> rows) {
  if (rows.empty()) throw ContractError("cannot aggregate an empty set of rows");
  MetricsReport r;
  std::size_t correct = 0;
  for (const auto& row : rows) {
    if (row.status == RowStatus::kSkipped) {
      ++r.skipped;
      continue;
    }
    if (row.status == RowStatus::kFailed) ++r.failed;
    ++r.scored;
    r.chars += row.chars;
    r.words += row.words;
    r.visemes += row.visemes;
    correct += static_cast<std::size_t>(row.sar);
  }
  if (r.scored == 0) throw UndefinedRateError("every row was skipped");
  r.cer = 100.0 * error_rate(r.chars);
  r.wer = 100.0 * error_rate(r.words);
  r.ver = r.visemes.reference_length ? 100.0 * error_rate(r.visemes) : 0.0;
  r.sar = 100.0 * static_cast<double>(correct) / static_cast<double>(r.scored);
  r.rows = std::move(rows);
  return r;
}

std::string format_table(const MetricsReport& report, std::string_view dataset, int scenario) {
  std::size_t ref_w = 16, hyp_w = 18;
  for (const auto& row : report.rows) {
    ref_w = std::max(ref_w, row.reference.size());
    hyp_w = std::max(hyp_w, row.hypothesis.size());
  }
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  auto ppl = [](const std::optional<double>& p) { return p ? percent(*p) : std::string("-"); };

  std::string out;
  out += pad("Actual Sentence", ref_w) + "  " + pad("Perplexity", 10) + "  " +
         pad("Predicted Sentence", hyp_w) + "  " + pad("Perplexity", 10) + "  SAR\n";
  for (const auto& row : report.rows) {
    std::string hyp = row.status == RowStatus::kOk ? row.hypothesis : "[" + std::string(status_name(row.status)) + "] " + row.error;
    out += pad(row.reference, ref_w) + "  " + pad(ppl(row.reference_perplexity), 10) + "  " + pad(hyp, hyp_w) +
           "  " + pad(ppl(row.hypothesis_perplexity), 10) + "  " +
           (row.status == RowStatus::kSkipped ? "-" : std::to_string(row.sar)) + "\n";
  }
  out += "\n";
  out += "Dataset  Sentences  Scenario  CER(%)  WER(%)  VER(%)  SAR(%)\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-7s  %9zu  %8d  %6s  %6s  %6s  %6s\n", std::string(dataset).c_str(),
                report.scored, scenario, percent(report.cer).c_str(), percent(report.wer).c_str(),
                percent(report.ver).c_str(), percent(report.sar).c_str());
  out += line;
  if (report.skipped || report.failed) {
    out += "(" + std::to_string(report.skipped) + " skipped, " + std::to_string(report.failed) + " failed)\n";
  }
  return out;
}

std::string format_records(const MetricsReport& report, std::string_view dataset, int scenario) {
  std::string out;
  for (const auto& row : report.rows) {
    nlohmann::json j = {
        {"type", "row"},
        {"id", row.id},
        {"status", status_name(row.status)},
        {"reference", row.reference},
        {"hypothesis", row.hypothesis},
    };
    if (!row.error.empty()) j["error"] = row.error;
    if (row.status != RowStatus::kSkipped) {
      j["cer"] = rate_or_null(row.chars);
      j["wer"] = rate_or_null(row.words);
      j["ver"] = rate_or_null(row.visemes);
      j["sar"] = row.sar;
      j["counts"] = {{"char", counts_json(row.chars)},
                     {"word", counts_json(row.words)},
                     {"viseme", counts_json(row.visemes)}};
    }
    j["reference_perplexity"] = row.reference_perplexity ? nlohmann::json(*row.reference_perplexity) : nullptr;
    j["hypothesis_perplexity"] = row.hypothesis_perplexity ? nlohmann::json(*row.hypothesis_perplexity) : nullptr;
    out += j.dump() + "\n";
  }
  nlohmann::json agg = {
      {"type", "aggregate"},  {"dataset", dataset},          {"scenario", scenario},
      {"sentences", report.rows.size()}, {"scored", report.scored}, {"skipped", report.skipped},
      {"failed", report.failed}, {"cer", report.cer},        {"wer", report.wer},
      {"ver", report.ver},    {"sar", report.sar},
      {"counts",
       {{"char", counts_json(report.chars)}, {"word", counts_json(report.words)}, {"viseme", counts_json(report.visemes)}}},
  };
  out += agg.dump() + "\n";
  return out;
}

}  // namespace v2w
