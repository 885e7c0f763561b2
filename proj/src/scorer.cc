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

#include "v2w/scorer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

#include "v2w/error.h"

namespace v2w {

ScoredText ScoredText::from_log_prob(Sentence words, double log_prob) {
  if (words.empty()) throw ContractError("cannot score an empty sentence");
  ScoredText s;
  const auto n = static_cast<double>(words.size());
  s.words = std::move(words);
  s.log_prob = log_prob;
  s.entropy = -log_prob / n;
  s.perplexity = std::exp(s.entropy);
  return s;
}

double perplexity_from_log_prob(double log_prob, std::size_t word_count) {
  if (word_count == 0) throw ContractError("perplexity of an empty sentence is undefined");
  return std::exp(-log_prob / static_cast<double>(word_count));
}

double Scorer::perplexity(const Sentence& words) {
  return batch_perplexity(std::span<const Sentence>(&words, 1)).front();
}

NgramModel::NgramModel(int order, double k) : order_(order), k_(k) {
  words_ = {std::string(kUnknown), std::string(kBegin), std::string(kEnd)};
  for (WordId i = 0; i < words_.size(); ++i) ids_.emplace(words_[i], i);
}

NgramModel::WordId NgramModel::intern(const std::string& word) {
  auto [it, inserted] = ids_.emplace(word, static_cast<WordId>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

NgramModel::WordId NgramModel::lookup(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end() || it->second == kBeginId) return kUnkId;
  return it->second;
}

bool NgramModel::in_vocab(std::string_view word) const {
  auto id = lookup(word);
  return id != kUnkId;
}

std::vector<std::string> NgramModel::vocabulary() const {
  return {words_.begin() + kFirstWordId, words_.end()};
}

std::string NgramModel::context_key(std::span<const WordId> context) const {
  std::string key(context.size() * sizeof(WordId), '\0');
  std::memcpy(key.data(), context.data(), key.size());
  return key;
}

void NgramModel::add_sentence(const Sentence& sentence) {
  std::vector<WordId> ids(static_cast<std::size_t>(order_ - 1), kBeginId);
  for (const auto& w : sentence) ids.push_back(intern(w));
  ids.push_back(kEndId);
  const auto ctx_len = static_cast<std::size_t>(order_ - 1);
  for (std::size_t i = ctx_len; i < ids.size(); ++i) {
    auto& c = counts_[context_key(std::span<const WordId>(ids).subspan(i - ctx_len, ctx_len))];
    ++c.total;
    ++c.next[ids[i]];
  }
}

NgramModel NgramModel::train(std::string_view corpus, int order, double k) {
  if (order < 1) throw ContractError("n-gram order must be at least 1");
  if (!(k > 0.0)) throw ContractError("smoothing constant k must be positive");
  NgramModel model(order, k);
  std::string current;
  bool any = false;
  auto flush = [&] {
    auto words = normalize_sentence(current);
    current.clear();
    if (words.empty()) return;
    model.add_sentence(words);
    any = true;
  };
  for (char c : corpus) {
    if (c == '\n' || c == '.' || c == '!' || c == '?') {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  if (!any) throw ContractError("training corpus contains no sentences");
  return model;
}

double NgramModel::log_prob_ids(WordId word, std::span<const WordId> context) const {
  const double classes = static_cast<double>(words_.size() - 1);  // |V| + UNK
  auto it = counts_.find(context_key(context));
  double count = 0.0, total = 0.0;
  if (it != counts_.end()) {
    total = static_cast<double>(it->second.total);
    auto w = it->second.next.find(word);
    if (w != it->second.next.end()) count = static_cast<double>(w->second);
  }
  return std::log(count + k_) - std::log(total + k_ * classes);
}

double NgramModel::log_prob(std::string_view word, std::span<const std::string> context) const {
  const auto ctx_len = static_cast<std::size_t>(order_ - 1);
  std::vector<WordId> ids(ctx_len, kBeginId);
  const std::size_t take = std::min(ctx_len, context.size());
  for (std::size_t i = 0; i < take; ++i) {
    const auto& w = context[context.size() - take + i];
    ids[ctx_len - take + i] = w == kBegin ? kBeginId : lookup(w);
  }
  return log_prob_ids(lookup(word), ids);
}

ScoredText NgramModel::score(const Sentence& words) const {
  if (words.empty()) throw ContractError("cannot score an empty sentence");
  const auto ctx_len = static_cast<std::size_t>(order_ - 1);
  std::vector<WordId> ids(ctx_len, kBeginId);
  for (const auto& w : words) ids.push_back(lookup(w));
  double lp = 0.0;
  for (std::size_t i = ctx_len; i < ids.size(); ++i) {
    lp += log_prob_ids(ids[i], std::span<const WordId>(ids).subspan(i - ctx_len, ctx_len));
  }
  return ScoredText::from_log_prob(words, lp);
}

std::vector<double> NgramModel::batch_perplexity(std::span<const Sentence> sentences) {
  if (sentences.empty()) throw ContractError("empty batch");
  std::vector<double> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(score(s).perplexity);
  return out;
}

std::vector<Sentence> NgramModel::observed_contexts() const {
  std::vector<Sentence> out;
  out.reserve(counts_.size());
  for (const auto& [key, _] : counts_) {
    Sentence ctx;
    for (std::size_t off = 0; off < key.size(); off += sizeof(WordId)) {
      WordId id;
      std::memcpy(&id, key.data() + off, sizeof id);
      ctx.push_back(words_[id]);
    }
    out.push_back(std::move(ctx));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string NgramModel::serialize() const {
  std::string out = "v2w-ngram 1\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", k_);
  out += "order " + std::to_string(order_) + "\n";
  out += std::string("k ") + buf + "\n";
  out += "vocab " + std::to_string(words_.size() - 3) + "\n";
  for (std::size_t i = 3; i < words_.size(); ++i) out += words_[i] + "\n";

  // Deterministic order: contexts and successors sorted by id.
  std::map<std::vector<WordId>, const ContextCounts*> sorted;
  for (const auto& [key, counts] : counts_) {
    std::vector<WordId> ids(key.size() / sizeof(WordId));
    std::memcpy(ids.data(), key.data(), key.size());
    sorted.emplace(std::move(ids), &counts);
  }
  out += "contexts " + std::to_string(sorted.size()) + "\n";
  for (const auto& [ids, counts] : sorted) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(ids[i]);
    }
    out += '\t';
    std::map<WordId, std::uint64_t> next(counts->next.begin(), counts->next.end());
    bool first = true;
    for (const auto& [w, c] : next) {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(w) + ":" + std::to_string(c);
    }
    out += '\n';
  }
  out += "end\n";
  return out;
}

NgramModel NgramModel::parse(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string& {
    if (!std::getline(in, line)) throw ParseError(source, line_no, "unexpected end of file");
    ++line_no;
    return line;
  };
  auto field = [&](std::string_view prefix) {
    auto& l = next();
    if (!l.starts_with(prefix)) throw ParseError(source, line_no, "expected '" + std::string(prefix) + "'");
    return l.substr(prefix.size());
  };
  auto to_size = [&](const std::string& s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(source, line_no, "bad number '" + s + "'");
    return v;
  };

  if (next() != "v2w-ngram 1") throw ParseError(source, line_no, "not a v2w-ngram version 1 file");
  const auto order = static_cast<int>(to_size(field("order ")));
  const double k = std::strtod(field("k ").c_str(), nullptr);
  if (order < 1 || !(k > 0.0)) throw ParseError(source, line_no, "invalid order or k");
  NgramModel model(order, k);
  const auto vocab = to_size(field("vocab "));
  for (std::size_t i = 0; i < vocab; ++i) {
    auto& w = next();
    if (w.empty() || model.ids_.count(w)) throw ParseError(source, line_no, "bad vocabulary entry");
    model.intern(w);
  }
  const auto contexts = to_size(field("contexts "));
  const auto max_id = model.words_.size();
  for (std::size_t i = 0; i < contexts; ++i) {
    auto& l = next();
    auto tab = l.find('\t');
    if (tab == std::string::npos) throw ParseError(source, line_no, "expected context<TAB>counts");
    std::vector<WordId> ids;
    std::istringstream ctx(l.substr(0, tab));
    std::string tok;
    while (ctx >> tok) ids.push_back(static_cast<WordId>(to_size(tok)));
    if (ids.size() != static_cast<std::size_t>(order - 1)) throw ParseError(source, line_no, "context length");
    auto& counts = model.counts_[model.context_key(ids)];
    std::istringstream succ(l.substr(tab + 1));
    while (succ >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError(source, line_no, "expected id:count");
      auto id = to_size(tok.substr(0, colon));
      auto c = to_size(tok.substr(colon + 1));
      if (id >= max_id || id == kBeginId || id == kUnkId) throw ParseError(source, line_no, "bad word id");
      counts.next[static_cast<WordId>(id)] += c;
      counts.total += c;
    }
  }
  if (next() != "end") throw ParseError(source, line_no, "expected 'end'");
  return model;
}

}  // namespace v2w
