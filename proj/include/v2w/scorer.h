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

#ifndef V2W_SCORER_H_
#define V2W_SCORER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "v2w/lexicon.h"

namespace v2w {

// Joint log-probability of a word sequence and the quantities derived from
// it. Natural logs throughout: entropy is in nats per word and
// perplexity = exp(entropy) = P(w_1..w_N)^(-1/N).
struct ScoredText {
  Sentence words;
  double log_prob = 0.0;
  double entropy = 0.0;
  double perplexity = 1.0;

  // Throws ContractError on an empty sentence.
  static ScoredText from_log_prob(Sentence words, double log_prob);
};

double perplexity_from_log_prob(double log_prob, std::size_t word_count);

// Sentence perplexity backend. Implementations must be deterministic; the
// decoder relies only on batch_perplexity.
class Scorer {
 public:
  virtual ~Scorer() = default;

  // One perplexity per sentence, in order. An empty batch or an empty
  // sentence is a ContractError; a failing element fails the whole batch.
  virtual std::vector<double> batch_perplexity(std::span<const Sentence> sentences) = 0;

  double perplexity(const Sentence& words);
};

// Add-k smoothed n-gram model over a closed vocabulary plus an UNK class.
//
// Each sentence is padded with order-1 begin markers and one end marker; the
// end marker is a vocabulary member for counting and normalization. Sentence
// scores cover the words only (no end-of-sentence term), so a prefix and a
// complete sentence are scored on the same footing:
//
//   P(w | ctx) = (c(ctx, w) + k) / (c(ctx) + k * (|V| + 1))
//
// where |V| counts the observed words and the end marker, and +1 is UNK.
class NgramModel final : public Scorer {
 public:
  static constexpr std::string_view kBegin = "<s>";
  static constexpr std::string_view kEnd = "</s>";
  static constexpr std::string_view kUnknown = "<unk>";

  // Corpus sentences end at newlines and at '.', '!' or '?' characters;
  // words are normalized like decoder input. Throws ContractError on an
  // empty corpus, order < 1 or k <= 0.
  static NgramModel train(std::string_view corpus, int order = 3, double k = 0.01);

  // Throws ParseError.
  static NgramModel parse(std::string_view text, const std::string& source = "<model>");
  std::string serialize() const;

  int order() const { return order_; }
  double k() const { return k_; }
  // |V|: observed words plus the end marker (UNK excluded).
  std::size_t vocab_size() const { return words_.size() - kFirstWordId; }
  bool in_vocab(std::string_view word) const;
  std::vector<std::string> vocabulary() const;

  // ln P(word | context). Context is the preceding words, most recent last;
  // only the last order-1 are used, padded with begin markers. "</s>" names
  // the end marker; out-of-vocabulary words score as UNK.
  double log_prob(std::string_view word, std::span<const std::string> context) const;

  ScoredText score(const Sentence& words) const;
  std::vector<double> batch_perplexity(std::span<const Sentence> sentences) override;

  // Every context (order-1 words, begin markers as "<s>") seen in training.
  std::vector<Sentence> observed_contexts() const;

 private:
  using WordId = std::uint32_t;
  static constexpr WordId kUnkId = 0;
  static constexpr WordId kBeginId = 1;
  static constexpr WordId kEndId = 2;
  static constexpr WordId kFirstWordId = 2;  // end marker is the first vocabulary member

  struct ContextCounts {
    std::uint64_t total = 0;
    std::unordered_map<WordId, std::uint64_t> next;
  };

  NgramModel(int order, double k);
  WordId intern(const std::string& word);
  WordId lookup(std::string_view word) const;
  std::string context_key(std::span<const WordId> context) const;
  double log_prob_ids(WordId word, std::span<const WordId> context) const;
  void add_sentence(const Sentence& sentence);

  int order_;
  double k_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::unordered_map<std::string, ContextCounts> counts_;
};

}  // namespace v2w

#endif  // V2W_SCORER_H_
