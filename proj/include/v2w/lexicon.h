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

#ifndef V2W_LEXICON_H_
#define V2W_LEXICON_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "v2w/viseme.h"

namespace v2w {

using Pronunciation = std::vector<Phoneme>;
using Sentence = std::vector<std::string>;

// Uppercase headword -> pronunciations (dictionary order) and an optional
// frequency rank (1 = most frequent).
class Lexicon {
 public:
  struct Entry {
    std::vector<Pronunciation> pronunciations;
    std::optional<std::uint32_t> rank;
  };

  // Appends a pronunciation; identical duplicates are dropped.
  void add(const std::string& word, Pronunciation pronunciation);
  void set_rank(const std::string& word, std::uint32_t rank);

  bool contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }
  const Entry* find(std::string_view word) const;
  std::optional<std::uint32_t> rank(std::string_view word) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Entry, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

// CMU dictionary text. Accepts both the classic layout (`WORD  PH1 PH2`,
// `;;;` comments, `WORD(1)`) and the lowercase github layout with trailing
// `# comment`s. Stress digits are stripped. Throws ParseError.
Lexicon parse_pronouncing_dict(std::string_view text, const std::string& source = "<dictionary>");

// Lines of `rank<TAB>word`. Attaches ranks in place and returns the number of
// words that were not in the lexicon. Throws ParseError on a bad rank or on a
// word listed twice.
std::size_t load_frequency_ranks(std::string_view text, Lexicon& lexicon,
                                 const std::string& source = "<frequency>");

// Uppercase, keep apostrophes, drop all other punctuation, split on blanks.
Sentence normalize_sentence(std::string_view text);
std::string join_words(const Sentence& words);

// One cluster per distinct pronunciation. Throws OutOfVocabularyError.
std::vector<VisemeCluster> word_to_clusters(std::string_view word, const Lexicon& lexicon,
                                            const VisemeMap& map);

// First pronunciation of each token, one cluster per word.
std::vector<VisemeCluster> sentence_to_clusters(std::string_view text, const Lexicon& lexicon,
                                                const VisemeMap& map);
// Same, concatenated (word boundaries dropped).
VisemeSequence sentence_to_visemes(std::string_view text, const Lexicon& lexicon,
                                   const VisemeMap& map);

}  // namespace v2w

#endif  // V2W_LEXICON_H_
