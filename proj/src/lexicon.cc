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

#include "v2w/lexicon.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_set>

#include "v2w/error.h"

namespace v2w {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// "WORD(2)" -> "WORD"
std::string_view strip_variant(std::string_view headword) {
  if (headword.size() < 3 || headword.back() != ')') return headword;
  auto open = headword.rfind('(');
  if (open == std::string_view::npos || open == 0 || open + 2 > headword.size() - 1) {
    return headword;
  }
  for (auto i = open + 1; i + 1 < headword.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(headword[i]))) return headword;
  }
  return headword.substr(0, open);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
  }
}

std::vector<std::string_view> split_blanks(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

void Lexicon::add(const std::string& word, Pronunciation pronunciation) {
  auto& prons = entries_[word].pronunciations;
  if (std::find(prons.begin(), prons.end(), pronunciation) == prons.end()) {
    prons.push_back(std::move(pronunciation));
  }
}

void Lexicon::set_rank(const std::string& word, std::uint32_t rank) {
  auto it = entries_.find(word);
  if (it != entries_.end()) it->second.rank = rank;
}

const Lexicon::Entry* Lexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> Lexicon::rank(std::string_view word) const {
  const Entry* e = find(word);
  return e ? e->rank : std::nullopt;
}

Lexicon parse_pronouncing_dict(std::string_view text, const std::string& source) {
  Lexicon lexicon;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.starts_with(";;;")) return;
    if (auto hash = line.find(" #"); hash != std::string_view::npos) line = line.substr(0, hash);
    auto fields = split_blanks(line);
    if (fields.empty()) return;
    if (fields.size() < 2) {
      throw ParseError(source, line_no, "entry '" + std::string(fields[0]) + "' has no phonemes");
    }
    Pronunciation pron;
    pron.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::string_view sym = fields[i];
      while (!sym.empty() && std::isdigit(static_cast<unsigned char>(sym.back()))) sym.remove_suffix(1);
      auto p = parse_phoneme(upper(sym));
      if (!p) {
        throw ParseError(source, line_no, "unknown phoneme '" + std::string(fields[i]) + "'");
      }
      pron.push_back(*p);
    }
    lexicon.add(upper(strip_variant(fields[0])), std::move(pron));
  });
  return lexicon;
}

std::size_t load_frequency_ranks(std::string_view text, Lexicon& lexicon, const std::string& source) {
  std::size_t ignored = 0;
  std::unordered_set<std::string> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = split_blanks(line);
    if (fields.empty()) return;
    if (fields.size() != 2) throw ParseError(source, line_no, "expected rank<TAB>word");
    std::uint32_t rank = 0;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), rank);
    if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size() || rank == 0) {
      throw ParseError(source, line_no, "rank '" + std::string(fields[0]) + "' is not a positive integer");
    }
    std::string word = upper(fields[1]);
    if (!seen.insert(word).second) {
      throw ParseError(source, line_no, "duplicate rank for word '" + word + "'");
    }
    if (lexicon.contains(word)) {
      lexicon.set_rank(word, rank);
    } else {
      ++ignored;
    }
  });
  return ignored;
}

Sentence normalize_sentence(std::string_view raw) {
  // Typographic apostrophe (U+2019) counts as an apostrophe.
  std::string text(raw);
  for (auto pos = text.find("\xE2\x80\x99"); pos != std::string::npos;
       pos = text.find("\xE2\x80\x99", pos)) {
    text.replace(pos, 3, "'");
  }
  Sentence words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (std::isalnum(c) || ch == '\'' || c >= 0x80) {
      current += static_cast<char>(std::toupper(c));
    }
  }
  flush();
  return words;
}

std::string join_words(const Sentence& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::vector<VisemeCluster> word_to_clusters(std::string_view word, const Lexicon& lexicon,
                                            const VisemeMap& map) {
  const std::string key = upper(word);
  const auto* entry = lexicon.find(key);
  if (!entry) throw OutOfVocabularyError(key);
  std::vector<VisemeCluster> out;
  for (const auto& pron : entry->pronunciations) {
    VisemeCluster cluster;
    cluster.reserve(pron.size());
    for (Phoneme p : pron) cluster.push_back(map(p));
    if (std::find(out.begin(), out.end(), cluster) == out.end()) out.push_back(std::move(cluster));
  }
  return out;
}

std::vector<VisemeCluster> sentence_to_clusters(std::string_view text, const Lexicon& lexicon,
                                                const VisemeMap& map) {
  std::vector<VisemeCluster> out;
  for (const auto& word : normalize_sentence(text)) {
    const auto* entry = lexicon.find(word);
    if (!entry) throw OutOfVocabularyError(word);
    VisemeCluster cluster;
    for (Phoneme p : entry->pronunciations.front()) cluster.push_back(map(p));
    out.push_back(std::move(cluster));
  }
  return out;
}

VisemeSequence sentence_to_visemes(std::string_view text, const Lexicon& lexicon,
                                   const VisemeMap& map) {
  VisemeSequence out;
  for (const auto& cluster : sentence_to_clusters(text, lexicon, map)) {
    out.insert(out.end(), cluster.begin(), cluster.end());
  }
  return out;
}

}  // namespace v2w
