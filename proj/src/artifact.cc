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

#include "v2w/artifact.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "v2w/error.h"

namespace v2w {
namespace {

std::string serialize_index(const InverseIndex& index) {
  std::string out = "keys " + std::to_string(index.size()) + "\n";
  index.for_each_entry([&](const VisemeCluster& key, const std::vector<std::string>& words) {
    out += format_visemes(key);
    out += '\t';
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out += ' ';
      out += words[i];
    }
    out += '\n';
  });
  return out;
}

class LineReader {
 public:
  LineReader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  std::string_view next() {
    if (pos_ >= text_.size()) fail("unexpected end of file");
    auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) nl = text_.size();
    auto line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    ++line_;
    return line;
  }

  std::string_view expect_prefix(std::string_view prefix) {
    auto line = next();
    if (!line.starts_with(prefix)) fail("expected '" + std::string(prefix) + "'");
    return line.substr(prefix.size());
  }

  std::size_t expect_count(std::string_view prefix) {
    auto rest = expect_prefix(prefix);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) fail("bad count");
    return n;
  }

  std::size_t position() const { return pos_; }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(source_, line_, message); }

 private:
  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

Artifact build_artifact(std::string_view dictionary_text, std::optional<std::string_view> frequency_text,
                        std::optional<std::string_view> viseme_map_text) {
  Artifact a;
  a.lexicon = parse_pronouncing_dict(dictionary_text, "dictionary");
  a.dictionary_digest = digest(dictionary_text);
  if (frequency_text) {
    a.ignored_ranks = load_frequency_ranks(*frequency_text, a.lexicon, "frequency");
    a.frequency_digest = digest(*frequency_text);
  }
  if (viseme_map_text) {
    a.map = VisemeMap::parse(*viseme_map_text, "viseme-map");
    a.viseme_map_digest = digest(*viseme_map_text);
  }
  a.index = InverseIndex::build(a.lexicon, a.map);
  return a;
}

std::string serialize_artifact(const Artifact& a) {
  std::string out;
  out += std::string(kArtifactMagic) + " " + std::to_string(kArtifactVersion) + "\n";
  out += "source dictionary " + a.dictionary_digest + "\n";
  out += "source frequency " + a.frequency_digest + "\n";
  out += "source viseme-map " + a.viseme_map_digest + "\n";
  out += "ignored-ranks " + std::to_string(a.ignored_ranks) + "\n";
  out += "map\n" + a.map.serialize();
  out += "words " + std::to_string(a.lexicon.size()) + "\n";
  for (const auto& [word, entry] : a.lexicon.entries()) {
    out += word;
    out += '\t';
    out += entry.rank ? std::to_string(*entry.rank) : "-";
    out += '\t';
    for (std::size_t i = 0; i < entry.pronunciations.size(); ++i) {
      if (i) out += '|';
      const auto& pron = entry.pronunciations[i];
      for (std::size_t j = 0; j < pron.size(); ++j) {
        if (j) out += ' ';
        out += to_string(pron[j]);
      }
    }
    out += '\n';
  }
  out += serialize_index(a.index);
  out += "end\n";
  return out;
}

Artifact parse_artifact(std::string_view text, const std::string& source) {
  LineReader in(text, source);
  Artifact a;
  {
    auto header = in.next();
    if (header != std::string(kArtifactMagic) + " " + std::to_string(kArtifactVersion)) {
      in.fail("not a v2w-index version " + std::to_string(kArtifactVersion) + " file");
    }
  }
  a.dictionary_digest = std::string(in.expect_prefix("source dictionary "));
  a.frequency_digest = std::string(in.expect_prefix("source frequency "));
  a.viseme_map_digest = std::string(in.expect_prefix("source viseme-map "));
  a.ignored_ranks = in.expect_count("ignored-ranks ");
  if (in.next() != "map") in.fail("expected 'map'");
  std::string map_text;
  for (std::size_t i = 0; i < kPhonemeCount; ++i) {
    map_text += in.next();
    map_text += '\n';
  }
  a.map = VisemeMap::parse(map_text, source + " (map)");

  const std::size_t words = in.expect_count("words ");
  for (std::size_t i = 0; i < words; ++i) {
    auto line = in.next();
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) in.fail("expected WORD<TAB>rank<TAB>pronunciations");
    std::string word(line.substr(0, t1));
    auto rank_field = line.substr(t1 + 1, t2 - t1 - 1);
    auto prons = line.substr(t2 + 1);
    while (!prons.empty()) {
      auto bar = prons.find('|');
      auto one = prons.substr(0, bar);
      Pronunciation pron;
      std::istringstream syms{std::string(one)};
      std::string sym;
      while (syms >> sym) {
        auto p = parse_phoneme(sym);
        if (!p) in.fail("unknown phoneme '" + sym + "'");
        pron.push_back(*p);
      }
      if (pron.empty()) in.fail("empty pronunciation for " + word);
      a.lexicon.add(word, std::move(pron));
      prons = bar == std::string_view::npos ? std::string_view{} : prons.substr(bar + 1);
    }
    if (!a.lexicon.contains(word)) in.fail("word " + word + " has no pronunciation");
    if (rank_field != "-") {
      std::uint32_t rank = 0;
      auto [ptr, ec] = std::from_chars(rank_field.data(), rank_field.data() + rank_field.size(), rank);
      if (ec != std::errc{} || ptr != rank_field.data() + rank_field.size()) in.fail("bad rank");
      a.lexicon.set_rank(word, rank);
    }
  }
  a.index = InverseIndex::build(a.lexicon, a.map);

  const auto keys_begin = in.position();
  const std::size_t keys = in.expect_count("keys ");
  for (std::size_t i = 0; i < keys; ++i) in.next();
  const auto keys_end = in.position();
  if (in.next() != "end") in.fail("expected 'end'");
  if (text.substr(keys_begin, keys_end - keys_begin) != serialize_index(a.index)) {
    in.fail("stored key section does not match the index rebuilt from the lexicon");
  }
  return a;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace v2w
