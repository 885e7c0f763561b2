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

#include "v2w/viseme.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "v2w/error.h"

namespace v2w {
namespace {

constexpr std::array<std::string_view, kPhonemeCount> kPhonemeNames = {
    "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH", "EH", "ER", "EY",
    "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M",  "N",  "NG", "OW", "OY",
    "P",  "R",  "S",  "SH", "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH",
};

constexpr std::array<std::string_view, kVisemeCount> kVisemeNames = {
    "p", "t", "k", "ch", "f", "w", "iy", "ey", "aa", "ah", "ao", "uh", "er", "s",
};

struct MapRow {
  Viseme viseme;
  std::initializer_list<Phoneme> phonemes;
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Phoneme p) { return kPhonemeNames[static_cast<std::size_t>(p)]; }

std::optional<Phoneme> parse_phoneme(std::string_view symbol) {
  for (std::size_t i = 0; i < kPhonemeNames.size(); ++i) {
    if (kPhonemeNames[i] == symbol) return static_cast<Phoneme>(i);
  }
  return std::nullopt;
}

std::array<Phoneme, kPhonemeCount> all_phonemes() {
  std::array<Phoneme, kPhonemeCount> out{};
  for (std::size_t i = 0; i < kPhonemeCount; ++i) out[i] = static_cast<Phoneme>(i);
  return out;
}

std::string_view to_string(Viseme v) { return kVisemeNames[static_cast<std::size_t>(v)]; }

VisemeKind kind_of(Viseme v) {
  switch (v) {
    case Viseme::P:
    case Viseme::T:
    case Viseme::K:
    case Viseme::CH:
    case Viseme::F:
    case Viseme::W:
      return VisemeKind::kConsonant;
    case Viseme::SIL:
      return VisemeKind::kSilent;
    default:
      return VisemeKind::kVowel;
  }
}

std::optional<Viseme> parse_viseme(std::string_view label) {
  const std::string l = lower(label);
  if (l == "sil") return Viseme::SIL;
  for (std::size_t i = 0; i < kVisemeNames.size(); ++i) {
    if (kVisemeNames[i] == l) return static_cast<Viseme>(i);
  }
  return std::nullopt;
}

std::string format_visemes(std::span<const Viseme> visemes) {
  std::string out;
  for (Viseme v : visemes) {
    if (!out.empty()) out += ' ';
    out += to_string(v);
  }
  return out;
}

VisemeSequence parse_visemes(std::string_view text) {
  VisemeSequence out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    auto v = parse_viseme(token);
    if (!v) throw UnknownVisemeError(token);
    out.push_back(*v);
  }
  return out;
}

VisemeMap VisemeMap::builtin() {
  using P = Phoneme;
  // AY goes to ah, so TIME is t-ah-p and RIGHTS is w-ah-t-t.
  // data/viseme_map_strict.tsv keeps AY in aa.
  const MapRow rows[] = {
      {Viseme::P, {P::B, P::P, P::M}},
      {Viseme::T, {P::D, P::T, P::S, P::Z, P::TH, P::DH}},
      {Viseme::K, {P::G, P::K, P::N, P::NG, P::L, P::Y, P::HH}},
      {Viseme::CH, {P::JH, P::CH, P::SH, P::ZH}},
      {Viseme::F, {P::F, P::V}},
      {Viseme::W, {P::R, P::W}},
      {Viseme::IY, {P::IY, P::IH}},
      {Viseme::EY, {P::EH, P::EY, P::AE}},
      {Viseme::AA, {P::AA, P::AW}},
      {Viseme::AH, {P::AH, P::AY}},
      {Viseme::AO, {P::AO, P::OY, P::OW}},
      {Viseme::UH, {P::UH, P::UW}},
      {Viseme::ER, {P::ER}},
  };
  VisemeMap map;
  for (const auto& row : rows) {
    for (Phoneme p : row.phonemes) map.table_[static_cast<std::size_t>(p)] = row.viseme;
  }
  return map;
}

VisemeMap VisemeMap::parse(std::string_view text, const std::string& source) {
  VisemeMap map;
  std::array<bool, kPhonemeCount> seen{};
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string phoneme, viseme, extra;
    if (!(fields >> phoneme >> viseme) || (fields >> extra)) {
      throw ParseError(source, line_no, "expected PHONEME<TAB>viseme");
    }
    auto p = parse_phoneme(phoneme);
    if (!p) throw ParseError(source, line_no, "unknown phoneme '" + phoneme + "'");
    auto v = parse_viseme(viseme);
    if (!v) throw ParseError(source, line_no, "unknown viseme class '" + viseme + "'");
    if (*v == Viseme::SIL) {
      throw ParseError(source, line_no, "phoneme " + phoneme + " cannot map to the silent viseme");
    }
    auto idx = static_cast<std::size_t>(*p);
    if (seen[idx]) throw ParseError(source, line_no, "phoneme " + phoneme + " mapped twice");
    seen[idx] = true;
    map.table_[idx] = *v;
  }
  for (std::size_t i = 0; i < kPhonemeCount; ++i) {
    if (!seen[i]) {
      throw ParseError(source, line_no, "phoneme " + std::string(kPhonemeNames[i]) + " is unmapped");
    }
  }
  return map;
}

Viseme VisemeMap::to_viseme(std::string_view phoneme_symbol) const {
  auto p = parse_phoneme(phoneme_symbol);
  if (!p) throw UnknownPhonemeError(std::string(phoneme_symbol));
  return (*this)(*p);
}

std::string VisemeMap::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < kPhonemeCount; ++i) {
    out += kPhonemeNames[i];
    out += '\t';
    out += to_string(table_[i]);
    out += '\n';
  }
  return out;
}

}  // namespace v2w
