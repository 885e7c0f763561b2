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

#ifndef V2W_VISEME_H_
#define V2W_VISEME_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace v2w {

// The 39 ARPAbet phonemes of the CMU pronouncing dictionary, stress removed.
enum class Phoneme : std::uint8_t {
  AA, AE, AH, AO, AW, AY, B, CH, D, DH, EH, ER, EY, F, G, HH, IH, IY, JH, K,
  L, M, N, NG, OW, OY, P, R, S, SH, T, TH, UH, UW, V, W, Y, Z, ZH,
};
inline constexpr std::size_t kPhonemeCount = 39;

std::string_view to_string(Phoneme p);
// Exact symbol match ("AH", not "AH0").
std::optional<Phoneme> parse_phoneme(std::string_view symbol);
std::array<Phoneme, kPhonemeCount> all_phonemes();

// Viseme classes: six consonant, seven vowel, one silent.
enum class Viseme : std::uint8_t { P, T, K, CH, F, W, IY, EY, AA, AH, AO, UH, ER, SIL };
inline constexpr std::size_t kVisemeCount = 14;

enum class VisemeKind { kConsonant, kVowel, kSilent };

// Lowercase class label; the silent viseme prints as "s".
std::string_view to_string(Viseme v);
VisemeKind kind_of(Viseme v);
// Accepts the class labels plus "sil" as an alias of "s". Case-insensitive.
std::optional<Viseme> parse_viseme(std::string_view label);

using VisemeCluster = std::vector<Viseme>;
using VisemeSequence = std::vector<Viseme>;

// "w ah t"
std::string format_visemes(std::span<const Viseme> visemes);
// Whitespace-separated labels. Throws UnknownVisemeError.
VisemeSequence parse_visemes(std::string_view text);

// Total function from phonemes to viseme classes.
class VisemeMap {
 public:
  // Default table. AY is placed in "ah" alongside AH; see README.
  static VisemeMap builtin();
  // Lines of `PHONEME<TAB>class`. Every phoneme must appear exactly once.
  // Throws ParseError.
  static VisemeMap parse(std::string_view text, const std::string& source = "<viseme-map>");

  Viseme operator()(Phoneme p) const { return table_[static_cast<std::size_t>(p)]; }
  // Throws UnknownPhonemeError for symbols outside the phoneme set.
  Viseme to_viseme(std::string_view phoneme_symbol) const;

  // Canonical `PHONEME<TAB>class` text, phonemes in enum order.
  std::string serialize() const;

  bool operator==(const VisemeMap&) const = default;

 private:
  std::array<Viseme, kPhonemeCount> table_{};
};

}  // namespace v2w

#endif  // V2W_VISEME_H_
