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

#ifndef V2W_ARTIFACT_H_
#define V2W_ARTIFACT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "v2w/inverse_index.h"
#include "v2w/lexicon.h"
#include "v2w/viseme.h"

namespace v2w {

// Everything downstream commands need: the lexicon (with ranks), the viseme
// map it was indexed under, and the inverse index.
//
// Serialized form (text, UTF-8, '\n' line ends, byte-identical for identical
// inputs):
//
//   v2w-index 1
//   source dictionary fnv1a64:<16 hex>
//   source frequency  fnv1a64:<16 hex> | none
//   source viseme-map fnv1a64:<16 hex> | builtin
//   ignored-ranks <n>
//   map <39 lines PHONEME\tclass>
//   words <n>           then n lines WORD\t<rank|->\tPH PH|PH ...
//   keys <n>            then n lines v v v\tWORD WORD ...
//   end
struct Artifact {
  Lexicon lexicon;
  VisemeMap map = VisemeMap::builtin();
  InverseIndex index;
  std::string dictionary_digest = "none";
  std::string frequency_digest = "none";
  std::string viseme_map_digest = "builtin";
  std::size_t ignored_ranks = 0;
};

inline constexpr std::string_view kArtifactMagic = "v2w-index";
inline constexpr int kArtifactVersion = 1;

std::uint64_t fnv1a64(std::string_view bytes);
// "fnv1a64:00ab..."
std::string digest(std::string_view bytes);

Artifact build_artifact(std::string_view dictionary_text,
                        std::optional<std::string_view> frequency_text = std::nullopt,
                        std::optional<std::string_view> viseme_map_text = std::nullopt);

std::string serialize_artifact(const Artifact& artifact);
// Rebuilds the index from the stored lexicon and checks it against the
// stored key section. Throws ParseError.
Artifact parse_artifact(std::string_view text, const std::string& source = "<artifact>");

// Throws Error naming the path when the file cannot be read.
std::string read_text_file(const std::string& path);

}  // namespace v2w

#endif  // V2W_ARTIFACT_H_
