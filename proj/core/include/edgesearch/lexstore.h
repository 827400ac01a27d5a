// Copyright 2026 The edgesearch Authors.
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

#ifndef EDGESEARCH_LEXSTORE_H_
#define EDGESEARCH_LEXSTORE_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace edgesearch {

enum class PartOfSpeech { kNoun, kVerb, kAdjective, kAdverb };

inline constexpr PartOfSpeech kAllPartsOfSpeech[] = {
    PartOfSpeech::kNoun, PartOfSpeech::kVerb, PartOfSpeech::kAdjective,
    PartOfSpeech::kAdverb};

// WordNet file suffix ("noun", "verb", "adj", "adv").
std::string_view pos_file_suffix(PartOfSpeech pos);
// Single-letter WordNet code ('n', 'v', 'a', 'r').
char pos_code(PartOfSpeech pos);
// Accepts 'n', 'v', 'a', 's' (satellite adjective) and 'r'.
std::optional<PartOfSpeech> pos_from_code(char code);

// A synset is addressed by its part of speech and the byte offset of its
// line in the data file, exactly like WordNet itself.
struct SynsetId {
  PartOfSpeech pos = PartOfSpeech::kNoun;
  std::uint32_t offset = 0;

  auto operator<=>(const SynsetId&) const = default;
  std::string str() const;  // e.g. "n02084071"
};

struct Synset {
  SynsetId id;
  std::vector<std::string> lemmas;  // lowercase, '_' replaced by ' '
  std::string gloss;                // full gloss text after '|'
  std::vector<SynsetId> hypernyms;
  std::vector<SynsetId> instance_hypernyms;

  PartOfSpeech pos() const { return id.pos; }
  // The gloss without its quoted usage examples.
  std::string_view definition() const;
};

// In-memory WordNet: synsets plus the (lemma, pos) -> senses index.
// Immutable after load and safe for concurrent reads.
class LexicalDatabase {
 public:
  // Reads every index.<pos>/data.<pos> pair found in `dir`. At least one
  // pair must exist. Throws ResourceError or ParseError.
  static LexicalDatabase load(const std::filesystem::path& dir);

  const Synset* find(const SynsetId& id) const;

  // Senses of an exact lemma in sense-frequency order; empty if unknown.
  std::span<const SynsetId> senses(std::string_view lemma,
                                   PartOfSpeech pos) const;
  std::vector<const Synset*> synsets(std::string_view lemma,
                                     PartOfSpeech pos) const;

  bool has_lemma(std::string_view lemma, PartOfSpeech pos) const;

  // Lowercases `word` and, when the exact form is not a lemma, tries the
  // plural strips "-es" then "-s". Returns the matching lemma, if any.
  std::optional<std::string> resolve(std::string_view word,
                                     PartOfSpeech pos) const;
  // resolve() across all parts of speech; falls back to the lowercase word.
  std::string base_form(std::string_view word) const;

  std::size_t synset_count() const { return synsets_.size(); }
  std::size_t lemma_count() const { return lemma_index_.size(); }

  // (lemma, pos) keys in a stable order, for determinism checks.
  std::vector<std::pair<std::string, PartOfSpeech>> lemma_keys() const;
  const std::map<SynsetId, Synset>& all_synsets() const { return synsets_; }

 private:
  using LemmaKey = std::pair<std::string, PartOfSpeech>;

  std::map<SynsetId, Synset> synsets_;
  std::map<LemmaKey, std::vector<SynsetId>, std::less<>> lemma_index_;
};

// Union of lemmas over every synset of (lemma, pos), minus the lemma itself.
std::set<std::string> synonyms(const LexicalDatabase& db,
                               std::string_view lemma, PartOfSpeech pos);

// True when `span` (original casing) names an entity. A span counts when it
// is capitalized and either
//   - appears after the first query token and its lowercase form has no
//     common-noun synset, or
//   - its most frequent noun sense is an instance (instance hypernyms only).
bool is_name_entity(const LexicalDatabase& db, std::string_view span,
                    bool mid_query);

}  // namespace edgesearch

#endif  // EDGESEARCH_LEXSTORE_H_
