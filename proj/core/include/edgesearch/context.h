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

#ifndef EDGESEARCH_CONTEXT_H_
#define EDGESEARCH_CONTEXT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesearch/keyext.h"
#include "edgesearch/lexstore.h"

namespace edgesearch {

struct QueryText {
  std::string raw;
  std::vector<Token> tokens;

  // Throws ValidationError on a blank query.
  static QueryText parse(std::string raw);
};

// Keywords that query keyword `keyword` added to the context, in gloss order.
struct Contribution {
  std::string keyword;
  std::optional<SynsetId> sense;  // Lesk choice; empty for the fallback rule
  std::vector<std::string> terms;
};

struct ContextBundle {
  std::vector<std::string> context;        // C, lowercase, insertion order
  std::vector<std::string> name_entities;  // N, original casing
  std::vector<Contribution> contributions; // one per disambiguated keyword
  std::vector<std::string> trimmed;        // Q'
  // Lowercase candidate keywords of the query not covered by an entity, in
  // query order. These are the keywords the expansion step iterates over.
  std::vector<std::string> keywords;
  bool used_fallback = false;

  bool in_context(std::string_view term) const;
  bool is_name_entity(std::string_view term) const;  // case-insensitive
  // The contribution whose terms contain `term`, if any.
  const Contribution* contributor(std::string_view term) const;
};

struct ContextOptions {
  std::size_t gloss_keywords = 20;  // keywords distilled from each gloss
  std::size_t trim_top_k = 20;      // for queries of 10+ tokens
};

ContextBundle identify_context(const QueryText& query,
                               const LexicalDatabase& db,
                               const ContextOptions& options = {});

// Overlap-count Lesk. Chooses among the noun senses of `keyword` (verb senses
// when it has no noun sense) the one whose definition shares the most tokens,
// counted with multiplicity, with `rest` plus the first-sense definitions of
// the words in `rest`. Ties go to the more frequent sense. Returns nullptr if
// the keyword has no sense at all.
const Synset* lesk_disambiguate(std::string_view keyword,
                                std::span<const std::string> rest,
                                const LexicalDatabase& db);

// Senses Lesk chooses among: nouns first, verbs otherwise.
std::vector<const Synset*> candidate_senses(std::string_view keyword,
                                            const LexicalDatabase& db);

}  // namespace edgesearch

#endif  // EDGESEARCH_CONTEXT_H_
