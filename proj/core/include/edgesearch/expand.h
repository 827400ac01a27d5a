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

#ifndef EDGESEARCH_EXPAND_H_
#define EDGESEARCH_EXPAND_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesearch/context.h"
#include "edgesearch/embeddings.h"
#include "edgesearch/lexstore.h"

namespace edgesearch {

enum class Provenance { kNameEntity, kContext, kDerived };

std::string_view provenance_name(Provenance p);  // "NAME_ENTITY", ...

struct ExpandedTerm {
  std::string term;
  Provenance provenance = Provenance::kDerived;
  // DERIVED: the query keyword that nominated the term.
  // CONTEXT: the query keyword whose gloss contributed it.
  std::string parent;
  double weight = 0;            // filled by assign_weights()
  std::optional<double> score;  // context similarity, DERIVED only
};

// One scored (keyword, synonym) pair considered by the expansion.
struct Nomination {
  std::string keyword;
  std::string candidate;
  std::optional<double> score;
};

struct ExpandedQuerySet {
  std::vector<ExpandedTerm> terms;
  std::optional<double> mu;  // absent when no candidate could be scored
  std::string original;
  std::vector<Nomination> nominations;

  const ExpandedTerm* find(std::string_view term) const;  // case-insensitive
};

struct ExpansionOptions {
  std::size_t knn = 10;  // embedding neighbours nominated per keyword
};

// Sum over context members of cosine(candidate, member), skipping pairs
// where either side has no vector. Absent if no pair was computable.
std::optional<double> context_similarity(std::string_view candidate,
                                         std::span<const std::string> context,
                                         const EmbeddingTable& emb);

// WordNet synonyms over every part of speech united with the k nearest
// embedding neighbours. Never contains the keyword itself.
std::set<std::string> nominate_synonyms(std::string_view keyword,
                                        const LexicalDatabase& db,
                                        const EmbeddingTable& emb,
                                        std::size_t k);

// Scores every nomination against the context, keeps those strictly above
// the mean score, then appends C and N.
ExpandedQuerySet expand_query(const QueryText& query,
                              const ContextBundle& context,
                              const LexicalDatabase& db,
                              const EmbeddingTable& emb,
                              const ExpansionOptions& options = {});

}  // namespace edgesearch

#endif  // EDGESEARCH_EXPAND_H_
