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

#include "edgesearch/expand.h"

#include <algorithm>

#include "edgesearch/keyext.h"

namespace edgesearch {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kNameEntity: return "NAME_ENTITY";
    case Provenance::kContext: return "CONTEXT";
    case Provenance::kDerived: return "DERIVED";
  }
  return "DERIVED";
}

const ExpandedTerm* ExpandedQuerySet::find(std::string_view term) const {
  const std::string lower = to_lower(term);
  for (const ExpandedTerm& t : terms) {
    if (to_lower(t.term) == lower) return &t;
  }
  return nullptr;
}

std::optional<double> context_similarity(std::string_view candidate,
                                         std::span<const std::string> context,
                                         const EmbeddingTable& emb) {
  auto v = emb.vector(candidate);
  if (!v) return std::nullopt;
  double sum = 0;
  bool any = false;
  for (const std::string& member : context) {
    if (auto c = emb.cosine(*v, member)) {
      sum += *c;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  return sum;
}

std::set<std::string> nominate_synonyms(std::string_view keyword,
                                        const LexicalDatabase& db,
                                        const EmbeddingTable& emb,
                                        std::size_t k) {
  std::set<std::string> out;
  for (PartOfSpeech pos : kAllPartsOfSpeech) {
    auto s = synonyms(db, keyword, pos);
    out.insert(s.begin(), s.end());
  }
  for (auto& [word, _] : emb.nearest(keyword, k)) out.insert(to_lower(word));
  out.erase(to_lower(keyword));
  out.erase(db.base_form(keyword));
  return out;
}

ExpandedQuerySet expand_query(const QueryText& query,
                              const ContextBundle& context,
                              const LexicalDatabase& db,
                              const EmbeddingTable& emb,
                              const ExpansionOptions& options) {
  ExpandedQuerySet out;
  out.original = query.raw;

  double total = 0;
  std::size_t scored = 0;
  for (const std::string& q : context.keywords) {
    for (const std::string& s : nominate_synonyms(q, db, emb, options.knn)) {
      auto score = context_similarity(s, context.context, emb);
      if (score) {
        total += *score;
        ++scored;
      }
      out.nominations.push_back(Nomination{q, s, score});
    }
  }
  if (scored > 0) out.mu = total / double(scored);

  auto present = [&](std::string_view term) { return out.find(term) != nullptr; };

  if (out.mu) {
    for (const Nomination& n : out.nominations) {
      if (!n.score || !(*n.score > *out.mu)) continue;
      if (present(n.candidate) || context.in_context(n.candidate) ||
          context.is_name_entity(n.candidate)) {
        continue;  // C and N members are added below with their own class
      }
      out.terms.push_back(
          ExpandedTerm{n.candidate, Provenance::kDerived, n.keyword, 0, n.score});
    }
  }

  for (const std::string& c : context.context) {
    if (present(c)) continue;
    const Contribution* from = context.contributor(c);
    out.terms.push_back(ExpandedTerm{c, Provenance::kContext,
                                     from ? from->keyword : std::string(), 0,
                                     std::nullopt});
  }
  for (const std::string& n : context.name_entities) {
    if (const ExpandedTerm* existing = out.find(n)) {
      // Entity role dominates; replace the context entry in place.
      auto it = std::find_if(out.terms.begin(), out.terms.end(),
                             [&](const ExpandedTerm& t) { return &t == existing; });
      *it = ExpandedTerm{n, Provenance::kNameEntity, {}, 0, std::nullopt};
      continue;
    }
    out.terms.push_back(
        ExpandedTerm{n, Provenance::kNameEntity, {}, 0, std::nullopt});
  }
  return out;
}

}  // namespace edgesearch
