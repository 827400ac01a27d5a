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

#include "edgesearch/context.h"

#include <algorithm>
#include <map>
#include <set>

#include "edgesearch/error.h"

namespace edgesearch {
namespace {

using Bag = std::map<std::string, std::size_t>;

void add_to_bag(Bag& bag, std::string_view text, const LexicalDatabase& db) {
  for (const Token& t : tokenize_flat(text)) {
    if (is_keyword_candidate(t.lower)) ++bag[db.base_form(t.lower)];
  }
}

std::size_t overlap(const Bag& a, const Bag& b) {
  std::size_t n = 0;
  for (const auto& [word, count] : a) {
    if (auto it = b.find(word); it != b.end()) n += std::min(count, it->second);
  }
  return n;
}

bool is_capitalized(const Token& t) {
  return !t.text.empty() &&
         std::isupper(static_cast<unsigned char>(t.text.front()));
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

QueryText QueryText::parse(std::string raw) {
  auto tokens = tokenize_flat(raw);
  if (tokens.empty()) throw ValidationError("query is empty");
  return QueryText{std::move(raw), std::move(tokens)};
}

bool ContextBundle::in_context(std::string_view term) const {
  return contains(context, term);
}

bool ContextBundle::is_name_entity(std::string_view term) const {
  const std::string lower = to_lower(term);
  return std::any_of(name_entities.begin(), name_entities.end(),
                     [&](const std::string& n) { return to_lower(n) == lower; });
}

const Contribution* ContextBundle::contributor(std::string_view term) const {
  for (const Contribution& c : contributions) {
    if (contains(c.terms, term)) return &c;
  }
  return nullptr;
}

std::vector<const Synset*> candidate_senses(std::string_view keyword,
                                            const LexicalDatabase& db) {
  for (PartOfSpeech pos : {PartOfSpeech::kNoun, PartOfSpeech::kVerb}) {
    if (auto lemma = db.resolve(keyword, pos)) return db.synsets(*lemma, pos);
  }
  return {};
}

const Synset* lesk_disambiguate(std::string_view keyword,
                                std::span<const std::string> rest,
                                const LexicalDatabase& db) {
  const auto senses = candidate_senses(keyword, db);
  if (senses.empty()) return nullptr;

  Bag context;
  for (const std::string& word : rest) {
    add_to_bag(context, word, db);
    auto first = candidate_senses(word, db);
    if (!first.empty()) add_to_bag(context, first.front()->definition(), db);
  }

  const Synset* best = senses.front();
  std::size_t best_score = 0;
  for (const Synset* s : senses) {
    Bag gloss;
    add_to_bag(gloss, s->definition(), db);
    const std::size_t score = overlap(gloss, context);
    if (score > best_score) {
      best = s;
      best_score = score;
    }
  }
  return best;
}

ContextBundle identify_context(const QueryText& query,
                               const LexicalDatabase& db,
                               const ContextOptions& options) {
  ContextBundle out;
  const std::vector<Token>& tokens = query.tokens;

  // Name entities: maximal capitalized runs first, then single tokens.
  std::vector<bool> covered(tokens.size(), false);
  for (std::size_t i = 0; i < tokens.size();) {
    if (!is_capitalized(tokens[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < tokens.size() && is_capitalized(tokens[j])) ++j;
    bool run_is_entity = false;
    if (j - i > 1) {
      std::string span;
      for (std::size_t k = i; k < j; ++k) {
        if (k > i) span += ' ';
        span += tokens[k].text;
      }
      if (edgesearch::is_name_entity(db, span, i > 0)) {
        run_is_entity = true;
        out.name_entities.push_back(span);
        std::fill(covered.begin() + i, covered.begin() + j, true);
      }
    }
    if (!run_is_entity) {
      for (std::size_t k = i; k < j; ++k) {
        if (edgesearch::is_name_entity(db, tokens[k].text, k > 0) &&
            !out.is_name_entity(tokens[k].text)) {
          out.name_entities.push_back(tokens[k].text);
          covered[k] = true;
        }
      }
    }
    i = j;
  }

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!covered[i] && is_keyword_candidate(tokens[i].lower) &&
        !contains(out.keywords, tokens[i].lower)) {
      out.keywords.push_back(tokens[i].lower);
    }
  }

  out.trimmed = trim_keywords(query.raw, options.trim_top_k);
  if (out.trimmed.empty()) {
    out.used_fallback = true;
    for (const Token& t : tokens) {
      if (is_keyword_candidate(t.lower) && !contains(out.trimmed, t.lower)) {
        out.trimmed.push_back(t.lower);
      }
    }
  }

  // Entity tokens tend to score best, which can push every ordinary keyword
  // above the mean. Those keywords are then all kept.
  const bool keeps_keyword =
      std::any_of(out.keywords.begin(), out.keywords.end(),
                  [&](const std::string& k) { return contains(out.trimmed, k); });
  if (!keeps_keyword && !out.keywords.empty()) {
    out.used_fallback = true;
    for (const std::string& k : out.keywords) {
      if (!contains(out.trimmed, k)) out.trimmed.push_back(k);
    }
  }

  std::set<std::string> entity_forms;
  for (const std::string& n : out.name_entities) entity_forms.insert(to_lower(n));

  for (const std::string& q : out.keywords) {
    if (!contains(out.trimmed, q)) continue;
    std::vector<std::string> rest;
    for (const std::string& other : out.trimmed) {
      if (other != q) rest.push_back(other);
    }
    const Synset* sense = lesk_disambiguate(q, rest, db);
    if (sense == nullptr) continue;

    Contribution contribution{q, sense->id, {}};
    for (const KeywordScore& k :
         extract_keywords(sense->definition(), options.gloss_keywords)) {
      if (entity_forms.count(k.term) || out.in_context(k.term)) continue;
      out.context.push_back(k.term);
      contribution.terms.push_back(k.term);
    }
    out.contributions.push_back(std::move(contribution));
  }

  if (out.context.empty() && out.name_entities.empty()) {
    out.contributions.clear();
    for (const std::string& q : out.trimmed) {
      out.context.push_back(q);
      out.contributions.push_back(Contribution{q, std::nullopt, {q}});
    }
  }
  return out;
}

}  // namespace edgesearch
