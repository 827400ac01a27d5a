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

#include "edgesearch/pipeline.h"

#include <chrono>
#include <map>

#include "edgesearch/error.h"
#include "edgesearch/keyext.h"

namespace edgesearch {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string make_snippet(std::string_view body, std::size_t limit) {
  std::string out;
  bool space = false;
  for (char c : body) {
    if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
    if (out.size() >= limit) {
      out += "...";
      break;
    }
  }
  return out;
}

}  // namespace

std::string_view variant_name(Variant v) {
  return v == Variant::kPassThrough ? "pass-through" : "saed";
}

std::optional<Variant> parse_variant(std::string_view name) {
  const std::string lower = to_lower(name);
  if (lower == "pass-through" || lower == "passthrough") return Variant::kPassThrough;
  if (lower == "saed" || lower == "semantic") return Variant::kSemantic;
  return std::nullopt;
}

std::vector<ExpandedTerm> pass_through_terms(std::string_view query,
                                             IndexMode mode) {
  std::vector<ExpandedTerm> out;
  if (mode == IndexMode::kEncrypted) {
    out.push_back(ExpandedTerm{std::string(query), Provenance::kNameEntity, {}, 1.0,
                               std::nullopt});
    return out;
  }
  std::set<std::string> seen;
  for (const Token& t : tokenize_flat(query)) {
    std::string norm = normalize_token(t.text);
    if (!is_indexable(norm) || !seen.insert(norm).second) continue;
    out.push_back(ExpandedTerm{norm, Provenance::kNameEntity, {}, 1.0, std::nullopt});
  }
  return out;
}

EdgeSearcher::EdgeSearcher(const LexicalDatabase& db, const EmbeddingTable& emb,
                           CloudBackend& cloud, std::optional<SecretKey> key,
                           SearchOptions options)
    : db_(db), emb_(emb), cloud_(cloud), key_(std::move(key)),
      options_(std::move(options)) {
  if (cloud_.mode() == IndexMode::kEncrypted && !key_) {
    throw ConfigError("encrypted mode requires a key");
  }
  if (options_.cutoff == 0) throw ConfigError("cutoff must be positive");
}

SearchOutcome EdgeSearcher::search(std::string_view query, Variant variant,
                                   const std::optional<InterestProfile>& theta) {
  QueryText parsed = QueryText::parse(std::string(query));
  SearchOutcome out;
  out.query = parsed.raw;
  out.variant = variant;

  if (variant == Variant::kPassThrough) {
    dispatch(out, pass_through_terms(parsed.raw, cloud_.mode()));
    return out;
  }

  const auto t0 = Clock::now();
  ContextBundle context = identify_context(parsed, db_, options_.context);
  ExpandedQuerySet expanded =
      expand_query(parsed, context, db_, emb_, options_.expansion);
  expanded = assign_weights(std::move(expanded), context, theta, emb_,
                            options_.weights);
  out.timings.expansion_ms = ms_since(t0);

  std::vector<ExpandedTerm> terms = expanded.terms;
  out.context = std::move(context);
  out.expanded = std::move(expanded);
  out.theta = theta;
  dispatch(out, std::move(terms));
  return out;
}

void EdgeSearcher::dispatch(SearchOutcome& out, std::vector<ExpandedTerm> terms) {
  const IndexMode mode = cloud_.mode();
  const SecretKey* key = key_ ? &*key_ : nullptr;

  // Terms that normalize to the same index pattern are sent once, carrying
  // the larger weight.
  std::vector<SearchToken> tokens;
  std::map<std::string, std::size_t> by_pattern;
  for (ExpandedTerm& t : terms) {
    auto token = make_search_token(t.term, mode, key);
    if (!token) continue;
    std::string pattern;
    for (const auto& part : token->parts) {
      pattern += part.value + "@" + std::to_string(part.offset) + " ";
    }
    auto [it, fresh] = by_pattern.emplace(pattern, out.dispatched.size());
    if (!fresh) {
      ExpandedTerm& kept = out.dispatched[it->second];
      if (t.weight > kept.weight) kept = std::move(t);
      continue;
    }
    out.dispatched.push_back(std::move(t));
    tokens.push_back(std::move(*token));
  }
  if (tokens.empty()) return;

  auto t1 = Clock::now();
  MatchSet delta = cloud_.match(tokens);
  out.timings.match_ms = ms_since(t1);

  t1 = Clock::now();
  RankedResult ranked = rank_documents(delta, out.dispatched, options_.cutoff);
  out.timings.rank_ms = ms_since(t1);
  out.retrieved = ranked.retrieved;

  for (RankedEntry& e : ranked.entries) {
    ResultRow row;
    row.doc_id = e.doc_id;
    row.score = e.gamma;
    row.breakdown = std::move(e.breakdown);
    if (options_.fetch_titles) {
      if (auto doc = cloud_.fetch(e.doc_id)) {
        row.title = document_title(*doc, mode, key);
        if (mode == IndexMode::kPlain) {
          row.snippet = make_snippet(doc->stored_body, options_.snippet_chars);
        }
      }
    }
    out.rows.push_back(std::move(row));
  }
}

}  // namespace edgesearch
