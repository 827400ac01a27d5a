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

#ifndef EDGESEARCH_PIPELINE_H_
#define EDGESEARCH_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgesearch/cloudsim.h"
#include "edgesearch/context.h"
#include "edgesearch/embeddings.h"
#include "edgesearch/expand.h"
#include "edgesearch/interest.h"
#include "edgesearch/lexstore.h"
#include "edgesearch/rank.h"
#include "edgesearch/weights.h"

namespace edgesearch {

enum class Variant { kPassThrough, kSemantic };

std::string_view variant_name(Variant v);  // "pass-through" | "saed"
std::optional<Variant> parse_variant(std::string_view name);

struct SearchOptions {
  ContextOptions context;
  ExpansionOptions expansion;
  WeightConfig weights;
  std::size_t cutoff = 10;
  std::size_t snippet_chars = 160;
  bool fetch_titles = true;
};

struct Timings {
  double expansion_ms = 0;
  double match_ms = 0;
  double rank_ms = 0;
};

struct ResultRow {
  std::string doc_id;
  std::string title;
  double score = 0;
  std::optional<std::string> snippet;  // plain mode only
  std::vector<TermScore> breakdown;
};

struct SearchOutcome {
  std::string query;
  Variant variant = Variant::kSemantic;
  std::vector<ResultRow> rows;
  std::size_t retrieved = 0;
  // The weighted terms actually dispatched, aligned with the match columns.
  std::vector<ExpandedTerm> dispatched;
  // Semantic variant only.
  std::optional<ExpandedQuerySet> expanded;
  std::optional<ContextBundle> context;
  std::optional<InterestProfile> theta;
  Timings timings;
};

// The edge tier. The lexical database and embedding table are borrowed and
// must outlive the searcher; so must the backend.
class EdgeSearcher {
 public:
  EdgeSearcher(const LexicalDatabase& db, const EmbeddingTable& emb,
               CloudBackend& cloud, std::optional<SecretKey> key,
               SearchOptions options = {});

  SearchOutcome search(std::string_view query, Variant variant,
                       const std::optional<InterestProfile>& theta = std::nullopt);

  const SearchOptions& options() const { return options_; }
  IndexMode mode() const { return cloud_.mode(); }

 private:
  void dispatch(SearchOutcome& out, std::vector<ExpandedTerm> terms);

  const LexicalDatabase& db_;
  const EmbeddingTable& emb_;
  CloudBackend& cloud_;
  std::optional<SecretKey> key_;
  SearchOptions options_;
};

// Terms sent by the baseline: every indexable query token on its own in plain
// mode; the whole query as one exact phrase in encrypted mode.
std::vector<ExpandedTerm> pass_through_terms(std::string_view query,
                                             IndexMode mode);

}  // namespace edgesearch

#endif  // EDGESEARCH_PIPELINE_H_
