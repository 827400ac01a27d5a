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

#ifndef EDGESEARCH_WEIGHTS_H_
#define EDGESEARCH_WEIGHTS_H_

#include <optional>

#include "edgesearch/context.h"
#include "edgesearch/embeddings.h"
#include "edgesearch/expand.h"
#include "edgesearch/interest.h"

namespace edgesearch {

struct WeightConfig {
  double eta_max = 1.0;  // must be > 0
};

// Fills ExpandedTerm::weight by provenance:
//   NAME_ENTITY  eta_max
//   CONTEXT      eta_max * |C_q| / |C|, q the contributing keyword
//   DERIVED      max(0, cosine(term, theta)), 0 without theta or a vector
// Every weight ends up in [0, eta_max]. Throws ConsistencyError when a
// CONTEXT term cannot be traced to a contribution or C is empty.
ExpandedQuerySet assign_weights(ExpandedQuerySet expanded,
                                const ContextBundle& context,
                                const std::optional<InterestProfile>& theta,
                                const EmbeddingTable& emb,
                                const WeightConfig& config = {});

}  // namespace edgesearch

#endif  // EDGESEARCH_WEIGHTS_H_
