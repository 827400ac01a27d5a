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

#include "edgesearch/weights.h"

#include <algorithm>

#include "edgesearch/error.h"

namespace edgesearch {

ExpandedQuerySet assign_weights(ExpandedQuerySet expanded,
                                const ContextBundle& context,
                                const std::optional<InterestProfile>& theta,
                                const EmbeddingTable& emb,
                                const WeightConfig& config) {
  if (!(config.eta_max > 0)) throw ValidationError("eta_max must be positive");

  // The interest label may be several words; its vector is the token mean.
  std::optional<std::vector<double>> theta_vector;
  if (theta) theta_vector = emb.vector(theta->theta);

  const double context_size = double(context.context.size());
  for (ExpandedTerm& t : expanded.terms) {
    double eta = 0;
    switch (t.provenance) {
      case Provenance::kNameEntity:
        eta = config.eta_max;
        break;
      case Provenance::kContext: {
        const Contribution* from = context.contributor(t.term);
        if (from == nullptr || context_size == 0) {
          throw ConsistencyError("context term '" + t.term +
                                 "' has no contributing keyword");
        }
        eta = config.eta_max * double(from->terms.size()) / context_size;
        break;
      }
      case Provenance::kDerived:
        if (theta_vector) {
          if (auto c = emb.cosine(*theta_vector, t.term)) eta = std::max(0.0, *c);
        }
        break;
    }
    t.weight = std::clamp(eta, 0.0, config.eta_max);
  }
  return expanded;
}

}  // namespace edgesearch
