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

#include "edgesearch/rank.h"

#include <algorithm>

#include "edgesearch/error.h"

namespace edgesearch {

RankedResult rank_documents(const MatchSet& delta,
                            const std::vector<ExpandedTerm>& terms,
                            std::size_t cutoff) {
  if (delta.term_count != terms.size()) {
    throw ConsistencyError("match set has " + std::to_string(delta.term_count) +
                           " columns for " + std::to_string(terms.size()) +
                           " terms");
  }
  RankedResult out;
  out.cutoff = cutoff;
  out.retrieved = delta.docs.size();
  out.entries.reserve(delta.docs.size());

  for (std::size_t i = 0; i < delta.docs.size(); ++i) {
    RankedEntry entry;
    entry.doc_id = delta.docs[i].doc_id;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const double score = tfidf(delta, j, i);
      if (score == 0.0) continue;
      TermScore ts{terms[j].term, terms[j].weight, score,
                   terms[j].weight * score};
      entry.gamma += ts.contribution;
      entry.breakdown.push_back(std::move(ts));
    }
    out.entries.push_back(std::move(entry));
  }

  std::sort(out.entries.begin(), out.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.gamma != b.gamma) return a.gamma > b.gamma;
              return a.doc_id < b.doc_id;
            });
  if (out.entries.size() > cutoff) out.entries.resize(cutoff);
  return out;
}

}  // namespace edgesearch
