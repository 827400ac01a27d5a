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

#ifndef EDGESEARCH_RANK_H_
#define EDGESEARCH_RANK_H_

#include <cstddef>
#include <string>
#include <vector>

#include "edgesearch/cloudsim.h"
#include "edgesearch/expand.h"

namespace edgesearch {

struct TermScore {
  std::string term;
  double weight = 0;
  double tfidf = 0;
  double contribution = 0;  // weight * tfidf
};

struct RankedEntry {
  std::string doc_id;
  double gamma = 0;
  std::vector<TermScore> breakdown;  // only terms present in the document
};

struct RankedResult {
  std::vector<RankedEntry> entries;
  std::size_t cutoff = 10;
  std::size_t retrieved = 0;  // |delta| before truncation
};

// `delta` columns must line up with `terms`: column j holds the frequencies
// of terms[j]. Every document in delta is scored, sorted by gamma descending
// (doc_id ascending on ties) and truncated to `cutoff`.
RankedResult rank_documents(const MatchSet& delta,
                            const std::vector<ExpandedTerm>& terms,
                            std::size_t cutoff = 10);

}  // namespace edgesearch

#endif  // EDGESEARCH_RANK_H_
