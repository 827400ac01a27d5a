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

// Random corpora over a small vocabulary, and a grep-style oracle that counts
// term and phrase occurrences straight from the whitespace-split text.

#ifndef EDGESEARCH_TESTS_CORPUS_ORACLE_H_
#define EDGESEARCH_TESTS_CORPUS_ORACLE_H_

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "edgesearch/cloudsim.h"
#include "support.h"

namespace edgesearch::testing {

inline const std::vector<std::string>& corpus_vocabulary() {
  static const std::vector<std::string> v{
      "amber", "basin", "cedar", "delta", "ember", "fjord", "grove", "heron",
      "inlet", "jetty", "knoll", "lagoon", "marsh", "nectar", "orchid", "the", "and"};
  return v;
}

inline std::vector<CorpusDocument> random_corpus(Gen& g) {
  std::vector<CorpusDocument> docs;
  const std::size_t n = g.between(1, 8);
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (std::size_t k = 0, len = g.between(1, 30); k < len; ++k) {
      if (k) text += ' ';
      text += g.pick(corpus_vocabulary());
    }
    docs.push_back({"doc" + std::to_string(i), text});
  }
  return docs;
}

// One or two content words; two words form a phrase.
inline std::vector<std::string> random_terms(Gen& g) {
  std::vector<std::string> content(corpus_vocabulary().begin(),
                                   corpus_vocabulary().end() - 2);
  content.push_back("zebra");  // never in a corpus
  std::vector<std::string> terms;
  for (std::size_t i = 0, n = g.between(1, 5); i < n; ++i) {
    std::string t = g.pick(content);
    if (g.coin(0.3)) t += " " + g.pick(content);
    terms.push_back(t);
  }
  return terms;
}

inline std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// doc_id -> per-term occurrence counts, listing only docs with a hit.
inline std::map<std::string, std::vector<std::uint32_t>> grep_oracle(
    const std::vector<CorpusDocument>& docs, const std::vector<std::string>& terms) {
  std::map<std::string, std::vector<std::uint32_t>> out;
  for (const auto& d : docs) {
    const auto words = split_words(d.text);
    std::vector<std::uint32_t> freq(terms.size(), 0);
    bool any = false;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto pattern = split_words(terms[t]);
      for (std::size_t i = 0; i + pattern.size() <= words.size(); ++i) {
        bool hit = true;
        for (std::size_t k = 0; k < pattern.size() && hit; ++k) hit = words[i + k] == pattern[k];
        freq[t] += hit;
      }
      any = any || freq[t] > 0;
    }
    if (any) out[d.doc_id] = freq;
  }
  return out;
}

inline std::map<std::string, std::vector<std::uint32_t>> as_map(const MatchSet& m) {
  std::map<std::string, std::vector<std::uint32_t>> out;
  for (const auto& d : m.docs) out[d.doc_id] = d.frequencies;
  return out;
}

inline std::vector<SearchToken> search_tokens(const std::vector<std::string>& terms,
                                              IndexMode mode, const SecretKey* key) {
  std::vector<SearchToken> out;
  for (const auto& t : terms) out.push_back(*make_search_token(t, mode, key));
  return out;
}

}  // namespace edgesearch::testing

#endif  // EDGESEARCH_TESTS_CORPUS_ORACLE_H_
