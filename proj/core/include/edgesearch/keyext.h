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

#ifndef EDGESEARCH_KEYEXT_H_
#define EDGESEARCH_KEYEXT_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgesearch {

struct Token {
  std::string text;       // as written
  std::string lower;      // ASCII-lowercased
  std::size_t position;   // index in the whole token stream
};

using Sentence = std::vector<Token>;

// Splits on '.', '!' and '?' followed by whitespace, then into word tokens.
// Abbreviations ("e.g.", "J.K.", "Dr.") stay whole and never end a sentence.
std::vector<Sentence> tokenize(std::string_view text);

// Flattened tokenize().
std::vector<Token> tokenize_flat(std::string_view text);

std::string to_lower(std::string_view s);

// Fixed English stopword list (lowercase).
std::span<const std::string_view> stopwords();
bool is_stopword(std::string_view lower);

// A token may become a keyword: not a stopword, longer than one character,
// and containing at least one letter.
bool is_keyword_candidate(std::string_view lower);

struct KeywordScore {
  std::string term;
  double score;  // lower is more important, always > 0
};

// Per-term statistics behind the score. Exposed for inspection and tests.
struct TermFeatures {
  std::string term;
  std::size_t tf = 0;
  std::size_t cased = 0;     // uppercase-initial, not sentence-initial
  std::size_t acronyms = 0;  // all-caps occurrences
  double casing = 0;
  double position = 0;
  double frequency = 0;
  double relatedness = 0;
  double dispersion = 0;
  double score = 0;
};

// Unigram Yake features for every candidate, ascending by score (ties by
// term). Empty when the text has no candidates.
std::vector<TermFeatures> keyword_features(std::string_view text);

// The k best keywords, ascending score. Stopword-only text gives [].
std::vector<KeywordScore> extract_keywords(std::string_view text,
                                           std::size_t k);

// Query trimming. Texts under `short_text_tokens` tokens keep every
// candidate scoring strictly below the candidate mean; longer texts keep the
// top `top_k`. Terms are returned in order of first occurrence.
std::vector<std::string> trim_keywords(std::string_view text,
                                       std::size_t top_k = 20,
                                       std::size_t short_text_tokens = 10);

}  // namespace edgesearch

#endif  // EDGESEARCH_KEYEXT_H_
