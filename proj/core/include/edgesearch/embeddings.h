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

#ifndef EDGESEARCH_EMBEDDINGS_H_
#define EDGESEARCH_EMBEDDINGS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace edgesearch {

// Word vectors in word2vec text layout. Immutable after construction.
//
// Lookups accept single words and multi-word phrases. A phrase resolves to
// its own row if present (with '_' or ' ' joining), otherwise to the mean of
// its in-vocabulary constituents. Words are matched exactly first and then
// lowercased. Zero vectors behave as out-of-vocabulary.
class EmbeddingTable {
 public:
  using Row = std::pair<std::string, std::vector<float>>;

  // Throws ResourceError / ParseError.
  static EmbeddingTable load(const std::filesystem::path& path);
  static EmbeddingTable from_rows(std::size_t dim, std::vector<Row> rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  std::span<const std::string> words() const { return words_; }

  bool contains(std::string_view word) const;
  // Raw row for a single vocabulary word (no phrase rule, no lowercasing).
  std::optional<std::span<const float>> row(std::string_view word) const;
  // Vector for a word or phrase after the lookup rules above.
  std::optional<std::vector<double>> vector(std::string_view term) const;

  std::optional<double> cosine(std::string_view a, std::string_view b) const;
  std::optional<double> cosine(std::span<const double> a,
                               std::string_view b) const;

  // k vocabulary words most similar to `term`, most similar first, ties by
  // word. The term itself (and its lowercase form) is excluded.
  std::vector<std::pair<std::string, double>> nearest(std::string_view term,
                                                      std::size_t k) const;

 private:
  std::optional<std::size_t> index_of(std::string_view word) const;

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace edgesearch

#endif  // EDGESEARCH_EMBEDDINGS_H_
