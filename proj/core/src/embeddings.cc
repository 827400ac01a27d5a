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

#include "edgesearch/embeddings.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgesearch/error.h"

namespace edgesearch {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double dot(std::span<const double> a, std::span<const float> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * double(b[i]);
  return s;
}

double norm(std::span<const double> a) {
  double s = 0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open embeddings " + path.string());
  const std::string source = path.string();

  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty file");
  auto header = split_spaces(line);
  std::size_t count = 0, dim = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(),
                      count).ec != std::errc() ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(),
                      dim).ec != std::errc() ||
      dim == 0) {
    throw ParseError(source, 1, "expected '<count> <dim>' header");
  }

  std::vector<Row> rows;
  rows.reserve(count);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dim) + " components, got " +
                           std::to_string(fields.size() - 1));
    }
    std::vector<float> v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      // from_chars for float is not available everywhere; strtof is fine here.
      std::string f(fields[i + 1]);
      char* end = nullptr;
      v[i] = std::strtof(f.c_str(), &end);
      if (end != f.c_str() + f.size()) {
        throw ParseError(source, line_no, "bad float '" + f + "'");
      }
    }
    rows.emplace_back(std::string(fields[0]), std::move(v));
  }
  if (rows.empty()) throw ParseError(source, line_no, "no vectors");
  return from_rows(dim, std::move(rows));
}

EmbeddingTable EmbeddingTable::from_rows(std::size_t dim,
                                         std::vector<Row> rows) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
  if (rows.empty()) throw ValidationError("embedding table has no rows");
  EmbeddingTable t;
  t.dim_ = dim;
  t.words_.reserve(rows.size());
  t.data_.reserve(rows.size() * dim);
  for (auto& [word, v] : rows) {
    if (v.size() != dim) {
      throw ValidationError("vector for '" + word + "' has length " +
                            std::to_string(v.size()));
    }
    if (t.index_.count(word)) continue;  // first occurrence wins
    double n = 0;
    for (float x : v) n += double(x) * double(x);
    t.index_.emplace(word, t.words_.size());
    t.words_.push_back(std::move(word));
    t.norms_.push_back(std::sqrt(n));
    t.data_.insert(t.data_.end(), v.begin(), v.end());
  }
  return t;
}

std::optional<std::size_t> EmbeddingTable::index_of(
    std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) it = index_.find(lowercase(word));
  if (it == index_.end() || norms_[it->second] == 0.0) return std::nullopt;
  return it->second;
}

bool EmbeddingTable::contains(std::string_view word) const {
  return index_of(word).has_value();
}

std::optional<std::span<const float>> EmbeddingTable::row(
    std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(data_.data() + it->second * dim_, dim_);
}

std::optional<std::vector<double>> EmbeddingTable::vector(
    std::string_view term) const {
  auto as_vector = [&](std::size_t i) {
    const float* p = data_.data() + i * dim_;
    return std::vector<double>(p, p + dim_);
  };
  if (auto i = index_of(term)) return as_vector(*i);

  auto parts = split_spaces(term);
  if (parts.size() <= 1) return std::nullopt;
  std::string joined;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) joined += '_';
    joined += parts[i];
  }
  if (auto i = index_of(joined)) return as_vector(*i);

  std::vector<double> mean(dim_, 0.0);
  std::size_t found = 0;
  for (std::string_view part : parts) {
    auto i = index_of(part);
    if (!i) continue;
    const float* p = data_.data() + *i * dim_;
    for (std::size_t d = 0; d < dim_; ++d) mean[d] += p[d];
    ++found;
  }
  if (found == 0) return std::nullopt;
  for (double& x : mean) x /= double(found);
  if (norm(mean) == 0.0) return std::nullopt;
  return mean;
}

std::optional<double> EmbeddingTable::cosine(std::string_view a,
                                             std::string_view b) const {
  auto ia = index_of(a);
  auto ib = index_of(b);
  if (ia && ib) {
    // Symmetric by construction: same products, same summation order.
    const float* pa = data_.data() + *ia * dim_;
    const float* pb = data_.data() + *ib * dim_;
    double s = 0;
    for (std::size_t d = 0; d < dim_; ++d) s += double(pa[d]) * double(pb[d]);
    double c = s / (norms_[*ia] * norms_[*ib]);
    return std::clamp(c, -1.0, 1.0);
  }
  auto va = vector(a);
  if (!va) return std::nullopt;
  auto vb = vector(b);
  if (!vb) return std::nullopt;
  double s = 0;
  for (std::size_t d = 0; d < dim_; ++d) s += (*va)[d] * (*vb)[d];
  return std::clamp(s / (norm(*va) * norm(*vb)), -1.0, 1.0);
}

std::optional<double> EmbeddingTable::cosine(std::span<const double> a,
                                             std::string_view b) const {
  double na = norm(a);
  if (na == 0.0 || a.size() != dim_) return std::nullopt;
  if (auto ib = index_of(b)) {
    std::span<const float> rb(data_.data() + *ib * dim_, dim_);
    return std::clamp(dot(a, rb) / (na * norms_[*ib]), -1.0, 1.0);
  }
  auto vb = vector(b);
  if (!vb) return std::nullopt;
  double s = 0;
  for (std::size_t d = 0; d < dim_; ++d) s += a[d] * (*vb)[d];
  return std::clamp(s / (na * norm(*vb)), -1.0, 1.0);
}

std::vector<std::pair<std::string, double>> EmbeddingTable::nearest(
    std::string_view term, std::size_t k) const {
  std::vector<std::pair<std::string, double>> out;
  if (k == 0) return out;
  auto q = vector(term);
  if (!q) return out;
  const double nq = norm(*q);
  const std::string lower = lowercase(term);

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (norms_[i] == 0.0 || words_[i] == term || words_[i] == lower) continue;
    std::span<const float> r(data_.data() + i * dim_, dim_);
    scored.emplace_back(dot(*q, r) / (nq * norms_[i]), i);
  }
  auto better = [&](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return words_[x.second] < words_[y.second];
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(), better);
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(words_[scored[i].second], scored[i].first);
  }
  return out;
}

}  // namespace edgesearch
