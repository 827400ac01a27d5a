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

#ifndef EDGESEARCH_EVALHARNESS_H_
#define EDGESEARCH_EVALHARNESS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesearch/cloudsim.h"
#include "edgesearch/pipeline.h"

namespace edgesearch {

struct BenchmarkQuery {
  std::string acronym;
  std::string query;
};

struct BenchmarkSuite {
  std::string dataset;
  std::vector<BenchmarkQuery> queries;

  // {"dataset": "...", "queries": [{"acronym": "...", "query": "..."}]}
  static BenchmarkSuite from_text(std::string_view text);
  static BenchmarkSuite load(const std::filesystem::path& path);
};

enum class Relevance { kHigh, kPartial, kIrrelevant };

std::string_view relevance_name(Relevance r);
std::optional<Relevance> parse_relevance(std::string_view name);

using JudgmentMap = std::map<std::string, Relevance>;  // doc_id -> label

struct JudgmentFile {
  std::map<std::string, JudgmentMap> labels;           // acronym -> labels
  std::map<std::string, std::set<std::string>> gold;  // acronym -> relevant

  // {"judgments": {"ACR": {"doc": "HIGH"}}, "gold": {"ACR": ["doc", ...]}}
  static JudgmentFile from_text(std::string_view text);
  static JudgmentFile load(const std::filesystem::path& path);

  bool judged(std::string_view acronym) const;
  // Explicit gold set, or the docs labelled HIGH or PARTIAL.
  std::set<std::string> relevant(std::string_view acronym) const;
};

// Graded precision over the first ten positions: 1/i for HIGH, 1/(2i) for
// PARTIAL, nothing otherwise, divided by ten.
double tsap_at_10(std::span<const std::string> ranked, const JudgmentMap& labels);

struct F1Score {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Throws ValidationError when `gold` is empty.
F1Score f1(std::span<const std::string> ranked, const std::set<std::string>& gold);

struct QueryScore {
  std::string acronym;
  std::string query;
  std::vector<std::string> ranked;
  std::size_t retrieved = 0;
  bool judged = false;
  double tsap = 0;
  std::optional<F1Score> f1;
};

struct ScoreReport {
  std::string dataset;
  IndexMode mode = IndexMode::kPlain;
  Variant variant = Variant::kSemantic;
  std::vector<QueryScore> queries;
  std::optional<double> mean_tsap;  // over judged queries
  std::optional<double> mean_f1;    // over queries with a relevant set

  std::string to_json() const;   // deterministic, no timings
  std::string to_table() const;  // aligned plain text
};

ScoreReport run_benchmark(const BenchmarkSuite& suite, EdgeSearcher& searcher,
                          Variant variant, const JudgmentFile& judgments,
                          const std::optional<InterestProfile>& theta = std::nullopt);

// Side-by-side means of several reports over the same suite.
std::string comparison_table(std::span<const ScoreReport> reports);

}  // namespace edgesearch

#endif  // EDGESEARCH_EVALHARNESS_H_
