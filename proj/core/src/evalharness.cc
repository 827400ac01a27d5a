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

#include "edgesearch/evalharness.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edgesearch/error.h"
#include "json.hpp"

namespace edgesearch {
namespace {

using json = nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

BenchmarkSuite BenchmarkSuite::from_text(std::string_view text) {
  BenchmarkSuite suite;
  try {
    const json j = json::parse(text);
    suite.dataset = j.at("dataset").get<std::string>();
    std::set<std::string> seen;
    for (const auto& q : j.at("queries")) {
      BenchmarkQuery bq{q.at("acronym").get<std::string>(),
                        q.at("query").get<std::string>()};
      if (!seen.insert(bq.acronym).second) {
        throw ParseError("duplicate acronym '" + bq.acronym + "' in suite");
      }
      suite.queries.push_back(std::move(bq));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("benchmark suite: ") + e.what());
  }
  return suite;
}

BenchmarkSuite BenchmarkSuite::load(const std::filesystem::path& path) {
  return from_text(slurp(path));
}

std::string_view relevance_name(Relevance r) {
  switch (r) {
    case Relevance::kHigh: return "HIGH";
    case Relevance::kPartial: return "PARTIAL";
    case Relevance::kIrrelevant: return "IRRELEVANT";
  }
  return "IRRELEVANT";
}

std::optional<Relevance> parse_relevance(std::string_view name) {
  if (name == "HIGH") return Relevance::kHigh;
  if (name == "PARTIAL") return Relevance::kPartial;
  if (name == "IRRELEVANT") return Relevance::kIrrelevant;
  return std::nullopt;
}

JudgmentFile JudgmentFile::from_text(std::string_view text) {
  JudgmentFile out;
  try {
    const json j = json::parse(text);
    if (j.contains("judgments")) {
      for (const auto& [acr, docs] : j.at("judgments").items()) {
        JudgmentMap& m = out.labels[acr];
        for (const auto& [doc, label] : docs.items()) {
          auto r = parse_relevance(label.get<std::string>());
          if (!r) {
            throw ParseError("judgment for " + acr + "/" + doc +
                                  " is not HIGH, PARTIAL or IRRELEVANT");
          }
          m[doc] = *r;
        }
      }
    }
    if (j.contains("gold")) {
      for (const auto& [acr, docs] : j.at("gold").items()) {
        out.gold[acr] = docs.get<std::set<std::string>>();
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("judgment file: ") + e.what());
  }
  return out;
}

JudgmentFile JudgmentFile::load(const std::filesystem::path& path) {
  return from_text(slurp(path));
}

bool JudgmentFile::judged(std::string_view acronym) const {
  return labels.find(std::string(acronym)) != labels.end();
}

std::set<std::string> JudgmentFile::relevant(std::string_view acronym) const {
  const std::string key(acronym);
  if (auto it = gold.find(key); it != gold.end()) return it->second;
  std::set<std::string> out;
  if (auto it = labels.find(key); it != labels.end()) {
    for (const auto& [doc, r] : it->second) {
      if (r != Relevance::kIrrelevant) out.insert(doc);
    }
  }
  return out;
}

double tsap_at_10(std::span<const std::string> ranked, const JudgmentMap& labels) {
  double sum = 0;
  const std::size_t n = std::min<std::size_t>(ranked.size(), 10);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = labels.find(ranked[i]);
    if (it == labels.end()) continue;
    const double pos = double(i + 1);
    if (it->second == Relevance::kHigh) sum += 1.0 / pos;
    if (it->second == Relevance::kPartial) sum += 1.0 / (2.0 * pos);
  }
  return sum / 10.0;
}

F1Score f1(std::span<const std::string> ranked, const std::set<std::string>& gold) {
  if (gold.empty()) throw ValidationError("f1 needs a non-empty gold set");
  F1Score s;
  if (ranked.empty()) return s;
  std::set<std::string> unique(ranked.begin(), ranked.end());
  std::size_t hits = 0;
  for (const auto& d : unique) hits += gold.count(d);
  s.precision = double(hits) / double(ranked.size());
  s.recall = double(hits) / double(gold.size());
  if (s.precision + s.recall > 0) {
    s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

ScoreReport run_benchmark(const BenchmarkSuite& suite, EdgeSearcher& searcher,
                          Variant variant, const JudgmentFile& judgments,
                          const std::optional<InterestProfile>& theta) {
  ScoreReport report;
  report.dataset = suite.dataset;
  report.mode = searcher.mode();
  report.variant = variant;

  double tsap_sum = 0, f1_sum = 0;
  std::size_t tsap_n = 0, f1_n = 0;
  for (const BenchmarkQuery& q : suite.queries) {
    QueryScore qs;
    qs.acronym = q.acronym;
    qs.query = q.query;
    SearchOutcome outcome = searcher.search(q.query, variant, theta);
    qs.retrieved = outcome.retrieved;
    for (const ResultRow& row : outcome.rows) qs.ranked.push_back(row.doc_id);

    if (auto it = judgments.labels.find(q.acronym); it != judgments.labels.end()) {
      qs.judged = true;
      qs.tsap = tsap_at_10(qs.ranked, it->second);
      tsap_sum += qs.tsap;
      ++tsap_n;
    }
    const auto gold = judgments.relevant(q.acronym);
    if (!gold.empty()) {
      qs.f1 = f1(qs.ranked, gold);
      f1_sum += qs.f1->f1;
      ++f1_n;
    }
    report.queries.push_back(std::move(qs));
  }
  if (tsap_n > 0) report.mean_tsap = tsap_sum / double(tsap_n);
  if (f1_n > 0) report.mean_f1 = f1_sum / double(f1_n);
  return report;
}

std::string ScoreReport::to_json() const {
  json j;
  j["dataset"] = dataset;
  j["mode"] = std::string(mode_name(mode));
  j["variant"] = std::string(variant_name(variant));
  json qs = json::array();
  for (const QueryScore& q : queries) {
    json e = {{"acronym", q.acronym},
              {"query", q.query},
              {"ranked", q.ranked},
              {"retrieved", q.retrieved},
              {"judged", q.judged}};
    e["tsap_at_10"] = q.judged ? json(q.tsap) : json(nullptr);
    if (q.f1) {
      e["precision"] = q.f1->precision;
      e["recall"] = q.f1->recall;
      e["f1"] = q.f1->f1;
    } else {
      e["precision"] = e["recall"] = e["f1"] = nullptr;
    }
    qs.push_back(std::move(e));
  }
  j["queries"] = std::move(qs);
  j["mean_tsap_at_10"] = mean_tsap ? json(*mean_tsap) : json(nullptr);
  j["mean_f1"] = mean_f1 ? json(*mean_f1) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string ScoreReport::to_table() const {
  std::ostringstream out;
  out << dataset << " / " << mode_name(mode) << " / " << variant_name(variant)
      << "\n";
  out << pad("query", 8) << pad("retrieved", 11) << pad("TSAP@10", 10)
      << pad("P", 8) << pad("R", 8) << "F-1\n";
  for (const QueryScore& q : queries) {
    out << pad(q.acronym, 8) << pad(std::to_string(q.retrieved), 11)
        << pad(q.judged ? fixed(q.tsap) : "-", 10)
        << pad(q.f1 ? fixed(q.f1->precision, 3) : "-", 8)
        << pad(q.f1 ? fixed(q.f1->recall, 3) : "-", 8)
        << (q.f1 ? fixed(q.f1->f1, 3) : "-") << "\n";
  }
  out << pad("mean", 19) << pad(mean_tsap ? fixed(*mean_tsap) : "-", 26)
      << (mean_f1 ? fixed(*mean_f1, 3) : "-") << "\n";
  return out.str();
}

std::string comparison_table(std::span<const ScoreReport> reports) {
  std::ostringstream out;
  out << pad("system", 28) << pad("mean TSAP@10", 14) << "mean F-1\n";
  for (const ScoreReport& r : reports) {
    std::string name = std::string(variant_name(r.variant)) + " (" +
                       std::string(mode_name(r.mode)) + ")";
    out << pad(name, 28) << pad(r.mean_tsap ? fixed(*r.mean_tsap) : "-", 14)
        << (r.mean_f1 ? fixed(*r.mean_f1, 3) : "-") << "\n";
  }
  return out.str();
}

}  // namespace edgesearch
