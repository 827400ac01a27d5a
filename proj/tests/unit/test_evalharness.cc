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

#include <algorithm>
#include <cctype>
#include <cmath>

#include "doctest.h"
#include "edgesearch/error.h"
#include "edgesearch/evalharness.h"
#include "support.h"

using namespace edgesearch;
using namespace edgesearch::testing;

namespace {

const SecretKey kKey = SecretKey::from_hex(
    "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");

std::vector<std::string> ids(int n, const char* prefix = "d") {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

JudgmentMap all(const std::vector<std::string>& docs, Relevance r) {
  JudgmentMap m;
  for (const auto& d : docs) m[d] = r;
  return m;
}

// Lowercase alphanumeric runs of a text.
std::vector<std::string> words_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + " ") {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  return out;
}

struct FixtureWorld {
  explicit FixtureWorld(IndexMode mode)
      : key(kKey),
        index(std::make_shared<const InvertedIndex>(
            ingest(fixture_dir() / "corpus", mode, &key))),
        cloud(index),
        searcher(fixture_db(), fixture_embeddings(), cloud,
                 mode == IndexMode::kEncrypted ? std::optional<SecretKey>(key)
                                               : std::nullopt) {}
  SecretKey key;
  std::shared_ptr<const InvertedIndex> index;
  LocalCloud cloud;
  EdgeSearcher searcher;
};

}  // namespace

TEST_CASE("TSAP@10 worked values") {
  const auto ten = ids(10);
  CHECK(tsap_at_10(ten, all(ten, Relevance::kHigh)) == doctest::Approx(0.29290).epsilon(5e-4));
  CHECK(tsap_at_10(ten, all(ten, Relevance::kIrrelevant)) == 0.0);
  JudgmentMap mixed = all(ten, Relevance::kIrrelevant);
  mixed["d0"] = Relevance::kHigh;
  mixed["d1"] = Relevance::kPartial;
  CHECK(tsap_at_10(ten, mixed) == doctest::Approx(0.125).epsilon(1e-12));
  // Unjudged and missing positions count as nothing.
  const std::vector<std::string> short_list{"d0", "zz"};
  CHECK(tsap_at_10(short_list, mixed) == doctest::Approx(0.1));
}

TEST_CASE("F-1 worked values") {
  const auto ten = ids(10);
  const std::set<std::string> gold10(ten.begin(), ten.end());
  auto s = f1(ten, gold10);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);
  s = f1(ids(10, "x"), gold10);
  CHECK(s.f1 == 0.0);
  CHECK(s.precision == 0.0);

  auto ranked = ids(5);
  for (const auto& x : ids(5, "x")) ranked.push_back(x);
  const auto twenty = ids(20);
  s = f1(ranked, std::set<std::string>(twenty.begin(), twenty.end()));
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(0.25));
  CHECK(s.f1 == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(f1(ranked, {}), ValidationError);
  CHECK(f1(std::vector<std::string>{}, gold10).f1 == 0.0);
}

TEST_CASE("property: TSAP bounds and irrelevant-tail permutations") {
  Gen g(4);
  const auto pool = ids(15);
  const std::vector<Relevance> scale{Relevance::kHigh, Relevance::kPartial,
                                     Relevance::kIrrelevant};
  for (int round = 0; round < 300; ++round) {
    JudgmentMap labels;
    for (const auto& d : pool) {
      if (g.coin(0.8)) labels[d] = g.pick(scale);
    }
    auto ranked = pool;
    std::shuffle(ranked.begin(), ranked.end(), g.engine());
    ranked.resize(g.between(0, 10));
    const double t = tsap_at_10(ranked, labels);
    CHECK(t >= 0.0);
    CHECK(t <= 0.29290 + 1e-12);

    // Shuffle the IRRELEVANT entries after the last relevant position.
    std::size_t last = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      auto it = labels.find(ranked[i]);
      if (it != labels.end() && it->second != Relevance::kIrrelevant) last = i + 1;
    }
    std::shuffle(ranked.begin() + std::ptrdiff_t(last), ranked.end(), g.engine());
    CHECK(tsap_at_10(ranked, labels) == t);

    if (!labels.empty()) {
      std::set<std::string> gold;
      for (const auto& [d, r] : labels) gold.insert(d);
      const auto s = f1(ranked, gold);
      CHECK(s.f1 >= 0.0);
      CHECK(s.f1 <= 1.0);
    }
  }
}

TEST_CASE("suites and judgment files") {
  const auto suite = BenchmarkSuite::load(fixture_dir() / "suites" / "planted.json");
  CHECK(suite.dataset == "planted");
  REQUIRE(suite.queries.size() == 2);
  CHECK(suite.queries[1].query == "cloud computing");
  CHECK_THROWS_AS(BenchmarkSuite::from_text(R"({"dataset":"x","queries":[
      {"acronym":"A","query":"a"},{"acronym":"A","query":"b"}]})"),
                  ParseError);
  CHECK_THROWS_AS(BenchmarkSuite::from_text("{"), ParseError);

  const auto j = JudgmentFile::from_text(
      R"({"judgments":{"Q":{"a":"HIGH","b":"PARTIAL","c":"IRRELEVANT"}}})");
  CHECK(j.judged("Q"));
  CHECK_FALSE(j.judged("R"));
  CHECK(j.relevant("Q") == std::set<std::string>{"a", "b"});
  CHECK_THROWS_AS(JudgmentFile::from_text(R"({"judgments":{"Q":{"a":"GREAT"}}})"),
                  ParseError);
  CHECK(parse_relevance("PARTIAL") == Relevance::kPartial);
  CHECK(relevance_name(Relevance::kHigh) == "HIGH");

  for (const char* name : {"bbc.json", "rfc.json"}) {
    const auto s = BenchmarkSuite::load(fixture_dir() / ".." / ".." / "data" / "suites" / name);
    CHECK(s.queries.size() == 10);
  }
}

TEST_CASE("planted corpus: expansion finds what the raw query cannot") {
  QuietLog quiet;
  const auto suite = BenchmarkSuite::load(fixture_dir() / "suites" / "planted.json");
  const auto judgments =
      JudgmentFile::load(fixture_dir() / "suites" / "planted.judgments.json");
  FixtureWorld plain(IndexMode::kPlain);
  const auto saed = run_benchmark(suite, plain.searcher, Variant::kSemantic, judgments);
  const auto base = run_benchmark(suite, plain.searcher, Variant::kPassThrough, judgments);
  REQUIRE(saed.mean_f1);
  REQUIRE(base.mean_f1);
  CHECK(*saed.mean_f1 >= *base.mean_f1);
  CHECK(*saed.mean_tsap > *base.mean_tsap);

  FixtureWorld enc(IndexMode::kEncrypted);
  const auto enc_base = run_benchmark(suite, enc.searcher, Variant::kPassThrough, judgments);
  for (const auto& q : enc_base.queries) {
    CHECK(q.retrieved == 0);
    CHECK(q.tsap == 0.0);
  }
}

TEST_CASE("encrypted pass-through retrieves exactly the phrase matches") {
  QuietLog quiet;
  FixtureWorld enc(IndexMode::kEncrypted);
  const auto docs = read_corpus(fixture_dir() / "corpus");
  for (const char* q : {"river bank", "cloud computing", "remote servers", "finance sector",
                        "heavy rain", "water", "hosted servers"}) {
    const auto pattern = words_of(q);
    std::set<std::string> expected;
    for (const auto& d : docs) {
      const auto w = words_of(d.text);
      for (std::size_t i = 0; i + pattern.size() <= w.size(); ++i) {
        if (std::equal(pattern.begin(), pattern.end(), w.begin() + std::ptrdiff_t(i))) {
          expected.insert(d.doc_id);
        }
      }
    }
    SearchOptions opts;
    opts.cutoff = 100;
    EdgeSearcher wide(fixture_db(), fixture_embeddings(), enc.cloud, enc.key, opts);
    const auto out = wide.search(q, Variant::kPassThrough);
    std::set<std::string> got;
    for (const auto& row : out.rows) got.insert(row.doc_id);
    CHECK_MESSAGE(got == expected, q);
  }
}

TEST_CASE("reports are deterministic and list unjudged queries") {
  QuietLog quiet;
  BenchmarkSuite suite = BenchmarkSuite::load(fixture_dir() / "suites" / "planted.json");
  suite.queries.push_back({"XX", "weather storm"});
  const auto judgments =
      JudgmentFile::load(fixture_dir() / "suites" / "planted.judgments.json");
  FixtureWorld plain(IndexMode::kPlain);
  const auto a = run_benchmark(suite, plain.searcher, Variant::kSemantic, judgments);
  const auto b = run_benchmark(suite, plain.searcher, Variant::kSemantic, judgments);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_table() == b.to_table());
  CHECK_FALSE(a.queries.back().judged);
  CHECK_FALSE(a.queries.back().f1);
  const auto base = run_benchmark(suite, plain.searcher, Variant::kPassThrough, judgments);
  const std::vector<ScoreReport> both{base, a};
  const auto table = comparison_table(both);
  CHECK(table.find("pass-through") != std::string::npos);
  CHECK(table.find("saed") != std::string::npos);
}
