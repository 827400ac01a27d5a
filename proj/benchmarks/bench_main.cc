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


#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "edgesearch/cloudsim.h"
#include "edgesearch/context.h"
#include "edgesearch/embeddings.h"
#include "edgesearch/expand.h"
#include "edgesearch/keyext.h"
#include "edgesearch/lexstore.h"
#include "edgesearch/rank.h"

namespace {

using namespace edgesearch;

const std::filesystem::path kFixtures = EDGESEARCH_FIXTURE_DIR;

const SecretKey& bench_key() {
  static const SecretKey key = SecretKey::from_hex(
      "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
  return key;
}

const LexicalDatabase& fixture_db() {
  static const LexicalDatabase db = LexicalDatabase::load(kFixtures / "wordnet");
  return db;
}

const EmbeddingTable& fixture_embeddings() {
  static const EmbeddingTable emb = EmbeddingTable::load(kFixtures / "embeddings.txt");
  return emb;
}

// Zipf-ish synthetic corpus over a fixed vocabulary, same for every run.
std::vector<CorpusDocument> synthetic_corpus(std::size_t docs, std::size_t words) {
  std::mt19937_64 rng(7);
  std::vector<std::string> vocab;
  for (int i = 0; i < 2000; ++i) vocab.push_back("w" + std::to_string(i));
  std::vector<double> weights;
  for (int i = 0; i < 2000; ++i) weights.push_back(1.0 / (i + 1));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<CorpusDocument> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string text;
    for (std::size_t w = 0; w < words; ++w) {
      text += vocab[pick(rng)];
      text += (w % 15 == 14) ? ". " : " ";
    }
    out.push_back({"doc" + std::to_string(d), text});
  }
  return out;
}

void BM_EncryptToken(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(encrypt_token(bench_key(), "network"));
  }
}
BENCHMARK(BM_EncryptToken);

void BM_ExtractKeywords(benchmark::State& state) {
  const auto corpus = synthetic_corpus(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_keywords(corpus[0].text, 20));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExtractKeywords)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_IdentifyContext(benchmark::State& state) {
  const auto query = QueryText::parse("best selling books of J.K. Rowling");
  for (auto _ : state) {
    benchmark::DoNotOptimize(identify_context(query, fixture_db()));
  }
}
BENCHMARK(BM_IdentifyContext);

void BM_ExpandQuery(benchmark::State& state) {
  const auto query = QueryText::parse("cloud computing");
  const auto context = identify_context(query, fixture_db());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        expand_query(query, context, fixture_db(), fixture_embeddings(), {}));
  }
}
BENCHMARK(BM_ExpandQuery);

void BM_BuildIndex(benchmark::State& state) {
  const auto mode = state.range(1) ? IndexMode::kEncrypted : IndexMode::kPlain;
  const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_index(corpus, mode, &bench_key()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->ArgsProduct({{100, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_MatchAndRank(benchmark::State& state) {
  const auto mode = state.range(0) ? IndexMode::kEncrypted : IndexMode::kPlain;
  const auto index = build_index(synthetic_corpus(2000, 200), mode, &bench_key());
  std::vector<SearchToken> tokens;
  std::vector<ExpandedTerm> terms;
  for (const char* t : {"w3", "w40", "w41 w42", "w500", "w7 w8"}) {
    tokens.push_back(*make_search_token(t, mode, &bench_key()));
    terms.push_back(ExpandedTerm{t, Provenance::kContext, "w3", 0.5, std::nullopt});
  }
  for (auto _ : state) {
    const MatchSet delta = match(index, tokens);
    benchmark::DoNotOptimize(rank_documents(delta, terms));
  }
}
BENCHMARK(BM_MatchAndRank)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
