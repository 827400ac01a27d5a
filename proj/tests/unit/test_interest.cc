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
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "edgesearch/error.h"
#include "edgesearch/interest.h"
#include "support.h"

using namespace edgesearch;
using edgesearch::testing::Gen;
using edgesearch::testing::TempDir;

namespace {

std::vector<LabeledDoc> two_label_fixture() {
  return {{{"goal", "match", "goal"}, "A"}, {{"vote", "match"}, "B"}};
}

// Straightforward multinomial NB used as the reference.
struct ReferenceNb {
  std::map<std::string, std::map<std::string, int>> counts;
  std::map<std::string, int> totals;
  std::map<std::string, int> docs;
  std::set<std::string> vocab;
  int n = 0;

  void add(const LabeledDoc& d) {
    ++docs[d.label];
    ++n;
    for (const auto& t : d.tokens) {
      ++counts[d.label][t];
      ++totals[d.label];
      vocab.insert(t);
    }
  }
  std::string classify(const TokenBag& doc) const {
    std::string best;
    double best_score = -1e300;
    for (const auto& [label, nd] : docs) {
      double s = std::log(double(nd) / n);
      for (const auto& t : doc) {
        if (!vocab.count(t)) continue;
        auto it = counts.at(label).find(t);
        const int c = it == counts.at(label).end() ? 0 : it->second;
        s += std::log((c + 1.0) / (totals.at(label) + double(vocab.size())));
      }
      if (s > best_score) {
        best_score = s;
        best = label;
      }
    }
    return best;
  }
};

void randomize(RnnParameters& p, Gen& g) {
  for (double* x : p.flat()) *x = g.uniform(-0.5, 0.5);
}

std::vector<RnnExample> alternating_examples() {
  std::vector<std::string> h;
  for (int i = 0; i < 12; ++i) h.push_back(i % 2 ? "B" : "A");
  return examples_from_history(h, 5);
}

}  // namespace

TEST_CASE("bag of words drops stopwords and lowercases") {
  CHECK(bag_of_words("The Goal of the match") == TokenBag{"goal", "match"});
}

TEST_CASE("naive Bayes: separable docs and the hand posterior") {
  const auto docs = two_label_fixture();
  const auto m = train_nb(docs);
  CHECK(m.labels == std::vector<std::string>{"A", "B"});
  CHECK(m.vocabulary_size() == 3);
  CHECK(classify_doc(m, docs[0].tokens) == "A");
  CHECK(classify_doc(m, docs[1].tokens) == "B");

  // A: goal 3/6, match 2/6, vote 1/6.  B: goal 1/5, match 2/5, vote 2/5.
  const auto s = m.joint_log_scores({"goal", "vote"});
  CHECK(s[0] == doctest::Approx(std::log(0.5 * 3 / 6 * 1 / 6)).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(std::log(0.5 * 1 / 5 * 2 / 5)).epsilon(1e-12));
  CHECK(classify_doc(m, {"goal", "vote"}) == "A");
  CHECK(classify_doc(m, {"match", "vote", "vote"}) == "B");

  double prior_sum = 0;
  for (double lp : m.log_priors) prior_sum += std::exp(lp);
  CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("naive Bayes: ties go to the first label") {
  const std::vector<LabeledDoc> docs{{{"x"}, "beta"}, {{"y"}, "alpha"}};
  const auto m = train_nb(docs);
  CHECK(classify_doc(m, {"unseen"}) == "alpha");
  CHECK(classify_doc(m, {}) == "alpha");
}

TEST_CASE("naive Bayes: symmetric corpus gives mirrored likelihoods") {
  const std::vector<LabeledDoc> docs{{{"a", "a", "b"}, "L"}, {{"c", "c", "d"}, "R"}};
  const auto m = train_nb(docs);
  CHECK(m.log_likelihoods.at("a")[0] == doctest::Approx(m.log_likelihoods.at("c")[1]));
  CHECK(m.log_likelihoods.at("b")[0] == doctest::Approx(m.log_likelihoods.at("d")[1]));
  CHECK(m.log_likelihoods.at("c")[0] == doctest::Approx(m.log_likelihoods.at("a")[1]));
}

TEST_CASE("naive Bayes: one label is a training error") {
  const std::vector<LabeledDoc> docs{{{"a"}, "L"}, {{"b"}, "L"}};
  CHECK_THROWS_AS(train_nb(docs), TrainingError);
  CHECK_THROWS_AS(train_nb(std::vector<LabeledDoc>{}), TrainingError);
}

TEST_CASE("naive Bayes: 5 labels, 50 docs, held-out accuracy") {
  Gen g(7);
  const std::vector<std::string> labels{"business", "politics", "sport", "tech", "weather"};
  std::vector<LabeledDoc> train, held;
  for (int i = 0; i < 50; ++i) {
    const std::string& label = labels[i % 5];
    LabeledDoc d{{}, label};
    const int len = int(g.between(8, 15));
    for (int k = 0; k < len; ++k) {
      // Two thirds topical words, one third shared noise.
      if (g.below(3) < 2) d.tokens.push_back(label + std::to_string(g.below(12)));
      else d.tokens.push_back("noise" + std::to_string(g.below(30)));
    }
    (i < 40 ? train : held).push_back(d);
  }
  ReferenceNb ref;
  for (const auto& d : train) ref.add(d);
  const auto m = train_nb(train);
  int ours = 0, theirs = 0;
  for (const auto& d : held) {
    const auto got = classify_doc(m, d.tokens);
    CHECK(got == ref.classify(d.tokens));
    ours += got == d.label;
    theirs += ref.classify(d.tokens) == d.label;
  }
  CHECK(theirs >= 8);
  CHECK(ours >= 8);
}

TEST_CASE("session interest: majority, single doc, dwell tie-break") {
  const auto m = train_nb(two_label_fixture());
  const TokenBag a{"goal"}, b{"vote"};
  const std::vector<TokenBag> aab{a, a, b};
  CHECK(session_interest(m, aab) == "A");
  const std::vector<TokenBag> one{b};
  CHECK(session_interest(m, one) == "B");
  const std::vector<TokenBag> ab{a, b};
  const std::vector<double> longer_b{5, 30};
  CHECK(session_interest(m, ab, longer_b) == "B");
  const std::vector<double> longer_a{30, 5};
  CHECK(session_interest(m, ab, longer_a) == "A");
  CHECK(session_interest(m, ab) == "A");
}

TEST_CASE("session interest is permutation invariant") {
  const auto m = train_nb(two_label_fixture());
  Gen g(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<TokenBag> docs;
    const int n = int(g.between(1, 7));
    for (int i = 0; i < n; ++i) docs.push_back({g.coin() ? "goal" : "vote"});
    const auto expected = session_interest(m, docs);
    std::shuffle(docs.begin(), docs.end(), g.engine());
    CHECK(session_interest(m, docs) == expected);
  }
}

TEST_CASE("interest history keeps the newest n labels") {
  InterestHistory h(3);
  for (const char* l : {"a", "b", "c", "d"}) h.push(l);
  CHECK(h.sequence() == std::vector<std::string>{"b", "c", "d"});
}

TEST_CASE("history examples are prefixes with the next label") {
  const std::vector<std::string> h{"A", "B", "C", "D"};
  const auto ex = examples_from_history(h, 2);
  REQUIRE(ex.size() == 3);
  CHECK(ex[0].sequence == std::vector<std::string>{"A"});
  CHECK(ex[0].next == "B");
  CHECK(ex[2].sequence == std::vector<std::string>{"B", "C"});
  CHECK(ex[2].next == "D");
}

TEST_CASE("RNN softmax sums to one") {
  RNNModel m({"A", "B", "C"}, 5);
  Gen g(3);
  randomize(m.parameters(), g);
  for (int i = 0; i < 20; ++i) {
    std::vector<std::size_t> seq;
    for (int k = 0, n = int(g.between(1, 8)); k < n; ++k) seq.push_back(g.below(3));
    const auto p = m.forward(seq);
    double sum = 0;
    for (double x : p) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("RNN backpropagation matches central differences") {
  Gen g(5);
  RNNModel m({"A", "B"}, 4);
  randomize(m.parameters(), g);
  const std::vector<std::size_t> seq{0, 1, 1, 0, 1};
  auto grads = RnnParameters::zeros(2, 4);
  m.loss(seq, 0, &grads);
  auto params = m.parameters().flat();
  auto analytic = grads.flat();
  REQUIRE(params.size() == analytic.size());
  const double eps = 1e-5;
  double worst = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = *params[i];
    *params[i] = keep + eps;
    const double up = m.loss(seq, 0);
    *params[i] = keep - eps;
    const double down = m.loss(seq, 0);
    *params[i] = keep;
    const double numeric = (up - down) / (2 * eps);
    const double denom = std::max({std::abs(numeric), std::abs(*analytic[i]), 1e-7});
    worst = std::max(worst, std::abs(numeric - *analytic[i]) / denom);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("RNN learns a constant pattern") {
  const std::vector<RnnExample> ex{{{"A", "A", "A"}, "A"}, {{"A", "B"}, "B"}};
  RnnTrainOptions opts;
  opts.epochs = 200;
  const auto m = rnn_train(ex, opts);
  InterestHistory h;
  for (int i = 0; i < 3; ++i) h.push("A");
  const auto p = predict_interest(&m, h, std::nullopt);
  CHECK(p.theta == "A");
  CHECK(p.confidence > 0.9);
  CHECK(p.source == InterestSource::kRnn);
}

TEST_CASE("RNN learns the alternating pattern reproducibly") {
  const auto ex = alternating_examples();
  RnnTrainOptions opts;
  opts.epochs = 500;
  opts.hidden = 4;
  opts.seed = 42;
  const auto m = rnn_train(ex, opts);
  CHECK(rnn_mean_loss(m, ex) < 0.1);
  const std::vector<std::size_t> aba{*m.label_index("A"), *m.label_index("B"),
                                     *m.label_index("A")};
  const auto p = m.forward(aba);
  CHECK(p[*m.label_index("B")] > 0.5);
  CHECK(rnn_train(ex, opts).to_text() == m.to_text());
}

TEST_CASE("RNN training rejects an empty set") {
  CHECK_THROWS_AS(rnn_train(std::vector<RnnExample>{}, RnnTrainOptions{}), TrainingError);
}

TEST_CASE("RNN snapshot round trip") {
  TempDir dir;
  RNNModel m({"x", "y"}, 3);
  Gen g(9);
  randomize(m.parameters(), g);
  m.save(dir / "m.json");
  const auto back = RNNModel::load(dir / "m.json");
  CHECK(back.to_text() == m.to_text());
  const std::vector<std::size_t> seq{1, 0};
  CHECK(back.forward(seq) == m.forward(seq));
  CHECK_THROWS(RNNModel::from_text("{\"format\":\"other\"}"));
}

TEST_CASE("predict interest fallbacks") {
  InterestHistory h;
  const auto configured = predict_interest(nullptr, h, std::string("technology"));
  CHECK(configured.theta == "technology");
  CHECK(configured.source == InterestSource::kConfigured);
  CHECK_THROWS_AS(predict_interest(nullptr, h, std::nullopt), InterestUnavailable);
  for (const char* l : {"A", "A", "B"}) h.push(l);
  const auto fallback = predict_interest(nullptr, h, std::nullopt);
  CHECK(fallback.theta == "A");
  CHECK(fallback.source == InterestSource::kMajorityFallback);
  CHECK(interest_source_name(fallback.source) == "MAJORITY_FALLBACK");
}
