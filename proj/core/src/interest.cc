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

#include "edgesearch/interest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "edgesearch/error.h"
#include "edgesearch/keyext.h"
#include "json.hpp"

namespace edgesearch {
namespace {

using json = nlohmann::json;

constexpr int kSnapshotVersion = 1;

// Portable uniform draw in [lo, hi): the top 53 bits of a splitmix64 stream.
class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    const double unit = double(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }
  std::size_t below(std::size_t n) { return std::size_t(next() % n); }

 private:
  std::uint64_t state_;
};

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - top);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

std::size_t argmax(std::span<const double> v) {
  return std::size_t(std::max_element(v.begin(), v.end()) - v.begin());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    rows.push_back(std::vector<double>(m.data.begin() + r * m.cols,
                                       m.data.begin() + (r + 1) * m.cols));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                        const char* name) {
  if (!j.is_array() || j.size() != rows) {
    throw ParseError(std::string("snapshot matrix '") + name + "' has wrong row count");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      throw ParseError(std::string("snapshot matrix '") + name + "' has wrong column count");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c].get<double>();
  }
  return m;
}

std::vector<double> vector_from_json(const json& j, std::size_t n,
                                     const char* name) {
  if (!j.is_array() || j.size() != n) {
    throw ParseError(std::string("snapshot vector '") + name + "' has wrong length");
  }
  return j.get<std::vector<double>>();
}

}  // namespace

TokenBag bag_of_words(std::string_view text) {
  TokenBag bag;
  for (const Token& t : tokenize_flat(text)) {
    if (is_keyword_candidate(t.lower)) bag.push_back(t.lower);
  }
  return bag;
}

// ---------------------------------------------------------------------------

std::vector<double> NBModel::joint_log_scores(const TokenBag& doc) const {
  std::vector<double> scores = log_priors;
  for (const std::string& token : doc) {
    auto it = log_likelihoods.find(token);
    if (it == log_likelihoods.end()) continue;
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] += it->second[c];
  }
  return scores;
}

NBModel train_nb(std::span<const LabeledDoc> docs) {
  std::set<std::string> label_set;
  for (const LabeledDoc& d : docs) label_set.insert(d.label);
  if (label_set.size() < 2) {
    throw TrainingError("naive bayes needs at least two labels, got " +
                        std::to_string(label_set.size()));
  }

  NBModel m;
  m.labels.assign(label_set.begin(), label_set.end());
  const std::size_t n_labels = m.labels.size();
  auto label_of = [&](const std::string& l) {
    return std::size_t(std::lower_bound(m.labels.begin(), m.labels.end(), l) -
                       m.labels.begin());
  };

  std::vector<double> doc_counts(n_labels, 0.0);
  std::vector<double> token_totals(n_labels, 0.0);
  std::map<std::string, std::vector<double>, std::less<>> counts;
  for (const LabeledDoc& d : docs) {
    const std::size_t c = label_of(d.label);
    doc_counts[c] += 1;
    for (const std::string& t : d.tokens) {
      auto& row = counts[t];
      if (row.empty()) row.assign(n_labels, 0.0);
      row[c] += 1;
      token_totals[c] += 1;
    }
  }

  m.log_priors.resize(n_labels);
  for (std::size_t c = 0; c < n_labels; ++c) {
    m.log_priors[c] = std::log(doc_counts[c] / double(docs.size()));
  }
  const double vocab = double(counts.size());
  for (auto& [token, row] : counts) {
    std::vector<double> ll(n_labels);
    for (std::size_t c = 0; c < n_labels; ++c) {
      ll[c] = std::log((row[c] + 1.0) / (token_totals[c] + vocab));
    }
    m.log_likelihoods.emplace(token, std::move(ll));
  }
  return m;
}

std::string classify_doc(const NBModel& model, const TokenBag& doc) {
  const auto scores = model.joint_log_scores(doc);
  return model.labels[argmax(scores)];  // first max = lexicographic tie-break
}

std::string session_interest(const NBModel& model,
                             std::span<const TokenBag> clicked_docs,
                             std::span<const double> dwell_seconds) {
  if (clicked_docs.empty()) {
    throw ValidationError("session_interest needs at least one document");
  }
  std::vector<std::string> labels;
  std::map<std::string, std::size_t> votes;
  for (const TokenBag& doc : clicked_docs) {
    labels.push_back(classify_doc(model, doc));
    ++votes[labels.back()];
  }
  std::size_t top = 0;
  for (const auto& [_, v] : votes) top = std::max(top, v);
  std::set<std::string> tied;
  for (const auto& [label, v] : votes) {
    if (v == top) tied.insert(label);
  }
  if (tied.size() == 1) return *tied.begin();

  if (dwell_seconds.size() == clicked_docs.size()) {
    double best_dwell = -1;
    std::set<std::string> longest;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!tied.count(labels[i])) continue;
      if (dwell_seconds[i] > best_dwell) {
        best_dwell = dwell_seconds[i];
        longest = {labels[i]};
      } else if (dwell_seconds[i] == best_dwell) {
        longest.insert(labels[i]);
      }
    }
    return *longest.begin();
  }
  return *tied.begin();
}

// ---------------------------------------------------------------------------

InterestHistory::InterestHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ValidationError("history capacity must be positive");
}

void InterestHistory::push(std::string label) {
  labels_.push_back(std::move(label));
  while (labels_.size() > capacity_) labels_.pop_front();
}

std::vector<std::string> InterestHistory::sequence() const {
  return {labels_.begin(), labels_.end()};
}

RnnParameters RnnParameters::zeros(std::size_t labels, std::size_t hidden) {
  RnnParameters p;
  p.input_hidden = Matrix(hidden, labels);
  p.hidden_hidden = Matrix(hidden, hidden);
  p.hidden_output = Matrix(labels, hidden);
  p.hidden_bias.assign(hidden, 0.0);
  p.output_bias.assign(labels, 0.0);
  return p;
}

std::vector<double*> RnnParameters::flat() {
  std::vector<double*> out;
  for (Matrix* m : {&input_hidden, &hidden_hidden, &hidden_output}) {
    for (double& x : m->data) out.push_back(&x);
  }
  for (double& x : hidden_bias) out.push_back(&x);
  for (double& x : output_bias) out.push_back(&x);
  return out;
}

RNNModel::RNNModel(std::vector<std::string> labels, std::size_t hidden)
    : labels_(std::move(labels)), hidden_(hidden) {
  if (labels_.empty()) throw ValidationError("RNN needs at least one label");
  if (hidden_ == 0) throw ValidationError("RNN hidden size must be positive");
  params_ = RnnParameters::zeros(labels_.size(), hidden_);
}

std::optional<std::size_t> RNNModel::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::vector<double> RNNModel::forward(
    std::span<const std::size_t> sequence) const {
  std::vector<double> h(hidden_, 0.0), next(hidden_);
  for (std::size_t x : sequence) {
    for (std::size_t i = 0; i < hidden_; ++i) {
      double a = params_.input_hidden(i, x) + params_.hidden_bias[i];
      for (std::size_t j = 0; j < hidden_; ++j) {
        a += params_.hidden_hidden(i, j) * h[j];
      }
      next[i] = std::tanh(a);
    }
    h.swap(next);
  }
  std::vector<double> logits(labels_.size());
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    double y = params_.output_bias[k];
    for (std::size_t i = 0; i < hidden_; ++i) y += params_.hidden_output(k, i) * h[i];
    logits[k] = y;
  }
  return softmax(logits);
}

double RNNModel::loss(std::span<const std::size_t> sequence, std::size_t target,
                      RnnParameters* gradients) const {
  const std::size_t steps = sequence.size();
  const std::size_t n_labels = labels_.size();
  // hs[t] is the hidden state after t inputs; hs[0] = 0.
  std::vector<std::vector<double>> hs(steps + 1, std::vector<double>(hidden_, 0.0));
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t x = sequence[t];
    for (std::size_t i = 0; i < hidden_; ++i) {
      double a = params_.input_hidden(i, x) + params_.hidden_bias[i];
      for (std::size_t j = 0; j < hidden_; ++j) {
        a += params_.hidden_hidden(i, j) * hs[t][j];
      }
      hs[t + 1][i] = std::tanh(a);
    }
  }
  std::vector<double> logits(n_labels);
  for (std::size_t k = 0; k < n_labels; ++k) {
    double y = params_.output_bias[k];
    for (std::size_t i = 0; i < hidden_; ++i) {
      y += params_.hidden_output(k, i) * hs[steps][i];
    }
    logits[k] = y;
  }
  const auto p = softmax(logits);
  const double value = -std::log(p[target]);
  if (gradients == nullptr) return value;

  RnnParameters& g = *gradients;
  std::vector<double> dy = p;
  dy[target] -= 1.0;
  std::vector<double> dh(hidden_, 0.0);
  for (std::size_t k = 0; k < n_labels; ++k) {
    g.output_bias[k] += dy[k];
    for (std::size_t i = 0; i < hidden_; ++i) {
      g.hidden_output(k, i) += dy[k] * hs[steps][i];
      dh[i] += params_.hidden_output(k, i) * dy[k];
    }
  }
  std::vector<double> da(hidden_);
  for (std::size_t t = steps; t-- > 0;) {
    const std::size_t x = sequence[t];
    for (std::size_t i = 0; i < hidden_; ++i) {
      da[i] = dh[i] * (1.0 - hs[t + 1][i] * hs[t + 1][i]);
      g.hidden_bias[i] += da[i];
      g.input_hidden(i, x) += da[i];
      for (std::size_t j = 0; j < hidden_; ++j) {
        g.hidden_hidden(i, j) += da[i] * hs[t][j];
      }
    }
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t i = 0; i < hidden_; ++i) {
      for (std::size_t j = 0; j < hidden_; ++j) {
        dh[j] += params_.hidden_hidden(i, j) * da[i];
      }
    }
  }
  return value;
}

std::string RNNModel::to_text() const {
  json j;
  j["format"] = "edgesearch-rnn";
  j["version"] = kSnapshotVersion;
  j["labels"] = labels_;
  j["hidden"] = hidden_;
  j["input_hidden"] = matrix_to_json(params_.input_hidden);
  j["hidden_hidden"] = matrix_to_json(params_.hidden_hidden);
  j["hidden_output"] = matrix_to_json(params_.hidden_output);
  j["hidden_bias"] = params_.hidden_bias;
  j["output_bias"] = params_.output_bias;
  return j.dump(1) + "\n";
}

RNNModel RNNModel::from_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("RNN snapshot: ") + e.what());
  }
  if (j.value("format", "") != "edgesearch-rnn") {
    throw ParseError("not an RNN snapshot");
  }
  if (j.value("version", 0) != kSnapshotVersion) {
    throw ParseError("unsupported RNN snapshot version");
  }
  try {
    RNNModel m(j.at("labels").get<std::vector<std::string>>(),
               j.at("hidden").get<std::size_t>());
    const std::size_t l = m.labels_.size();
    const std::size_t h = m.hidden_;
    m.params_.input_hidden = matrix_from_json(j.at("input_hidden"), h, l, "input_hidden");
    m.params_.hidden_hidden = matrix_from_json(j.at("hidden_hidden"), h, h, "hidden_hidden");
    m.params_.hidden_output = matrix_from_json(j.at("hidden_output"), l, h, "hidden_output");
    m.params_.hidden_bias = vector_from_json(j.at("hidden_bias"), h, "hidden_bias");
    m.params_.output_bias = vector_from_json(j.at("output_bias"), l, "output_bias");
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("RNN snapshot: ") + e.what());
  }
}

void RNNModel::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp);
    out << to_text();
  }
  std::filesystem::rename(tmp, path);
}

RNNModel RNNModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

RNNModel rnn_train(std::span<const RnnExample> examples,
                   const RnnTrainOptions& options) {
  if (examples.empty()) throw TrainingError("no RNN training examples");

  std::vector<std::string> labels = options.labels;
  if (labels.empty()) {
    std::set<std::string> seen;
    for (const RnnExample& e : examples) {
      seen.insert(e.sequence.begin(), e.sequence.end());
      seen.insert(e.next);
    }
    labels.assign(seen.begin(), seen.end());
  }
  RNNModel model(labels, options.hidden);

  struct Encoded {
    std::vector<std::size_t> sequence;
    std::size_t target;
  };
  std::vector<Encoded> data;
  for (const RnnExample& e : examples) {
    if (e.sequence.empty()) throw TrainingError("empty RNN training sequence");
    Encoded enc;
    for (const std::string& l : e.sequence) {
      auto i = model.label_index(l);
      if (!i) throw TrainingError("unknown label '" + l + "' in sequence");
      enc.sequence.push_back(*i);
    }
    auto t = model.label_index(e.next);
    if (!t) throw TrainingError("unknown label '" + e.next + "' as target");
    enc.target = *t;
    data.push_back(std::move(enc));
  }

  SeededUniform rng(options.seed);
  for (double* w : model.parameters().flat()) *w = rng.uniform(-0.1, 0.1);
  // Biases start at zero.
  auto& params = model.parameters();
  std::fill(params.hidden_bias.begin(), params.hidden_bias.end(), 0.0);
  std::fill(params.output_bias.begin(), params.output_bias.end(), 0.0);

  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t n_labels = labels.size();
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    for (std::size_t idx : order) {
      RnnParameters grad = RnnParameters::zeros(n_labels, options.hidden);
      model.loss(data[idx].sequence, data[idx].target, &grad);
      auto w = params.flat();
      auto g = grad.flat();
      for (std::size_t k = 0; k < w.size(); ++k) {
        *w[k] -= options.learning_rate * *g[k];
      }
    }
  }
  return model;
}

double rnn_mean_loss(const RNNModel& model,
                     std::span<const RnnExample> examples) {
  if (examples.empty()) return 0.0;
  double total = 0;
  for (const RnnExample& e : examples) {
    std::vector<std::size_t> seq;
    for (const std::string& l : e.sequence) {
      auto i = model.label_index(l);
      if (!i) throw ValidationError("unknown label '" + l + "'");
      seq.push_back(*i);
    }
    auto t = model.label_index(e.next);
    if (!t) throw ValidationError("unknown label '" + e.next + "'");
    total += model.loss(seq, *t);
  }
  return total / double(examples.size());
}

std::vector<RnnExample> examples_from_history(
    std::span<const std::string> history, std::size_t max_length) {
  std::vector<RnnExample> out;
  for (std::size_t end = 1; end < history.size(); ++end) {
    const std::size_t begin = end > max_length ? end - max_length : 0;
    out.push_back(RnnExample{
        std::vector<std::string>(history.begin() + begin, history.begin() + end),
        history[end]});
  }
  return out;
}

std::string_view interest_source_name(InterestSource s) {
  switch (s) {
    case InterestSource::kRnn: return "RNN";
    case InterestSource::kMajorityFallback: return "MAJORITY_FALLBACK";
    case InterestSource::kConfigured: return "CONFIGURED";
  }
  return "CONFIGURED";
}

InterestProfile predict_interest(const RNNModel* model,
                                 const InterestHistory& history,
                                 const std::optional<std::string>& configured) {
  if (history.empty()) {
    if (configured) return {*configured, 1.0, InterestSource::kConfigured};
    throw InterestUnavailable("no interest history and no configured interest");
  }
  const auto seq = history.sequence();
  if (model != nullptr) {
    std::vector<std::size_t> encoded;
    for (const std::string& l : seq) {
      if (auto i = model->label_index(l)) encoded.push_back(*i);
    }
    if (!encoded.empty()) {
      const auto p = model->forward(encoded);
      const std::size_t best = argmax(p);
      return {model->labels()[best], p[best], InterestSource::kRnn};
    }
  }
  std::map<std::string, std::size_t> votes;
  for (const std::string& l : seq) ++votes[l];
  std::string best;
  std::size_t best_votes = 0;
  for (const auto& [label, v] : votes) {
    if (v > best_votes) {
      best = label;
      best_votes = v;
    }
  }
  return {best, double(best_votes) / double(seq.size()),
          InterestSource::kMajorityFallback};
}

}  // namespace edgesearch
