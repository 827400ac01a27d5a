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

#ifndef EDGESEARCH_INTEREST_H_
#define EDGESEARCH_INTEREST_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgesearch {

using TokenBag = std::vector<std::string>;

// Lowercase keyword-candidate tokens of `text`.
TokenBag bag_of_words(std::string_view text);

// ---------------------------------------------------------------------------
// Topic classification of clicked documents.

struct LabeledDoc {
  TokenBag tokens;
  std::string label;
};

// Multinomial Naive Bayes with add-one smoothing over the union vocabulary.
struct NBModel {
  std::vector<std::string> labels;  // sorted
  std::vector<double> log_priors;   // aligned with labels
  // token -> log P(token | label) for each label
  std::map<std::string, std::vector<double>, std::less<>> log_likelihoods;

  std::size_t vocabulary_size() const { return log_likelihoods.size(); }
  // log P(label) + sum of log P(token | label) over known tokens.
  std::vector<double> joint_log_scores(const TokenBag& doc) const;
};

// Needs at least two distinct labels. Throws TrainingError otherwise.
NBModel train_nb(std::span<const LabeledDoc> docs);

// Argmax of joint_log_scores; unseen tokens are skipped, ties go to the
// lexicographically first label.
std::string classify_doc(const NBModel& model, const TokenBag& doc);

// Majority vote over per-document labels. A tie goes to the label of the
// longest-dwell document among the tied labels, then to the lexicographically
// first label. `dwell_seconds` may be empty.
std::string session_interest(const NBModel& model,
                             std::span<const TokenBag> clicked_docs,
                             std::span<const double> dwell_seconds = {});

// ---------------------------------------------------------------------------
// Interest history and the next-interest predictor.

struct ClickRecord {
  std::string query;
  std::vector<std::string> clicked_doc_ids;
  std::vector<double> dwell_seconds;  // aligned with clicked_doc_ids
  std::int64_t timestamp = 0;         // seconds since epoch
  std::string topic;                  // session interest derived from clicks
};

// The n most recent session interests, oldest first.
class InterestHistory {
 public:
  explicit InterestHistory(std::size_t capacity = 20);

  void push(std::string label);
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::vector<std::string> sequence() const;

 private:
  std::size_t capacity_;
  std::deque<std::string> labels_;
};

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

struct RnnParameters {
  Matrix input_hidden;   // hidden x labels (one-hot input)
  Matrix hidden_hidden;  // hidden x hidden
  Matrix hidden_output;  // labels x hidden
  std::vector<double> hidden_bias;
  std::vector<double> output_bias;

  static RnnParameters zeros(std::size_t labels, std::size_t hidden);
  // Every parameter in a fixed order, for gradient checks and updates.
  std::vector<double*> flat();
};

// Many-to-one vanilla RNN: one-hot label inputs, tanh recurrence, softmax
// over labels from the final hidden state.
class RNNModel {
 public:
  RNNModel() = default;
  RNNModel(std::vector<std::string> labels, std::size_t hidden);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t hidden_size() const { return hidden_; }
  RnnParameters& parameters() { return params_; }
  const RnnParameters& parameters() const { return params_; }

  std::optional<std::size_t> label_index(std::string_view label) const;

  // Softmax over labels after running the whole sequence.
  std::vector<double> forward(std::span<const std::size_t> sequence) const;

  // Cross-entropy of `target` after `sequence`. When `gradients` is given,
  // adds d(loss)/d(parameters) computed by backpropagation through time.
  double loss(std::span<const std::size_t> sequence, std::size_t target,
              RnnParameters* gradients = nullptr) const;

  // Versioned JSON text snapshot: labels plus decimal weight matrices.
  std::string to_text() const;
  static RNNModel from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static RNNModel load(const std::filesystem::path& path);

 private:
  std::vector<std::string> labels_;
  std::size_t hidden_ = 0;
  RnnParameters params_;
};

struct RnnExample {
  std::vector<std::string> sequence;
  std::string next;
};

struct RnnTrainOptions {
  std::size_t hidden = 16;
  std::size_t epochs = 200;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  // Label universe; derived from the examples when empty.
  std::vector<std::string> labels;
};

// Per-example gradient descent over full BPTT gradients, examples visited in
// a seeded shuffled order each epoch. Bit-reproducible for a fixed seed.
RNNModel rnn_train(std::span<const RnnExample> examples,
                   const RnnTrainOptions& options);

double rnn_mean_loss(const RNNModel& model,
                     std::span<const RnnExample> examples);

// Every (prefix, next label) pair of a history, prefixes ending at each
// position and at most `max_length` long.
std::vector<RnnExample> examples_from_history(
    std::span<const std::string> history, std::size_t max_length);

enum class InterestSource { kRnn, kMajorityFallback, kConfigured };

std::string_view interest_source_name(InterestSource s);

struct InterestProfile {
  std::string theta;
  double confidence = 0;
  InterestSource source = InterestSource::kConfigured;
};

// RNN prediction over the history when a model is given; majority label of
// the history otherwise; the configured label when the history is empty.
// Throws InterestUnavailable when nothing applies.
InterestProfile predict_interest(const RNNModel* model,
                                 const InterestHistory& history,
                                 const std::optional<std::string>& configured);

}  // namespace edgesearch

#endif  // EDGESEARCH_INTEREST_H_
