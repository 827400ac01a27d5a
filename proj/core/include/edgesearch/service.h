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

#ifndef EDGESEARCH_SERVICE_H_
#define EDGESEARCH_SERVICE_H_

#include <cstdint>
#include <memory>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgesearch/cloudsim.h"
#include "edgesearch/config.h"
#include "edgesearch/embeddings.h"
#include "edgesearch/history.h"
#include "edgesearch/interest.h"
#include "edgesearch/lexstore.h"
#include "edgesearch/pipeline.h"

namespace edgesearch {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Pattern-matching tier reached over HTTP (the /cloud/* endpoints).
class HttpCloud : public CloudBackend {
 public:
  HttpCloud(std::string base_url, IndexMode mode);
  ~HttpCloud() override;

  IndexMode mode() const override { return mode_; }
  MatchSet match(std::span<const SearchToken> terms) override;
  std::optional<DocumentRecord> fetch(std::string_view doc_id) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  IndexMode mode_;
};

struct IngestSummary {
  std::size_t documents = 0;
  std::size_t tokens = 0;  // distinct index tokens
  IndexMode mode = IndexMode::kPlain;
};

struct TrainSummary {
  std::size_t users = 0;
  std::size_t examples = 0;
  double mean_loss = 0;
  std::vector<std::string> labels;
};

// Rebuilds the index from config.corpus_dir and writes the snapshot. Needs
// neither the lexical database nor the embeddings.
IngestSummary ingest_corpus(const AppConfig& config,
                            std::shared_ptr<const InvertedIndex>* built = nullptr);

// The edge tier as a process: resources, index, models and histories, with a
// transport-independent request router.
class EdgeService {
 public:
  // Loads resources and the index snapshot, building the index from the
  // corpus when no snapshot exists. `cloud` replaces the local pattern
  // matcher when given.
  explicit EdgeService(AppConfig config,
                       std::unique_ptr<CloudBackend> cloud = nullptr);
  ~EdgeService();

  const AppConfig& config() const { return config_; }

  IngestSummary ingest();
  SearchOutcome search(std::string_view user, std::string_view query,
                       Variant variant = Variant::kSemantic);
  ClickRecord feedback(std::string_view user, std::string_view query_id,
                       std::string_view query,
                       const std::vector<std::string>& clicked,
                       const std::vector<double>& dwell);
  std::optional<InterestProfile> interest(std::string_view user) const;
  TrainSummary train_interest();
  std::optional<std::string> document(std::string_view doc_id);

  std::string topic_of(std::string_view doc_id);

  ApiResponse handle(std::string_view method, std::string_view target,
                     std::string_view body);

  static std::string query_id(std::string_view user, std::string_view query);

  LocalCloud* local_cloud() { return local_.get(); }
  EdgeSearcher& searcher() { return *searcher_; }

 private:
  std::shared_ptr<const RNNModel> rnn() const;

  AppConfig config_;
  std::optional<SecretKey> key_;
  LexicalDatabase db_;
  EmbeddingTable emb_;
  std::unique_ptr<LocalCloud> local_;
  std::unique_ptr<CloudBackend> remote_;
  std::unique_ptr<EdgeSearcher> searcher_;
  std::optional<NBModel> topics_;
  HistoryStore history_;

  mutable std::mutex model_mu_;
  std::shared_ptr<const RNNModel> rnn_;
  std::mutex ingest_mu_;
  std::mutex train_mu_;
  std::mutex queries_mu_;
  std::map<std::string, std::string> recent_queries_;
};

// Blocking HTTP front end over EdgeService::handle, with the /cloud/*
// endpoints answered from the local index and /ui served from ui_dir.
class HttpServer {
 public:
  explicit HttpServer(EdgeService& service);
  ~HttpServer();

  // Binds, then serves until stop(). Port 0 picks a free port.
  bool bind(const std::string& host, int port);
  int port() const { return port_; }
  void listen();  // blocks
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace edgesearch

#endif  // EDGESEARCH_SERVICE_H_
