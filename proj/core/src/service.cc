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

#include "edgesearch/service.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>

#include "edgesearch/error.h"
#include "edgesearch/log.h"
#include "httplib.h"
#include "json.hpp"

namespace edgesearch {
namespace {

using json = nlohmann::json;

// An error with an HTTP status and a machine-readable code.
class ApiError : public Error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

ApiResponse json_response(int status, const json& body) {
  return ApiResponse{status, body.dump() + "\n", "application/json"};
}

ApiResponse error_response(int status, std::string_view code,
                           std::string_view message) {
  return json_response(
      status, {{"error", {{"code", code}, {"message", message}}}});
}

json parse_body(std::string_view body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) {
      throw ApiError(400, "malformed_request", "request body must be a JSON object");
    }
    return j;
  } catch (const json::exception& e) {
    throw ApiError(400, "malformed_request", std::string("invalid JSON: ") + e.what());
  }
}

std::string require_string(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw ApiError(400, "missing_field",
                   std::string("'") + field + "' must be a string");
  }
  return j.at(field).get<std::string>();
}

std::string percent_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(char(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

json profile_json(const InterestProfile& p) {
  return {{"theta", p.theta},
          {"confidence", p.confidence},
          {"source", std::string(interest_source_name(p.source))}};
}

json outcome_json(const SearchOutcome& out, IndexMode mode) {
  json results = json::array();
  std::size_t rank = 0;
  for (const ResultRow& r : out.rows) {
    json e = {{"rank", ++rank}, {"doc_id", r.doc_id}, {"title", r.title},
              {"score", r.score}};
    if (mode == IndexMode::kPlain && r.snippet) e["snippet"] = *r.snippet;
    results.push_back(std::move(e));
  }
  json terms = json::array();
  for (const ExpandedTerm& t : out.dispatched) {
    json e = {{"term", t.term},
              {"provenance", std::string(provenance_name(t.provenance))},
              {"weight", t.weight}};
    if (!t.parent.empty()) e["parent"] = t.parent;
    if (t.score) e["similarity"] = *t.score;
    terms.push_back(std::move(e));
  }
  json trace = {{"terms", terms}};
  if (out.expanded) {
    trace["mu"] = out.expanded->mu ? json(*out.expanded->mu) : json(nullptr);
  }
  if (out.context) {
    trace["context"] = out.context->context;
    trace["name_entities"] = out.context->name_entities;
    trace["keywords"] = out.context->keywords;
    trace["used_fallback"] = out.context->used_fallback;
  }
  return {{"query", out.query},
          {"variant", std::string(variant_name(out.variant))},
          {"mode", std::string(mode_name(mode))},
          {"retrieved", out.retrieved},
          {"results", results},
          {"trace", trace},
          {"theta", out.theta ? profile_json(*out.theta) : json(nullptr)},
          {"timings",
           {{"expansion_ms", out.timings.expansion_ms},
            {"match_ms", out.timings.match_ms},
            {"rank_ms", out.timings.rank_ms}}}};
}

std::vector<LabeledDoc> read_topics(const std::filesystem::path& dir) {
  std::vector<LabeledDoc> docs;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ResourceError("topics directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> labels;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
    if (e.is_directory()) labels.push_back(e.path());
  }
  std::sort(labels.begin(), labels.end());
  for (const auto& label_dir : labels) {
    for (const CorpusDocument& d : read_corpus(label_dir)) {
      docs.push_back(LabeledDoc{bag_of_words(d.text), label_dir.filename().string()});
    }
  }
  return docs;
}

}  // namespace

// ---------------------------------------------------------------------------

struct HttpCloud::Impl {
  explicit Impl(const std::string& url) : client(url) {
    client.set_connection_timeout(5);
    client.set_read_timeout(30);
  }
  httplib::Client client;
  std::mutex mu;
};

HttpCloud::HttpCloud(std::string base_url, IndexMode mode)
    : impl_(std::make_unique<Impl>(base_url)), mode_(mode) {}

HttpCloud::~HttpCloud() = default;

MatchSet HttpCloud::match(std::span<const SearchToken> terms) {
  const std::string body = match_request_to_json(terms);
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto res = impl_->client.Post("/cloud/match", body, "application/json");
  if (!res) throw Error("cloud backend unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error("cloud backend answered " + std::to_string(res->status));
  }
  return match_set_from_json(res->body);
}

std::optional<DocumentRecord> HttpCloud::fetch(std::string_view doc_id) {
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto res = impl_->client.Get("/cloud/doc/" + percent_encode(doc_id));
  if (!res) throw Error("cloud backend unreachable: " + httplib::to_string(res.error()));
  if (res->status == 404) return std::nullopt;
  if (res->status != 200) {
    throw Error("cloud backend answered " + std::to_string(res->status));
  }
  return document_from_json(res->body);
}

// ---------------------------------------------------------------------------

IngestSummary ingest_corpus(const AppConfig& config,
                            std::shared_ptr<const InvertedIndex>* built) {
  config.validate();
  if (config.corpus_dir.empty()) throw ConfigError("no corpus directory configured");
  const auto key = config.secret_key();
  auto index = std::make_shared<const InvertedIndex>(
      ingest(config.corpus_dir, config.mode, key ? &*key : nullptr));
  index->save(config.index_path());
  IngestSummary s{index->doc_count(), index->all_postings().size(), index->mode()};
  if (built) *built = std::move(index);
  return s;
}

EdgeService::EdgeService(AppConfig config, std::unique_ptr<CloudBackend> cloud)
    : config_(std::move(config)), history_(config_.history_dir()) {
  config_.validate();
  key_ = config_.secret_key();
  db_ = LexicalDatabase::load(config_.wordnet_dir);
  emb_ = EmbeddingTable::load(config_.embeddings);

  if (!cloud && config_.cloud_url) {
    cloud = std::make_unique<HttpCloud>(*config_.cloud_url, config_.mode);
  }
  remote_ = std::move(cloud);

  std::error_code ec;
  std::shared_ptr<const InvertedIndex> index;
  if (std::filesystem::exists(config_.index_path(), ec)) {
    auto loaded = std::make_shared<const InvertedIndex>(
        InvertedIndex::load(config_.index_path()));
    if (loaded->mode() == config_.mode) {
      index = std::move(loaded);
    } else {
      log_warning("index snapshot is " + std::string(mode_name(loaded->mode())) +
                  " but mode is " + std::string(mode_name(config_.mode)) +
                  "; rebuilding");
    }
  }
  if (!index && !remote_) ingest_corpus(config_, &index);
  if (index) local_ = std::make_unique<LocalCloud>(std::move(index));

  SearchOptions opts;
  opts.cutoff = config_.cutoff;
  opts.expansion.knn = config_.knn;
  opts.weights.eta_max = config_.eta_max;
  CloudBackend& backend = remote_ ? *remote_ : static_cast<CloudBackend&>(*local_);
  searcher_ = std::make_unique<EdgeSearcher>(db_, emb_, backend, key_, opts);

  if (config_.topics_dir) {
    const auto docs = read_topics(*config_.topics_dir);
    topics_ = train_nb(docs);
  }
  if (std::filesystem::exists(config_.model_path(), ec)) {
    rnn_ = std::make_shared<const RNNModel>(RNNModel::load(config_.model_path()));
  }
}

EdgeService::~EdgeService() = default;

std::string EdgeService::query_id(std::string_view user, std::string_view query) {
  std::uint64_t h = 14695981039346656037ULL;  // FNV-1a
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  mix(user);
  mix(std::string_view("\0", 1));
  mix(query);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::shared_ptr<const RNNModel> EdgeService::rnn() const {
  std::lock_guard<std::mutex> lock(model_mu_);
  return rnn_;
}

IngestSummary EdgeService::ingest() {
  std::lock_guard<std::mutex> lock(ingest_mu_);
  std::shared_ptr<const InvertedIndex> index;
  IngestSummary s = ingest_corpus(config_, &index);
  if (local_) {
    local_->replace(std::move(index));
  } else {
    local_ = std::make_unique<LocalCloud>(std::move(index));
  }
  return s;
}

SearchOutcome EdgeService::search(std::string_view user, std::string_view query,
                                  Variant variant) {
  if (!HistoryStore::valid_user(user)) throw ValidationError("invalid user id");
  std::optional<InterestProfile> theta;
  if (variant == Variant::kSemantic) theta = interest(user);
  SearchOutcome out = searcher_->search(query, variant, theta);
  std::lock_guard<std::mutex> lock(queries_mu_);
  if (recent_queries_.size() > 4096) recent_queries_.clear();
  recent_queries_[query_id(user, out.query)] = out.query;
  return out;
}

std::optional<InterestProfile> EdgeService::interest(std::string_view user) const {
  const InterestHistory h = history_.replay(user, config_.history);
  auto model = rnn();
  try {
    return predict_interest(model.get(), h, config_.default_interest);
  } catch (const InterestUnavailable&) {
    return std::nullopt;
  }
}

std::string EdgeService::topic_of(std::string_view doc_id) {
  if (!topics_) {
    throw ApiError(503, "topics_unavailable", "no topic corpus configured");
  }
  CloudBackend& backend = remote_ ? *remote_ : static_cast<CloudBackend&>(*local_);
  auto doc = backend.fetch(doc_id);
  if (!doc) throw ApiError(404, "unknown_document", "no document '" + std::string(doc_id) + "'");
  const std::string body =
      document_body(*doc, config_.mode, key_ ? &*key_ : nullptr);
  return classify_doc(*topics_, bag_of_words(body));
}

ClickRecord EdgeService::feedback(std::string_view user, std::string_view qid,
                                  std::string_view query,
                                  const std::vector<std::string>& clicked,
                                  const std::vector<double>& dwell) {
  if (!HistoryStore::valid_user(user)) throw ValidationError("invalid user id");
  if (clicked.empty()) throw ValidationError("feedback needs at least one clicked doc");
  if (!dwell.empty() && dwell.size() != clicked.size()) {
    throw ValidationError("dwell must align with clicked doc ids");
  }
  for (double d : dwell) {
    if (!(d >= 0)) throw ValidationError("dwell must be non-negative");
  }
  if (!topics_) {
    throw ApiError(503, "topics_unavailable", "no topic corpus configured");
  }

  ClickRecord record;
  record.query = std::string(query);
  if (record.query.empty() && !qid.empty()) {
    std::lock_guard<std::mutex> lock(queries_mu_);
    if (auto it = recent_queries_.find(std::string(qid)); it != recent_queries_.end()) {
      record.query = it->second;
    }
  }
  record.clicked_doc_ids = clicked;
  record.dwell_seconds = dwell;
  record.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();

  CloudBackend& backend = remote_ ? *remote_ : static_cast<CloudBackend&>(*local_);
  std::vector<TokenBag> bags;
  for (const std::string& id : clicked) {
    auto doc = backend.fetch(id);
    if (!doc) throw ApiError(404, "unknown_document", "no document '" + id + "'");
    bags.push_back(
        bag_of_words(document_body(*doc, config_.mode, key_ ? &*key_ : nullptr)));
  }
  record.topic = session_interest(*topics_, bags, dwell);
  history_.append(user, record);
  return record;
}

TrainSummary EdgeService::train_interest() {
  std::lock_guard<std::mutex> lock(train_mu_);
  TrainSummary s;
  std::vector<RnnExample> examples;
  for (const std::string& user : history_.users()) {
    const auto seq = history_.replay(user, config_.history).sequence();
    auto ex = examples_from_history(seq, config_.history);
    if (!ex.empty()) ++s.users;
    examples.insert(examples.end(), ex.begin(), ex.end());
  }
  if (examples.empty()) {
    throw TrainingError("no user has at least two recorded sessions");
  }
  RnnTrainOptions opts;
  opts.hidden = config_.rnn_hidden;
  opts.epochs = config_.rnn_epochs;
  if (topics_) opts.labels = topics_->labels;
  auto model = std::make_shared<const RNNModel>(rnn_train(examples, opts));
  model->save(config_.model_path());
  s.examples = examples.size();
  s.mean_loss = rnn_mean_loss(*model, examples);
  s.labels = model->labels();
  std::lock_guard<std::mutex> mlock(model_mu_);
  rnn_ = std::move(model);
  return s;
}

std::optional<std::string> EdgeService::document(std::string_view doc_id) {
  CloudBackend& backend = remote_ ? *remote_ : static_cast<CloudBackend&>(*local_);
  auto doc = backend.fetch(doc_id);
  if (!doc) return std::nullopt;
  return document_body(*doc, config_.mode, key_ ? &*key_ : nullptr);
}

ApiResponse EdgeService::handle(std::string_view method, std::string_view target,
                                std::string_view body) {
  std::string_view path = target.substr(0, target.find('?'));
  auto tail = [&](std::string_view prefix) -> std::optional<std::string> {
    if (path.size() <= prefix.size() || path.substr(0, prefix.size()) != prefix) {
      return std::nullopt;
    }
    return std::string(path.substr(prefix.size()));
  };

  try {
    if (method == "GET" && path == "/healthz") {
      json j = {{"status", "ok"}, {"mode", std::string(mode_name(config_.mode))}};
      if (local_) j["documents"] = local_->snapshot()->doc_count();
      return json_response(200, j);
    }
    if (method == "POST" && path == "/ingest") {
      IngestSummary s = ingest();
      return json_response(200, {{"documents", s.documents},
                                 {"index_tokens", s.tokens},
                                 {"mode", std::string(mode_name(s.mode))}});
    }
    if (method == "POST" && path == "/search") {
      const json j = parse_body(body);
      const std::string user = require_string(j, "user_id");
      const std::string query = require_string(j, "query");
      Variant variant = Variant::kSemantic;
      if (j.contains("variant")) {
        auto v = parse_variant(require_string(j, "variant"));
        if (!v) throw ApiError(400, "invalid_variant", "variant must be pass-through or saed");
        variant = *v;
      }
      SearchOutcome out = search(user, query, variant);
      json resp = outcome_json(out, config_.mode);
      resp["query_id"] = query_id(user, out.query);
      resp["user_id"] = user;
      return json_response(200, resp);
    }
    if (method == "POST" && path == "/feedback") {
      const json j = parse_body(body);
      const std::string user = require_string(j, "user_id");
      std::vector<std::string> clicked;
      std::vector<double> dwell;
      try {
        clicked = j.at("clicked").get<std::vector<std::string>>();
        if (j.contains("dwell")) dwell = j.at("dwell").get<std::vector<double>>();
      } catch (const json::exception&) {
        throw ApiError(400, "missing_field",
                       "'clicked' must be a list of doc ids and 'dwell' a list of seconds");
      }
      const std::string qid = j.value("query_id", "");
      const std::string query = j.value("query", "");
      ClickRecord r = feedback(user, qid, query, clicked, dwell);
      auto p = interest(user);
      return json_response(200, {{"recorded",
                                  {{"query", r.query},
                                   {"clicked", r.clicked_doc_ids},
                                   {"dwell", r.dwell_seconds},
                                   {"topic", r.topic}}},
                                 {"interest", p ? profile_json(*p) : json(nullptr)}});
    }
    if (method == "GET") {
      if (auto id = tail("/doc/")) {
        auto text = document(*id);
        if (!text) return error_response(404, "unknown_document", "no document '" + *id + "'");
        CloudBackend& backend =
            remote_ ? *remote_ : static_cast<CloudBackend&>(*local_);
        auto rec = backend.fetch(*id);
        return json_response(
            200, {{"doc_id", *id},
                  {"title", document_title(*rec, config_.mode, key_ ? &*key_ : nullptr)},
                  {"body", *text}});
      }
      if (auto user = tail("/interest/")) {
        if (!HistoryStore::valid_user(*user)) throw ValidationError("invalid user id");
        auto p = interest(*user);
        if (!p) {
          return error_response(404, "interest_unavailable",
                                "no history and no default interest for '" + *user + "'");
        }
        json j = profile_json(*p);
        j["user_id"] = *user;
        j["history"] = history_.replay(*user, config_.history).sequence();
        return json_response(200, j);
      }
      if (auto id = tail("/cloud/doc/")) {
        if (!local_) return error_response(404, "no_index", "no local index");
        const DocumentRecord* d = local_->snapshot()->document(*id);
        if (d == nullptr) return error_response(404, "unknown_document", "no such document");
        return ApiResponse{200, document_to_json(*d), "application/json"};
      }
    }
    if (method == "POST" && path == "/train-interest") {
      TrainSummary s = train_interest();
      return json_response(200, {{"users", s.users},
                                 {"examples", s.examples},
                                 {"mean_loss", s.mean_loss},
                                 {"labels", s.labels}});
    }
    if (method == "POST" && path == "/cloud/match") {
      if (!local_) return error_response(404, "no_index", "no local index");
      auto terms = match_request_from_json(body);
      if (terms.empty()) throw ValidationError("match needs at least one term");
      return ApiResponse{200, match_set_to_json(local_->match(terms)),
                         "application/json"};
    }
    return error_response(404, "not_found",
                          std::string(method) + " " + std::string(path) + " is not an endpoint");
  } catch (const ApiError& e) {
    return error_response(e.status(), e.code(), e.what());
  } catch (const ValidationError& e) {
    return error_response(400, "invalid_request", e.what());
  } catch (const ParseError& e) {
    return error_response(400, "malformed_request", e.what());
  } catch (const TrainingError& e) {
    return error_response(409, "training_failed", e.what());
  } catch (const ResourceError& e) {
    return error_response(503, "resource_unavailable", e.what());
  } catch (const std::exception& e) {
    log_error(std::string("request failed: ") + e.what());
    return error_response(500, "internal", e.what());
  }
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  explicit Impl(EdgeService& s) : service(s) {}
  EdgeService& service;
  httplib::Server server;
};

HttpServer::HttpServer(EdgeService& service)
    : impl_(std::make_unique<Impl>(service)) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r = impl_->service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  if (const auto& ui = service.config().ui_dir) {
    if (!impl_->server.set_mount_point("/ui", ui->string())) {
      log_warning("ui directory not found: " + ui->string());
    }
  }
  impl_->server.Get(".*", route);
  impl_->server.Post(".*", route);
}

HttpServer::~HttpServer() = default;

bool HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    return port_ > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace edgesearch
