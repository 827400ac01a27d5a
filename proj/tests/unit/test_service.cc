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

#include <thread>

#include "doctest.h"
#include "edgesearch/error.h"
#include "edgesearch/history.h"
#include "edgesearch/service.h"
#include "json.hpp"
#include "support.h"

using namespace edgesearch;
using namespace edgesearch::testing;
using nlohmann::json;

namespace {

AppConfig fixture_config(const TempDir& data, IndexMode mode = IndexMode::kPlain) {
  AppConfig c = AppConfig::load(fixture_dir() / "edgesearch.json");
  c.data_dir = data.path();
  c.mode = mode;
  return c;
}

json body_of(const ApiResponse& r) { return json::parse(r.body); }

json without_timings(json j) {
  j.erase("timings");
  return j;
}

// Records every request that crosses the edge/cloud boundary.
class RecordingCloud : public CloudBackend {
 public:
  explicit RecordingCloud(std::shared_ptr<const InvertedIndex> index) : inner_(index) {}
  IndexMode mode() const override { return inner_.mode(); }
  MatchSet match(std::span<const SearchToken> terms) override {
    wire += match_request_to_json(terms);
    return inner_.match(terms);
  }
  std::optional<DocumentRecord> fetch(std::string_view doc_id) override {
    wire += std::string(doc_id) + "\n";
    return inner_.fetch(doc_id);
  }
  std::string wire;

 private:
  LocalCloud inner_;
};

}  // namespace

TEST_CASE("search endpoint happy path and trace") {
  QuietLog quiet;
  TempDir data;
  EdgeService svc(fixture_config(data));
  auto r = svc.handle("POST", "/search", R"({"user_id":"u1","query":"cloud computing"})");
  REQUIRE(r.status == 200);
  const auto j = body_of(r);
  CHECK(j["results"].size() <= 10);
  CHECK(j["results"].size() > 0);
  CHECK(j["trace"].contains("context"));
  CHECK(j["trace"].contains("mu"));
  CHECK(j["results"][0].contains("snippet"));
  CHECK(j["query_id"] == EdgeService::query_id("u1", "cloud computing"));
  CHECK(j["theta"]["theta"] == "technology");

  r = svc.handle("GET", "/healthz", "");
  CHECK(r.status == 200);
  CHECK(body_of(r)["documents"] == 20);
}

TEST_CASE("request errors are structured") {
  QuietLog quiet;
  TempDir data;
  EdgeService svc(fixture_config(data));
  auto r = svc.handle("POST", "/search", R"({"user_id":"u1","query":"  "})");
  CHECK(r.status == 400);
  CHECK(body_of(r)["error"]["code"] == "invalid_request");
  r = svc.handle("POST", "/search", "{nope");
  CHECK(r.status == 400);
  CHECK(body_of(r)["error"]["code"] == "malformed_request");
  r = svc.handle("POST", "/search", R"({"user_id":"u1"})");
  CHECK(r.status == 400);
  r = svc.handle("POST", "/search", R"({"user_id":"../etc","query":"x"})");
  CHECK(r.status == 400);
  r = svc.handle("POST", "/search", R"({"user_id":"u","query":"x","variant":"odd"})");
  CHECK(r.status == 400);
  r = svc.handle("GET", "/nowhere", "");
  CHECK(r.status == 404);
  CHECK(body_of(r)["error"]["code"] == "not_found");
  r = svc.handle("GET", "/doc/missing", "");
  CHECK(r.status == 404);
  r = svc.handle("POST", "/train-interest", "");
  CHECK(r.status == 409);
  r = svc.handle("POST", "/feedback", R"({"user_id":"u1","clicked":[]})");
  CHECK(r.status == 400);
}

TEST_CASE("feedback moves the interest to the clicked topic") {
  QuietLog quiet;
  TempDir data;
  EdgeService svc(fixture_config(data));
  CHECK(svc.topic_of("d17") == "sport");
  CHECK(svc.topic_of("d18") == "sport");
  auto r = svc.handle("POST", "/search", R"({"user_id":"fan","query":"football league"})");
  REQUIRE(r.status == 200);
  const std::string qid = body_of(r)["query_id"];
  r = svc.handle("POST", "/feedback",
                 json{{"user_id", "fan"}, {"query_id", qid}, {"clicked", {"d17", "d18"}},
                      {"dwell", {12.5, 40}}}
                     .dump());
  REQUIRE(r.status == 200);
  CHECK(body_of(r)["recorded"]["topic"] == "sport");
  CHECK(body_of(r)["recorded"]["query"] == "football league");
  r = svc.handle("GET", "/interest/fan", "");
  REQUIRE(r.status == 200);
  CHECK(body_of(r)["theta"] == "sport");
  CHECK(body_of(r)["source"] == "MAJORITY_FALLBACK");
  // Another user is unaffected.
  CHECK(body_of(svc.handle("GET", "/interest/other", ""))["source"] == "CONFIGURED");
}

TEST_CASE("training the interest model from histories") {
  QuietLog quiet;
  TempDir data;
  auto cfg = fixture_config(data);
  cfg.rnn_epochs = 50;
  EdgeService svc(cfg);
  for (const char* doc : {"d17", "d11", "d17", "d11", "d17"}) {
    svc.feedback("u", "", "q", {doc}, {});
  }
  auto r = svc.handle("POST", "/train-interest", "");
  REQUIRE(r.status == 200);
  CHECK(body_of(r)["examples"] == 4);
  CHECK(std::filesystem::exists(cfg.model_path()));
  const auto p = svc.interest("u");
  REQUIRE(p);
  CHECK(p->source == InterestSource::kRnn);
  // A fresh process picks up the saved model.
  EdgeService again(cfg);
  CHECK(again.interest("u")->theta == p->theta);
}

TEST_CASE("identical searches give identical bodies") {
  QuietLog quiet;
  TempDir data;
  EdgeService svc(fixture_config(data));
  const std::string req = R"({"user_id":"u1","query":"river bank"})";
  const auto a = body_of(svc.handle("POST", "/search", req));
  const auto b = body_of(svc.handle("POST", "/search", req));
  CHECK(without_timings(a) == without_timings(b));
}

TEST_CASE("history replay reconstructs the interest history") {
  TempDir dir;
  HistoryStore store(dir.path());
  std::vector<std::string> topics;
  Gen g(5);
  for (int i = 0; i < 30; ++i) {
    ClickRecord r;
    r.query = "q" + std::to_string(i);
    r.clicked_doc_ids = {"d1"};
    r.dwell_seconds = {double(i)};
    r.topic = g.pick(std::vector<std::string>{"sport", "business", "weather"});
    topics.push_back(r.topic);
    store.append("user.1", r);
  }
  InterestHistory live(20);
  for (const auto& t : topics) live.push(t);
  CHECK(store.replay("user.1", 20).sequence() == live.sequence());
  CHECK(store.users() == std::vector<std::string>{"user.1"});
  const auto back = store.records("user.1");
  REQUIRE(back.size() == 30);
  CHECK(back[7].dwell_seconds == std::vector<double>{7});

  // A torn final line is skipped.
  {
    QuietLog quiet;
    std::ofstream out(dir / "user.1.jsonl", std::ios::app);
    out << "{\"query\":\"half";
  }
  {
    QuietLog quiet;
    CHECK(store.records("user.1").size() == 30);
  }
  CHECK_FALSE(HistoryStore::valid_user(""));
  CHECK_FALSE(HistoryStore::valid_user("a/b"));
  CHECK(HistoryStore::valid_user("A-z_0.9"));
}

TEST_CASE("no plaintext crosses the cloud boundary in encrypted mode") {
  QuietLog quiet;
  TempDir data;
  const auto cfg = fixture_config(data, IndexMode::kEncrypted);
  const auto key = *cfg.secret_key();
  auto index = std::make_shared<const InvertedIndex>(
      ingest(fixture_dir() / "corpus", IndexMode::kEncrypted, &key));
  auto cloud = std::make_unique<RecordingCloud>(index);
  RecordingCloud* spy = cloud.get();
  EdgeService svc(cfg, std::move(cloud));
  for (const char* q : {"river bank", "cloud computing", "football league"}) {
    for (const char* v : {"saed", "pass-through"}) {
      const auto r = svc.handle(
          "POST", "/search", json{{"user_id", "u"}, {"query", q}, {"variant", v}}.dump());
      REQUIRE(r.status == 200);
      // The football glosses name nothing in the fixture corpus.
      if (std::string(v) == "saed" && std::string(q) != "football league") {
        CHECK_FALSE(body_of(r)["results"].empty());
      }
      for (const auto& row : body_of(r)["results"]) CHECK_FALSE(row.contains("snippet"));
    }
  }
  REQUIRE_FALSE(spy->wire.empty());
  for (const char* word : {"river", "bank", "cloud", "computing", "football", "league",
                           "water", "stream", "server", "remote"}) {
    CHECK_MESSAGE(spy->wire.find(word) == std::string::npos, word);
  }
  // Bodies are opened at the edge on request.
  const auto doc = body_of(svc.handle("GET", "/doc/d01", ""));
  CHECK(doc["title"] == "Walking trails along the riverside");
}

TEST_CASE("the index snapshot is rebuilt when the mode changes") {
  QuietLog quiet;
  TempDir data;
  { EdgeService plain(fixture_config(data)); }
  EdgeService enc(fixture_config(data, IndexMode::kEncrypted));
  REQUIRE(enc.local_cloud());
  CHECK(enc.local_cloud()->mode() == IndexMode::kEncrypted);
  CHECK(InvertedIndex::load(fixture_config(data).index_path()).mode() ==
        IndexMode::kEncrypted);
}

TEST_CASE("a remote cloud over HTTP answers like the local one") {
  QuietLog quiet;
  TempDir cloud_data, edge_data;
  EdgeService cloud_side(fixture_config(cloud_data));
  HttpServer server(cloud_side);
  REQUIRE(server.bind("127.0.0.1", 0));
  std::thread loop([&] { server.listen(); });

  auto cfg = fixture_config(edge_data);
  cfg.cloud_url = "http://127.0.0.1:" + std::to_string(server.port());
  EdgeService edge(cfg);
  CHECK(edge.local_cloud() == nullptr);
  const std::string req = R"({"user_id":"u1","query":"cloud computing"})";
  const auto remote = body_of(edge.handle("POST", "/search", req));
  const auto local = body_of(cloud_side.handle("POST", "/search", req));
  CHECK(remote["results"] == local["results"]);
  CHECK(body_of(edge.handle("GET", "/doc/d06", ""))["doc_id"] == "d06");
  CHECK(edge.handle("GET", "/doc/nope", "").status == 404);

  server.stop();
  loop.join();
}

TEST_CASE("configuration") {
  TempDir dir;
  write_text(dir / "c.json", R"({"wordnet":"wn","mode":"encrypted","port":9})");
  CHECK_THROWS_AS(AppConfig::load(dir / "c.json").validate(), ConfigError);
  auto c = AppConfig::load(dir / "c.json");
  CHECK(c.wordnet_dir == dir / "wn");
  c.apply_environment([](const char* name) -> const char* {
    if (std::string_view(name) == "EDGESEARCH_KEY") return "00000000000000000000000000000000"
                                                          "00000000000000000000000000000000";
    return nullptr;
  });
  CHECK_NOTHROW(c.validate());
  c.key_hex = "xyz";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(AppConfig::load(dir / "absent.json"), ConfigError);
}
