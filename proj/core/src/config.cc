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

#include "edgesearch/config.h"

#include <fstream>
#include <sstream>

#include "edgesearch/error.h"
#include "json.hpp"

namespace edgesearch {
namespace {

using json = nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::size_t positive(const json& j, const char* name, std::size_t fallback) {
  if (!j.contains(name)) return fallback;
  const json& v = j.at(name);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ConfigError(std::string("'") + name + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

AppConfig AppConfig::from_text(std::string_view text,
                               const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  AppConfig c;
  try {
    auto path_of = [&](const char* name) -> std::optional<std::filesystem::path> {
      if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
      return resolve(base_dir, j.at(name).get<std::string>());
    };
    if (auto p = path_of("wordnet")) c.wordnet_dir = *p;
    if (auto p = path_of("embeddings")) c.embeddings = *p;
    if (auto p = path_of("corpus")) c.corpus_dir = *p;
    if (auto p = path_of("data_dir")) c.data_dir = *p;
    else c.data_dir = resolve(base_dir, "var");
    c.topics_dir = path_of("topics");
    if (auto p = path_of("suites")) c.suites_dir = *p;
    else c.suites_dir = resolve(base_dir, "suites");
    c.ui_dir = path_of("ui_dir");
    if (j.contains("cloud_url")) c.cloud_url = j.at("cloud_url").get<std::string>();

    if (j.contains("mode")) {
      auto m = parse_mode(j.at("mode").get<std::string>());
      if (!m) throw ConfigError("'mode' must be \"plain\" or \"encrypted\"");
      c.mode = *m;
    }
    if (j.contains("key") && !j.at("key").is_null()) {
      c.key_hex = j.at("key").get<std::string>();
    }
    c.cutoff = positive(j, "cutoff", c.cutoff);
    c.knn = positive(j, "knn", c.knn);
    c.history = positive(j, "history", c.history);
    c.rnn_hidden = positive(j, "rnn_hidden", c.rnn_hidden);
    c.rnn_epochs = positive(j, "rnn_epochs", c.rnn_epochs);
    if (j.contains("eta_max")) c.eta_max = j.at("eta_max").get<double>();
    if (j.contains("default_interest") && !j.at("default_interest").is_null()) {
      c.default_interest = j.at("default_interest").get<std::string>();
    }
    if (j.contains("listen")) {
      const json& l = j.at("listen");
      c.host = l.value("host", c.host);
      c.port = l.value("port", c.port);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto base = std::filesystem::absolute(path).parent_path();
  return from_text(buf.str(), base);
}

void AppConfig::apply_environment(
    const std::function<const char*(const char*)>& getenv_fn) {
  if (const char* key = getenv_fn("EDGESEARCH_KEY"); key && *key) key_hex = key;
  if (const char* dir = getenv_fn("EDGESEARCH_DATA_DIR"); dir && *dir) {
    data_dir = dir;
  }
}

void AppConfig::validate() const {
  if (mode == IndexMode::kEncrypted && !key_hex) {
    throw ConfigError("encrypted mode requires a key (config \"key\" or EDGESEARCH_KEY)");
  }
  if (key_hex) {
    try {
      SecretKey::from_hex(*key_hex);
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }
  if (!(eta_max > 0)) throw ConfigError("'eta_max' must be positive");
  if (port <= 0 || port > 65535) throw ConfigError("'listen.port' is out of range");
}

std::optional<SecretKey> AppConfig::secret_key() const {
  if (!key_hex) return std::nullopt;
  return SecretKey::from_hex(*key_hex);
}

}  // namespace edgesearch
