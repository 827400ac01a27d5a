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

#ifndef EDGESEARCH_CONFIG_H_
#define EDGESEARCH_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "edgesearch/cloudsim.h"

namespace edgesearch {

// Service configuration. The file is a JSON object; relative paths are
// resolved against the directory holding the file.
//
//   {
//     "wordnet": "wordnet/", "embeddings": "vectors.txt",
//     "corpus": "corpus/", "data_dir": "var/", "topics": "topics/",
//     "mode": "plain", "key": "<64 hex>",
//     "cutoff": 10, "knn": 10, "history": 20,
//     "rnn_hidden": 16, "rnn_epochs": 200, "eta_max": 1.0,
//     "default_interest": "sport",
//     "listen": {"host": "127.0.0.1", "port": 8080},
//     "ui_dir": "ui/", "suites": "suites/", "cloud_url": "http://host:port"
//   }
struct AppConfig {
  std::filesystem::path wordnet_dir;
  std::filesystem::path embeddings;
  std::filesystem::path corpus_dir;
  std::filesystem::path data_dir = "var";
  std::optional<std::filesystem::path> topics_dir;  // <label>/<doc>.txt
  std::optional<std::filesystem::path> ui_dir;
  std::filesystem::path suites_dir;  // <name>.json and <name>.judgments.json
  std::optional<std::string> cloud_url;  // remote pattern-matching tier

  IndexMode mode = IndexMode::kPlain;
  std::optional<std::string> key_hex;

  std::size_t cutoff = 10;
  std::size_t knn = 10;
  std::size_t history = 20;
  std::size_t rnn_hidden = 16;
  std::size_t rnn_epochs = 200;
  double eta_max = 1.0;
  std::optional<std::string> default_interest;

  std::string host = "127.0.0.1";
  int port = 8080;

  static AppConfig from_text(std::string_view text,
                             const std::filesystem::path& base_dir);
  static AppConfig load(const std::filesystem::path& path);

  // EDGESEARCH_KEY and EDGESEARCH_DATA_DIR override the file.
  void apply_environment(
      const std::function<const char*(const char*)>& getenv_fn);

  // Throws ConfigError on a missing key in encrypted mode, a malformed key
  // or a non-positive numeric setting.
  void validate() const;

  std::optional<SecretKey> secret_key() const;
  std::filesystem::path index_path() const { return data_dir / "index.json"; }
  std::filesystem::path model_path() const { return data_dir / "models" / "rnn.json"; }
  std::filesystem::path history_dir() const { return data_dir / "history"; }
};

}  // namespace edgesearch

#endif  // EDGESEARCH_CONFIG_H_
