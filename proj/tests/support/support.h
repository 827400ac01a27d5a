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

// Shared helpers for the test binaries: fixture paths, scratch directories
// and small value generators.

#ifndef EDGESEARCH_TESTS_SUPPORT_H_
#define EDGESEARCH_TESTS_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "edgesearch/embeddings.h"
#include "edgesearch/lexstore.h"
#include "edgesearch/log.h"

namespace edgesearch::testing {

inline std::filesystem::path fixture_dir() { return EDGESEARCH_FIXTURE_DIR; }

inline const LexicalDatabase& fixture_db() {
  static const LexicalDatabase db = LexicalDatabase::load(fixture_dir() / "wordnet");
  return db;
}

inline const EmbeddingTable& fixture_embeddings() {
  static const EmbeddingTable emb =
      EmbeddingTable::load(fixture_dir() / "embeddings.txt");
  return emb;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text(const std::filesystem::path& p, std::string_view text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("edgesearch-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Silences the library log for the lifetime of the guard.
class QuietLog {
 public:
  QuietLog() : old_(set_log_sink([](LogLevel, std::string_view) {})) {}
  ~QuietLog() { set_log_sink(old_); }

 private:
  LogSink old_;
};

// Generators for property tests. Everything is driven by an explicit seed so
// a failing case can be replayed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return uniform(0, 1) < p; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  std::string word(std::size_t min_len = 2, std::size_t max_len = 8) {
    static constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";
    std::string w;
    const std::size_t n = between(min_len, max_len);
    for (std::size_t i = 0; i < n; ++i) w.push_back(kLetters[below(kLetters.size())]);
    return w;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace edgesearch::testing

#endif  // EDGESEARCH_TESTS_SUPPORT_H_
