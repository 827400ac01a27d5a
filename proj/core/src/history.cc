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

#include "edgesearch/history.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "edgesearch/error.h"
#include "edgesearch/log.h"
#include "json.hpp"

namespace edgesearch {

using json = nlohmann::json;

std::string click_record_to_json(const ClickRecord& r) {
  return json{{"query", r.query},
              {"clicked", r.clicked_doc_ids},
              {"dwell", r.dwell_seconds},
              {"timestamp", r.timestamp},
              {"topic", r.topic}}
      .dump();
}

ClickRecord click_record_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    ClickRecord r;
    r.query = j.at("query").get<std::string>();
    r.clicked_doc_ids = j.at("clicked").get<std::vector<std::string>>();
    r.dwell_seconds = j.value("dwell", std::vector<double>{});
    r.timestamp = j.value("timestamp", std::int64_t{0});
    r.topic = j.at("topic").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("click record: ") + e.what());
  }
}

HistoryStore::HistoryStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

bool HistoryStore::valid_user(std::string_view user) {
  if (user.empty() || user.size() > 64 || user == "." || user == "..") return false;
  return std::all_of(user.begin(), user.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.';
  });
}

std::filesystem::path HistoryStore::file_for(std::string_view user) const {
  if (!valid_user(user)) throw ValidationError("invalid user id");
  return dir_ / (std::string(user) + ".jsonl");
}

void HistoryStore::append(std::string_view user, const ClickRecord& record) {
  const auto path = file_for(user);
  const std::string line = click_record_to_json(record) + "\n";
  std::lock_guard<std::mutex> lock(mu_);
  std::filesystem::create_directories(dir_);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw ResourceError("cannot append to " + path.string());
  out << line;
  out.flush();
  if (!out) throw ResourceError("write failed for " + path.string());
}

std::vector<ClickRecord> HistoryStore::records(std::string_view user) const {
  const auto path = file_for(user);
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<ClickRecord> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(click_record_from_json(line));
    } catch (const ParseError& e) {
      log_warning(path.string() + ":" + std::to_string(number) +
                  ": skipping unreadable record");
    }
  }
  return out;
}

InterestHistory HistoryStore::replay(std::string_view user,
                                     std::size_t capacity) const {
  InterestHistory h(capacity);
  for (ClickRecord& r : records(user)) {
    if (!r.topic.empty()) h.push(std::move(r.topic));
  }
  return h;
}

std::vector<std::string> HistoryStore::users() const {
  std::vector<std::string> out;
  std::error_code ec;
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    if (entry.path().extension() == ".jsonl") {
      out.push_back(entry.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace edgesearch
