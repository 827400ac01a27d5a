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

#ifndef EDGESEARCH_HISTORY_H_
#define EDGESEARCH_HISTORY_H_

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "edgesearch/interest.h"

namespace edgesearch {

std::string click_record_to_json(const ClickRecord& record);
ClickRecord click_record_from_json(std::string_view line);

// Append-only click log, one JSON line per session, one file per user.
class HistoryStore {
 public:
  explicit HistoryStore(std::filesystem::path dir);

  // User ids are 1-64 characters of [A-Za-z0-9_.-].
  static bool valid_user(std::string_view user);

  void append(std::string_view user, const ClickRecord& record);
  // A torn final line (crash mid-append) is skipped with a warning.
  std::vector<ClickRecord> records(std::string_view user) const;
  InterestHistory replay(std::string_view user, std::size_t capacity) const;
  std::vector<std::string> users() const;

 private:
  std::filesystem::path file_for(std::string_view user) const;

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

}  // namespace edgesearch

#endif  // EDGESEARCH_HISTORY_H_
