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

#include <cstdlib>
#include <set>

#include "doctest.h"
#include "edgesearch/error.h"
#include "edgesearch/lexstore.h"
#include "support.h"

using namespace edgesearch;
using edgesearch::testing::fixture_db;
using edgesearch::testing::fixture_dir;
using edgesearch::testing::read_text;
using edgesearch::testing::TempDir;
using edgesearch::testing::write_text;

namespace {

std::set<std::string> as_set(const std::set<std::string>& s) { return s; }

void write_minimal(const TempDir& dir) {
  const std::string data = "00000000 03 n 01 entity 0 000 | that which exists  \n";
  write_text(dir / "data.noun", data);
  write_text(dir / "index.noun", "entity n 1 0 1 0 00000000  \n");
}

}  // namespace

TEST_CASE("a one-synset directory loads one synset and one lemma") {
  TempDir dir;
  write_minimal(dir);
  const auto db = LexicalDatabase::load(dir.path());
  CHECK(db.synset_count() == 1);
  CHECK(db.lemma_count() == 1);
  const auto s = db.synsets("entity", PartOfSpeech::kNoun);
  REQUIRE(s.size() == 1);
  CHECK(s[0]->definition() == "that which exists");
}

TEST_CASE("missing or empty directories are resource errors") {
  TempDir dir;
  CHECK_THROWS_AS(LexicalDatabase::load(dir.path()), ResourceError);
  CHECK_THROWS_AS(LexicalDatabase::load(dir / "nope"), ResourceError);
  write_text(dir / "data.noun", "");
  CHECK_THROWS_AS(LexicalDatabase::load(dir.path()), ResourceError);
}

TEST_CASE("a wrong synset offset is reported with its line") {
  TempDir dir;
  write_text(dir / "data.noun",
             "  1 license\n00000000 03 n 01 entity 0 000 | that which exists  \n");
  write_text(dir / "index.noun", "entity n 1 0 1 0 00000000  \n");
  try {
    LexicalDatabase::load(dir.path());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("byte position 12") != std::string::npos);
  }
}

TEST_CASE("index entries must point at synsets that list the lemma") {
  TempDir dir;
  write_text(dir / "data.noun", "00000000 03 n 01 entity 0 000 | that which exists  \n");
  write_text(dir / "index.noun", "thing n 1 0 1 0 00000000  \n");
  CHECK_THROWS_AS(LexicalDatabase::load(dir.path()), ParseError);
}

TEST_CASE("fixture offsets equal the byte position of each line") {
  const std::string data = read_text(fixture_dir() / "wordnet" / "data.noun");
  std::size_t checked = 0;
  for (const auto& [id, synset] : fixture_db().all_synsets()) {
    if (id.pos != PartOfSpeech::kNoun) continue;
    char expect[16];
    std::snprintf(expect, sizeof expect, "%08u ", id.offset);
    REQUIRE(id.offset < data.size());
    CHECK(data.compare(id.offset, 9, expect) == 0);
    CHECK((id.offset == 0 || data[id.offset - 1] == '\n'));
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("synonyms") {
  const auto& db = fixture_db();
  CHECK(as_set(synonyms(db, "car", PartOfSpeech::kNoun)) ==
        std::set<std::string>{"auto", "automobile"});
  CHECK(synonyms(db, "zzqx", PartOfSpeech::kNoun).empty());
  // Both senses of the fixture's "bank", enumerated from data.noun.
  CHECK(synonyms(db, "bank", PartOfSpeech::kNoun) ==
        std::set<std::string>{"riverbank", "riverside",
                              "depository financial institution",
                              "banking company"});
}

TEST_CASE("senses keep their file order and definitions drop usage examples") {
  const auto senses = fixture_db().synsets("bank", PartOfSpeech::kNoun);
  REQUIRE(senses.size() == 2);
  CHECK(senses[0]->definition() == "sloping land beside a river");
  CHECK(senses[1]->definition().starts_with("a financial institution"));
}

TEST_CASE("resolve strips plural endings only") {
  const auto& db = fixture_db();
  CHECK(db.resolve("Books", PartOfSpeech::kNoun) == "book");
  CHECK(db.resolve("deposits", PartOfSpeech::kNoun) == "deposit");
  CHECK(db.resolve("servers", PartOfSpeech::kNoun) == "server");
  CHECK(db.resolve("sells", PartOfSpeech::kVerb) == "sell");
  CHECK_FALSE(db.resolve("sold", PartOfSpeech::kVerb).has_value());
  CHECK(db.base_form("Flowing") == "flowing");
  CHECK(db.base_form("quartz") == "quartz");
}

TEST_CASE("name entities") {
  const auto& db = fixture_db();
  CHECK(is_name_entity(db, "London", false));
  CHECK(is_name_entity(db, "London", true));
  CHECK(is_name_entity(db, "J.K. Rowling", true));
  CHECK(is_name_entity(db, "European Commission", false));
  CHECK_FALSE(is_name_entity(db, "computing", true));
  CHECK_FALSE(is_name_entity(db, "Computing", true));
  // Unknown capitalized words count only after the first query token.
  CHECK(is_name_entity(db, "Kendra", true));
  CHECK_FALSE(is_name_entity(db, "Kendra", false));
}

TEST_CASE("property: lowercase spans are never entities") {
  const auto& db = fixture_db();
  for (const auto& [lemma, pos] : db.lemma_keys()) {
    CHECK_FALSE(is_name_entity(db, lemma, true));
  }
}

TEST_CASE("full WordNet (set EDGESEARCH_WORDNET_DIR to run)") {
  const char* dir = std::getenv("EDGESEARCH_WORDNET_DIR");
  if (dir == nullptr || *dir == '\0') {
    MESSAGE("EDGESEARCH_WORDNET_DIR not set; skipped");
    return;
  }
  const auto db = LexicalDatabase::load(dir);
  CHECK(!db.synsets("dog", PartOfSpeech::kNoun).empty());
  CHECK(is_name_entity(db, "J.K. Rowling", true));
  CHECK_FALSE(is_name_entity(db, "computing", true));
}
