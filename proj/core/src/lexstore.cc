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

#include "edgesearch/lexstore.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "edgesearch/error.h"

namespace edgesearch {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// WordNet writes multi-word lemmas with underscores and may append an
// adjective marker such as "(a)" or "(ip)".
std::string normalize_lemma(std::string_view raw) {
  if (auto paren = raw.find('('); paren != std::string_view::npos &&
                                  raw.back() == ')') {
    raw = raw.substr(0, paren);
  }
  std::string out = lowercase(raw);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_license_line(std::string_view line) {
  return line.size() >= 2 && line[0] == ' ' && line[1] == ' ';
}

// Whitespace tokenizer over one line that remembers where it stopped, so
// the gloss (free text after '|') can be taken verbatim.
class FieldReader {
 public:
  FieldReader(std::string_view line, const std::string& source,
              std::size_t line_no)
      : line_(line), source_(source), line_no_(line_no) {}

  std::string_view next(const char* what) {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    if (pos_ >= line_.size()) fail(std::string("missing ") + what);
    std::size_t end = line_.find(' ', pos_);
    if (end == std::string_view::npos) end = line_.size();
    std::string_view field = line_.substr(pos_, end - pos_);
    pos_ = end;
    return field;
  }

  template <typename T>
  T number(const char* what, int base = 10) {
    std::string_view f = next(what);
    T value{};
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value, base);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      fail(std::string("bad ") + what + " '" + std::string(f) + "'");
    }
    return value;
  }

  std::string_view rest() {
    std::string_view r = line_.substr(std::min(pos_, line_.size()));
    while (!r.empty() && r.front() == ' ') r.remove_prefix(1);
    while (!r.empty() && (r.back() == ' ' || r.back() == '\r')) r.remove_suffix(1);
    return r;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source_, line_no_, msg);
  }

 private:
  std::string_view line_;
  std::size_t pos_ = 0;
  const std::string& source_;
  std::size_t line_no_;
};

template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line(text.data() + start, end - start);
    fn(line, start, line_no);
    start = end + 1;
  }
}

}  // namespace

std::string_view pos_file_suffix(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::kNoun: return "noun";
    case PartOfSpeech::kVerb: return "verb";
    case PartOfSpeech::kAdjective: return "adj";
    case PartOfSpeech::kAdverb: return "adv";
  }
  return "noun";
}

char pos_code(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::kNoun: return 'n';
    case PartOfSpeech::kVerb: return 'v';
    case PartOfSpeech::kAdjective: return 'a';
    case PartOfSpeech::kAdverb: return 'r';
  }
  return 'n';
}

std::optional<PartOfSpeech> pos_from_code(char code) {
  switch (code) {
    case 'n': return PartOfSpeech::kNoun;
    case 'v': return PartOfSpeech::kVerb;
    case 'a':
    case 's': return PartOfSpeech::kAdjective;
    case 'r': return PartOfSpeech::kAdverb;
    default: return std::nullopt;
  }
}

std::string SynsetId::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%08u", pos_code(pos), offset);
  return buf;
}

std::string_view Synset::definition() const {
  std::string_view g = gloss;
  std::size_t cut = g.find("; \"");
  if (!g.empty() && g.front() == '"') cut = 0;
  if (cut != std::string_view::npos) g = g.substr(0, cut);
  while (!g.empty() && (g.back() == ' ' || g.back() == ';')) g.remove_suffix(1);
  return g;
}

LexicalDatabase LexicalDatabase::load(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ResourceError("lexical database directory not found: " +
                        dir.string());
  }

  LexicalDatabase db;
  bool any = false;
  for (PartOfSpeech pos : kAllPartsOfSpeech) {
    const auto suffix = std::string(pos_file_suffix(pos));
    const auto index_path = dir / ("index." + suffix);
    const auto data_path = dir / ("data." + suffix);
    const bool has_index = std::filesystem::exists(index_path);
    const bool has_data = std::filesystem::exists(data_path);
    if (!has_index && !has_data) continue;
    if (!has_index || !has_data) {
      throw ResourceError("incomplete WordNet pair for '" + suffix + "' in " +
                          dir.string());
    }
    any = true;

    const std::string data_source = data_path.string();
    const std::string data = read_file(data_path);
    for_each_line(data, [&](std::string_view line, std::size_t offset,
                            std::size_t line_no) {
      if (line.empty() || is_license_line(line)) return;
      FieldReader r(line, data_source, line_no);
      const auto declared = r.number<std::uint32_t>("synset offset");
      if (declared != offset) {
        r.fail("synset offset " + std::to_string(declared) +
               " does not match byte position " + std::to_string(offset));
      }
      r.next("lexicographer file number");
      std::string_view ss_type = r.next("synset type");
      auto ss_pos = ss_type.size() == 1 ? pos_from_code(ss_type[0])
                                        : std::nullopt;
      if (!ss_pos || *ss_pos != pos) {
        r.fail("synset type '" + std::string(ss_type) + "' in data." + suffix);
      }

      Synset s;
      s.id = SynsetId{pos, declared};
      const auto words = r.number<unsigned>("word count", 16);
      if (words == 0) r.fail("synset without lemmas");
      for (unsigned i = 0; i < words; ++i) {
        std::string lemma = normalize_lemma(r.next("word"));
        r.next("lex id");
        if (std::find(s.lemmas.begin(), s.lemmas.end(), lemma) ==
            s.lemmas.end()) {
          s.lemmas.push_back(std::move(lemma));
        }
      }
      const auto pointers = r.number<unsigned>("pointer count");
      for (unsigned i = 0; i < pointers; ++i) {
        std::string_view symbol = r.next("pointer symbol");
        const auto target = r.number<std::uint32_t>("pointer offset");
        std::string_view target_pos = r.next("pointer pos");
        r.next("pointer source/target");
        auto tpos = target_pos.size() == 1 ? pos_from_code(target_pos[0])
                                           : std::nullopt;
        if (!tpos) r.fail("bad pointer pos '" + std::string(target_pos) + "'");
        if (symbol == "@") {
          s.hypernyms.push_back(SynsetId{*tpos, target});
        } else if (symbol == "@i") {
          s.instance_hypernyms.push_back(SynsetId{*tpos, target});
        }
      }
      if (pos == PartOfSpeech::kVerb) {
        std::string_view next = r.next("frame count or '|'");
        if (next != "|") {
          unsigned frames = 0;
          auto [p, e] = std::from_chars(next.data(), next.data() + next.size(),
                                        frames);
          if (e != std::errc() || p != next.data() + next.size()) {
            r.fail("bad frame count '" + std::string(next) + "'");
          }
          for (unsigned i = 0; i < frames * 3; ++i) r.next("frame");
          if (r.next("'|'") != "|") r.fail("expected '|' before gloss");
        }
      } else if (r.next("'|'") != "|") {
        r.fail("expected '|' before gloss");
      }
      s.gloss = std::string(r.rest());
      if (s.gloss.empty()) r.fail("empty gloss");
      db.synsets_.emplace(s.id, std::move(s));
    });

    const std::string index_source = index_path.string();
    const std::string index = read_file(index_path);
    for_each_line(index, [&](std::string_view line, std::size_t,
                             std::size_t line_no) {
      if (line.empty() || is_license_line(line)) return;
      FieldReader r(line, index_source, line_no);
      std::string lemma = normalize_lemma(r.next("lemma"));
      std::string_view p = r.next("pos");
      auto lpos = p.size() == 1 ? pos_from_code(p[0]) : std::nullopt;
      if (!lpos || *lpos != pos) r.fail("pos '" + std::string(p) + "'");
      const auto synset_cnt = r.number<unsigned>("synset count");
      const auto p_cnt = r.number<unsigned>("pointer count");
      for (unsigned i = 0; i < p_cnt; ++i) r.next("pointer symbol");
      r.number<unsigned>("sense count");
      r.number<unsigned>("tagged sense count");
      std::vector<SynsetId> senses;
      senses.reserve(synset_cnt);
      for (unsigned i = 0; i < synset_cnt; ++i) {
        SynsetId id{pos, r.number<std::uint32_t>("synset offset")};
        auto it = db.synsets_.find(id);
        if (it == db.synsets_.end()) {
          r.fail("offset " + std::to_string(id.offset) +
                 " not present in data." + suffix);
        }
        const auto& lemmas = it->second.lemmas;
        if (std::find(lemmas.begin(), lemmas.end(), lemma) == lemmas.end()) {
          r.fail("synset " + id.str() + " does not list lemma '" + lemma + "'");
        }
        senses.push_back(id);
      }
      db.lemma_index_[{std::move(lemma), pos}] = std::move(senses);
    });
  }
  if (!any) {
    throw ResourceError("no WordNet index/data files in " + dir.string());
  }

  for (const auto& [id, s] : db.synsets_) {
    for (const auto* rel : {&s.hypernyms, &s.instance_hypernyms}) {
      for (const SynsetId& target : *rel) {
        if (!db.synsets_.count(target)) {
          throw ParseError("synset " + id.str() + " points to unknown " +
                           target.str());
        }
      }
    }
  }
  return db;
}

const Synset* LexicalDatabase::find(const SynsetId& id) const {
  auto it = synsets_.find(id);
  return it == synsets_.end() ? nullptr : &it->second;
}

std::span<const SynsetId> LexicalDatabase::senses(std::string_view lemma,
                                                  PartOfSpeech pos) const {
  auto it = lemma_index_.find(LemmaKey{std::string(lemma), pos});
  if (it == lemma_index_.end()) return {};
  return it->second;
}

std::vector<const Synset*> LexicalDatabase::synsets(std::string_view lemma,
                                                    PartOfSpeech pos) const {
  std::vector<const Synset*> out;
  for (const SynsetId& id : senses(lemma, pos)) out.push_back(find(id));
  return out;
}

bool LexicalDatabase::has_lemma(std::string_view lemma,
                                PartOfSpeech pos) const {
  return !senses(lemma, pos).empty();
}

std::optional<std::string> LexicalDatabase::resolve(std::string_view word,
                                                    PartOfSpeech pos) const {
  std::string w = lowercase(word);
  if (has_lemma(w, pos)) return w;
  auto ends_with = [&](std::string_view suffix) {
    return w.size() > suffix.size() + 1 &&
           std::string_view(w).substr(w.size() - suffix.size()) == suffix;
  };
  if (ends_with("es")) {
    std::string stem = w.substr(0, w.size() - 2);
    if (has_lemma(stem, pos)) return stem;
  }
  if (ends_with("s")) {
    std::string stem = w.substr(0, w.size() - 1);
    if (has_lemma(stem, pos)) return stem;
  }
  return std::nullopt;
}

std::string LexicalDatabase::base_form(std::string_view word) const {
  for (PartOfSpeech pos : kAllPartsOfSpeech) {
    if (auto r = resolve(word, pos)) return *r;
  }
  return lowercase(word);
}

std::vector<std::pair<std::string, PartOfSpeech>> LexicalDatabase::lemma_keys()
    const {
  std::vector<std::pair<std::string, PartOfSpeech>> keys;
  keys.reserve(lemma_index_.size());
  for (const auto& [key, _] : lemma_index_) keys.push_back(key);
  return keys;
}

std::set<std::string> synonyms(const LexicalDatabase& db,
                               std::string_view lemma, PartOfSpeech pos) {
  std::set<std::string> out;
  auto resolved = db.resolve(lemma, pos);
  if (!resolved) return out;
  for (const Synset* s : db.synsets(*resolved, pos)) {
    out.insert(s->lemmas.begin(), s->lemmas.end());
  }
  out.erase(*resolved);
  out.erase(lowercase(lemma));
  return out;
}

bool is_name_entity(const LexicalDatabase& db, std::string_view span,
                    bool mid_query) {
  if (span.empty() || !std::isupper(static_cast<unsigned char>(span.front()))) {
    return false;
  }
  // "J.K. Rowling" is stored by WordNet as "j. k. rowling".
  std::vector<std::string> forms{lowercase(span)};
  {
    std::string spaced;
    for (std::size_t i = 0; i < forms[0].size(); ++i) {
      spaced += forms[0][i];
      if (forms[0][i] == '.' && i + 1 < forms[0].size() &&
          forms[0][i + 1] != ' ') {
        spaced += ' ';
      }
    }
    if (spaced != forms[0]) forms.push_back(std::move(spaced));
  }

  bool common = false;
  for (const std::string& form : forms) {
    auto nouns = db.synsets(form, PartOfSpeech::kNoun);
    if (!nouns.empty() && !nouns.front()->instance_hypernyms.empty() &&
        nouns.front()->hypernyms.empty()) {
      return true;
    }
    for (PartOfSpeech pos : kAllPartsOfSpeech) {
      auto resolved = db.resolve(form, pos);
      if (!resolved) continue;
      for (const Synset* s : db.synsets(*resolved, pos)) {
        if (!(pos == PartOfSpeech::kNoun && s->hypernyms.empty() &&
              !s->instance_hypernyms.empty())) {
          common = true;
        }
      }
    }
  }
  return mid_query && !common;
}

}  // namespace edgesearch
