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

#include "edgesearch/cloudsim.h"

#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgesearch/error.h"
#include "edgesearch/keyext.h"
#include "edgesearch/log.h"
#include "json.hpp"

namespace edgesearch {
namespace {

using json = nlohmann::json;

constexpr int kIndexVersion = 1;
constexpr std::string_view kBodyKeyLabel = "edgesearch/body-key/v1";

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialisation failed");
}

std::array<unsigned char, crypto_auth_hmacsha256_BYTES> hmac(
    std::span<const unsigned char> key, std::string_view message) {
  ensure_sodium();
  std::array<unsigned char, crypto_auth_hmacsha256_BYTES> out{};
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, key.data(), key.size());
  crypto_auth_hmacsha256_update(
      &state, reinterpret_cast<const unsigned char*>(message.data()),
      message.size());
  crypto_auth_hmacsha256_final(&state, out.data());
  return out;
}

std::string to_hex(std::span<const unsigned char> bytes) {
  std::string out(bytes.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), bytes.data(), bytes.size());
  out.pop_back();
  return out;
}

std::string to_base64(std::span<const unsigned char> bytes) {
  const std::size_t len =
      sodium_base64_ENCODED_LEN(bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(len, '\0');
  sodium_bin2base64(out.data(), len, bytes.data(), bytes.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(len - 1);
  return out;
}

std::vector<unsigned char> from_base64(std::string_view text) {
  std::vector<unsigned char> out(text.size());
  std::size_t len = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(),
                        nullptr, &len, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0) {
    throw ParseError("invalid base64 ciphertext");
  }
  out.resize(len);
  return out;
}

// Authenticated encryption with a nonce derived from the context and the
// plaintext, so identical inputs seal identically while distinct documents
// never share a nonce.
std::string seal(const SecretKey& key, std::string_view context,
                 std::string_view plaintext) {
  ensure_sodium();
  const auto body_key = hmac(key.bytes(), kBodyKeyLabel);
  std::string nonce_input(context);
  nonce_input.push_back('\0');
  nonce_input.append(plaintext);
  const auto nonce_mac = hmac(body_key, nonce_input);

  std::vector<unsigned char> out(crypto_secretbox_NONCEBYTES +
                                 crypto_secretbox_MACBYTES + plaintext.size());
  std::copy_n(nonce_mac.begin(), crypto_secretbox_NONCEBYTES, out.begin());
  crypto_secretbox_easy(out.data() + crypto_secretbox_NONCEBYTES,
                        reinterpret_cast<const unsigned char*>(plaintext.data()),
                        plaintext.size(), out.data(), body_key.data());
  return to_base64(out);
}

std::string first_line(std::string_view text) {
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (!line.empty()) return std::string(line.substr(0, 120));
    start = end + 1;
  }
  return {};
}

bool contains_position(const std::vector<std::uint32_t>& positions,
                       std::uint32_t p) {
  return std::binary_search(positions.begin(), positions.end(), p);
}

json search_token_to_json(const SearchToken& t) {
  json parts = json::array();
  for (const auto& p : t.parts) {
    parts.push_back({{"value", p.value}, {"offset", p.offset}});
  }
  return {{"parts", parts}};
}

}  // namespace

std::string_view mode_name(IndexMode mode) {
  return mode == IndexMode::kPlain ? "plain" : "encrypted";
}

std::optional<IndexMode> parse_mode(std::string_view name) {
  const std::string lower = to_lower(name);
  if (lower == "plain") return IndexMode::kPlain;
  if (lower == "encrypted") return IndexMode::kEncrypted;
  return std::nullopt;
}

SecretKey SecretKey::from_hex(std::string_view hex) {
  if (hex.size() != kSize * 2) {
    throw ValidationError("key must be 64 hex characters, got " +
                          std::to_string(hex.size()));
  }
  ensure_sodium();
  SecretKey key;
  std::size_t len = 0;
  if (sodium_hex2bin(key.bytes_.data(), key.bytes_.size(), hex.data(),
                     hex.size(), nullptr, &len, nullptr) != 0 ||
      len != kSize) {
    throw ValidationError("key is not valid hex");
  }
  return key;
}

std::string normalize_token(std::string_view token) {
  auto is_word = [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80;
  };
  while (!token.empty() && !is_word(token.front())) token.remove_prefix(1);
  // Keep a trailing '.' of abbreviations such as "j.k.".
  while (!token.empty() && !is_word(token.back()) &&
         !(token.back() == '.' && token.find('.') != token.size() - 1)) {
    token.remove_suffix(1);
  }
  return to_lower(token);
}

bool is_indexable(std::string_view normalized) {
  return !normalized.empty() && !is_stopword(normalized);
}

std::string encrypt_token(const SecretKey& key, std::string_view token) {
  if (token.empty()) throw ValidationError("cannot encrypt an empty token");
  return to_hex(hmac(key.bytes(), token));
}

const std::vector<Posting>* InvertedIndex::postings(
    std::string_view index_token) const {
  auto it = postings_.find(index_token);
  return it == postings_.end() ? nullptr : &it->second;
}

const DocumentRecord* InvertedIndex::document(std::string_view doc_id) const {
  auto it = documents_.find(doc_id);
  return it == documents_.end() ? nullptr : &it->second;
}

InvertedIndex build_index(std::span<const CorpusDocument> docs, IndexMode mode,
                          const SecretKey* key) {
  if (mode == IndexMode::kEncrypted && key == nullptr) {
    throw ConfigError("encrypted index requires a key");
  }
  if (docs.empty()) throw ResourceError("corpus is empty");

  InvertedIndex idx;
  idx.mode_ = mode;
  for (const CorpusDocument& doc : docs) {
    if (idx.documents_.count(doc.doc_id)) {
      log_warning("duplicate doc_id '" + doc.doc_id + "' skipped");
      continue;
    }
    const auto tokens = tokenize_flat(doc.text);
    std::map<std::string, Posting> local;
    for (const Token& t : tokens) {
      std::string norm = normalize_token(t.text);
      if (!is_indexable(norm)) continue;
      std::string key_token =
          mode == IndexMode::kEncrypted ? encrypt_token(*key, norm) : std::move(norm);
      Posting& p = local[key_token];
      p.doc_id = doc.doc_id;
      ++p.frequency;
      p.positions.push_back(static_cast<std::uint32_t>(t.position));
    }
    for (auto& [token, posting] : local) {
      idx.postings_[token].push_back(std::move(posting));
    }

    DocumentRecord rec;
    rec.doc_id = doc.doc_id;
    rec.token_count = tokens.size();
    rec.title = first_line(doc.text);
    rec.stored_body = doc.text;
    if (mode == IndexMode::kEncrypted) {
      rec.title = seal(*key, "title:" + doc.doc_id, rec.title);
      rec.stored_body = seal(*key, "body:" + doc.doc_id, rec.stored_body);
    }
    idx.documents_.emplace(doc.doc_id, std::move(rec));
  }
  // Postings were appended in input order; keep them sorted by doc_id.
  for (auto& [_, list] : idx.postings_) {
    std::sort(list.begin(), list.end(),
              [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; });
  }
  return idx;
}

std::vector<CorpusDocument> read_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ResourceError("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file(ec)) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<CorpusDocument> docs;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      log_warning("skipping unreadable file " + path.string());
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
      log_warning("skipping unreadable file " + path.string());
      continue;
    }
    docs.push_back(CorpusDocument{path.stem().string(), buf.str()});
  }
  return docs;
}

InvertedIndex ingest(const std::filesystem::path& corpus_dir, IndexMode mode,
                     const SecretKey* key) {
  if (mode == IndexMode::kEncrypted && key == nullptr) {
    throw ConfigError("encrypted ingestion requires a key");
  }
  const auto docs = read_corpus(corpus_dir);
  if (docs.empty()) {
    throw ResourceError("no readable documents in " + corpus_dir.string());
  }
  return build_index(docs, mode, key);
}

std::string open_sealed(const SecretKey& key, std::string_view sealed) {
  ensure_sodium();
  const auto raw = from_base64(sealed);
  if (raw.size() < crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES) {
    throw Error("ciphertext too short");
  }
  const auto body_key = hmac(key.bytes(), kBodyKeyLabel);
  const std::size_t cipher_len = raw.size() - crypto_secretbox_NONCEBYTES;
  std::string plain(cipher_len - crypto_secretbox_MACBYTES, '\0');
  if (crypto_secretbox_open_easy(reinterpret_cast<unsigned char*>(plain.data()),
                                 raw.data() + crypto_secretbox_NONCEBYTES,
                                 cipher_len, raw.data(), body_key.data()) != 0) {
    throw Error("ciphertext failed authentication");
  }
  return plain;
}

std::string document_title(const DocumentRecord& doc, IndexMode mode,
                           const SecretKey* key) {
  if (mode == IndexMode::kPlain) return doc.title;
  if (key == nullptr) throw ConfigError("decryption requires a key");
  return open_sealed(*key, doc.title);
}

std::string document_body(const DocumentRecord& doc, IndexMode mode,
                          const SecretKey* key) {
  if (mode == IndexMode::kPlain) return doc.stored_body;
  if (key == nullptr) throw ConfigError("decryption requires a key");
  return open_sealed(*key, doc.stored_body);
}

std::string InvertedIndex::to_text() const {
  json j;
  j["format"] = "edgesearch-index";
  j["version"] = kIndexVersion;
  j["mode"] = std::string(mode_name(mode_));
  j["doc_count"] = documents_.size();
  json postings = json::object();
  for (const auto& [token, list] : postings_) {
    json arr = json::array();
    for (const Posting& p : list) {
      arr.push_back({{"doc", p.doc_id}, {"f", p.frequency}, {"pos", p.positions}});
    }
    postings[token] = std::move(arr);
  }
  j["postings"] = std::move(postings);
  json docs = json::array();
  for (const auto& [id, d] : documents_) {
    docs.push_back({{"doc_id", d.doc_id},
                    {"token_count", d.token_count},
                    {"title", d.title},
                    {"body", d.stored_body}});
  }
  j["documents"] = std::move(docs);
  return j.dump() + "\n";
}

InvertedIndex InvertedIndex::from_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("index snapshot: ") + e.what());
  }
  if (j.value("format", "") != "edgesearch-index" ||
      j.value("version", 0) != kIndexVersion) {
    throw ParseError("not an edgesearch index snapshot (or wrong version)");
  }
  try {
    InvertedIndex idx;
    auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw ParseError("index snapshot has unknown mode");
    idx.mode_ = *mode;
    for (const auto& [token, arr] : j.at("postings").items()) {
      auto& list = idx.postings_[token];
      for (const auto& p : arr) {
        list.push_back(Posting{p.at("doc").get<std::string>(),
                               p.at("f").get<std::uint32_t>(),
                               p.at("pos").get<std::vector<std::uint32_t>>()});
      }
    }
    for (const auto& d : j.at("documents")) {
      DocumentRecord rec{d.at("doc_id").get<std::string>(),
                         d.at("token_count").get<std::size_t>(),
                         d.at("title").get<std::string>(),
                         d.at("body").get<std::string>()};
      idx.documents_.emplace(rec.doc_id, std::move(rec));
    }
    if (idx.documents_.size() != j.at("doc_count").get<std::size_t>()) {
      throw ParseError("index snapshot doc_count mismatch");
    }
    return idx;
  } catch (const json::exception& e) {
    throw ParseError(std::string("index snapshot: ") + e.what());
  }
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp);
    out << to_text();
  }
  std::filesystem::rename(tmp, path);
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open index " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

std::optional<SearchToken> make_search_token(std::string_view term,
                                             IndexMode mode,
                                             const SecretKey* key) {
  if (mode == IndexMode::kEncrypted && key == nullptr) {
    throw ConfigError("encrypted search requires a key");
  }
  SearchToken out;
  std::optional<std::size_t> first;
  for (const Token& t : tokenize_flat(term)) {
    std::string norm = normalize_token(t.text);
    if (!is_indexable(norm)) continue;
    if (!first) first = t.position;
    SearchToken::Part part;
    part.offset = static_cast<std::uint32_t>(t.position - *first);
    part.value =
        mode == IndexMode::kEncrypted ? encrypt_token(*key, norm) : std::move(norm);
    out.parts.push_back(std::move(part));
  }
  if (out.parts.empty()) return std::nullopt;
  return out;
}

const MatchedDoc* MatchSet::find(std::string_view doc_id) const {
  auto it = std::lower_bound(
      docs.begin(), docs.end(), doc_id,
      [](const MatchedDoc& d, std::string_view id) { return d.doc_id < id; });
  if (it == docs.end() || it->doc_id != doc_id) return nullptr;
  return &*it;
}

std::size_t MatchSet::document_frequency(std::size_t term) const {
  std::size_t df = 0;
  for (const MatchedDoc& d : docs) {
    if (term < d.frequencies.size() && d.frequencies[term] > 0) ++df;
  }
  return df;
}

MatchSet match(const InvertedIndex& index, std::span<const SearchToken> terms) {
  if (terms.empty()) throw ValidationError("match needs at least one term");
  std::map<std::string, std::vector<std::uint32_t>> hits;
  auto record = [&](const std::string& doc_id, std::size_t term,
                    std::uint32_t freq) {
    auto& row = hits[doc_id];
    if (row.empty()) row.assign(terms.size(), 0);
    row[term] = freq;
  };

  for (std::size_t i = 0; i < terms.size(); ++i) {
    const SearchToken& t = terms[i];
    if (t.parts.empty()) continue;
    const auto* head = index.postings(t.parts.front().value);
    if (head == nullptr) continue;
    if (!t.is_phrase()) {
      for (const Posting& p : *head) record(p.doc_id, i, p.frequency);
      continue;
    }
    std::vector<const std::vector<Posting>*> lists;
    bool missing = false;
    for (std::size_t k = 1; k < t.parts.size(); ++k) {
      const auto* l = index.postings(t.parts[k].value);
      if (l == nullptr) {
        missing = true;
        break;
      }
      lists.push_back(l);
    }
    if (missing) continue;
    for (const Posting& p : *head) {
      std::vector<const Posting*> others;
      for (const auto* l : lists) {
        auto it = std::lower_bound(
            l->begin(), l->end(), p.doc_id,
            [](const Posting& x, const std::string& id) { return x.doc_id < id; });
        if (it == l->end() || it->doc_id != p.doc_id) break;
        others.push_back(&*it);
      }
      if (others.size() != lists.size()) continue;
      std::uint32_t count = 0;
      for (std::uint32_t start : p.positions) {
        bool all = true;
        for (std::size_t k = 0; k < others.size() && all; ++k) {
          const std::uint32_t delta = t.parts[k + 1].offset - t.parts[0].offset;
          all = contains_position(others[k]->positions, start + delta);
        }
        if (all) ++count;
      }
      if (count > 0) record(p.doc_id, i, count);
    }
  }

  MatchSet out;
  out.term_count = terms.size();
  for (auto& [doc_id, freqs] : hits) {
    const DocumentRecord* rec = index.document(doc_id);
    out.docs.push_back(MatchedDoc{doc_id, rec ? rec->token_count : 0,
                                  std::move(freqs)});
  }
  return out;
}

double tfidf(const MatchSet& delta, std::size_t term, std::size_t doc_position) {
  if (doc_position >= delta.docs.size()) return 0.0;
  const MatchedDoc& doc = delta.docs[doc_position];
  if (term >= doc.frequencies.size() || doc.frequencies[term] == 0 ||
      doc.token_count == 0) {
    return 0.0;
  }
  const std::size_t df = delta.document_frequency(term);
  if (df == 0) return 0.0;
  const double tf = double(doc.frequencies[term]) / double(doc.token_count);
  return tf * std::log(1.0 + double(delta.docs.size()) / double(df));
}

double tfidf(const InvertedIndex& index, std::size_t term,
             std::string_view doc_id, const MatchSet& delta) {
  const MatchedDoc* doc = delta.find(doc_id);
  const DocumentRecord* rec = index.document(doc_id);
  if (doc == nullptr || rec == nullptr) return 0.0;
  if (term >= doc->frequencies.size() || doc->frequencies[term] == 0) return 0.0;
  const std::size_t df = delta.document_frequency(term);
  if (df == 0 || rec->token_count == 0) return 0.0;
  const double tf = double(doc->frequencies[term]) / double(rec->token_count);
  return tf * std::log(1.0 + double(delta.docs.size()) / double(df));
}

std::string match_request_to_json(std::span<const SearchToken> terms) {
  json arr = json::array();
  for (const SearchToken& t : terms) arr.push_back(search_token_to_json(t));
  return json{{"terms", arr}}.dump();
}

std::vector<SearchToken> match_request_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    std::vector<SearchToken> out;
    for (const auto& t : j.at("terms")) {
      SearchToken token;
      for (const auto& p : t.at("parts")) {
        token.parts.push_back(SearchToken::Part{p.at("value").get<std::string>(),
                                                p.at("offset").get<std::uint32_t>()});
      }
      if (token.parts.empty()) throw ValidationError("search token without parts");
      out.push_back(std::move(token));
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("match request: ") + e.what());
  }
}

std::string match_set_to_json(const MatchSet& set) {
  json docs = json::array();
  for (const MatchedDoc& d : set.docs) {
    docs.push_back({{"doc_id", d.doc_id},
                    {"token_count", d.token_count},
                    {"frequencies", d.frequencies}});
  }
  return json{{"term_count", set.term_count}, {"docs", docs}}.dump();
}

MatchSet match_set_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    MatchSet out;
    out.term_count = j.at("term_count").get<std::size_t>();
    for (const auto& d : j.at("docs")) {
      out.docs.push_back(MatchedDoc{d.at("doc_id").get<std::string>(),
                                    d.at("token_count").get<std::size_t>(),
                                    d.at("frequencies").get<std::vector<std::uint32_t>>()});
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("match response: ") + e.what());
  }
}

std::string document_to_json(const DocumentRecord& doc) {
  return json{{"doc_id", doc.doc_id},
              {"token_count", doc.token_count},
              {"title", doc.title},
              {"body", doc.stored_body}}
      .dump();
}

DocumentRecord document_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    return DocumentRecord{j.at("doc_id").get<std::string>(),
                          j.at("token_count").get<std::size_t>(),
                          j.at("title").get<std::string>(),
                          j.at("body").get<std::string>()};
  } catch (const json::exception& e) {
    throw ParseError(std::string("document record: ") + e.what());
  }
}

LocalCloud::LocalCloud(std::shared_ptr<const InvertedIndex> index)
    : index_(std::move(index)) {
  if (!index_) throw ValidationError("LocalCloud needs an index");
}

IndexMode LocalCloud::mode() const { return snapshot()->mode(); }

MatchSet LocalCloud::match(std::span<const SearchToken> terms) {
  auto idx = snapshot();
  return edgesearch::match(*idx, terms);
}

std::optional<DocumentRecord> LocalCloud::fetch(std::string_view doc_id) {
  auto idx = snapshot();
  const DocumentRecord* d = idx->document(doc_id);
  if (d == nullptr) return std::nullopt;
  return *d;
}

void LocalCloud::replace(std::shared_ptr<const InvertedIndex> index) {
  if (!index) throw ValidationError("LocalCloud needs an index");
  std::lock_guard<std::mutex> lock(mu_);
  index_ = std::move(index);
}

std::shared_ptr<const InvertedIndex> LocalCloud::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return index_;
}

}  // namespace edgesearch
