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

#ifndef EDGESEARCH_CLOUDSIM_H_
#define EDGESEARCH_CLOUDSIM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgesearch {

enum class IndexMode { kPlain, kEncrypted };

std::string_view mode_name(IndexMode mode);  // "plain" | "encrypted"
std::optional<IndexMode> parse_mode(std::string_view name);

// 256-bit secret shared by the edge tier only.
class SecretKey {
 public:
  static constexpr std::size_t kSize = 32;

  // Exactly 64 hex characters. Throws ValidationError otherwise.
  static SecretKey from_hex(std::string_view hex);
  std::span<const unsigned char> bytes() const { return bytes_; }

 private:
  std::array<unsigned char, kSize> bytes_{};
};

// Lowercased, surrounding punctuation stripped. Empty if nothing remains.
std::string normalize_token(std::string_view token);

// True for tokens the index stores: normalized, non-empty, not a stopword.
bool is_indexable(std::string_view normalized);

// Deterministic tag: hex(HMAC-SHA256(key, token)), always 64 characters.
// Throws ValidationError on an empty token.
std::string encrypt_token(const SecretKey& key, std::string_view token);

struct Posting {
  std::string doc_id;
  std::uint32_t frequency = 0;
  std::vector<std::uint32_t> positions;  // strictly increasing
};

struct DocumentRecord {
  std::string doc_id;
  std::size_t token_count = 0;  // length of the document's token stream
  std::string title;            // plain, or base64 ciphertext
  std::string stored_body;      // plain, or base64 ciphertext
};

struct CorpusDocument {
  std::string doc_id;
  std::string text;
};

// The only structure the cloud tier consults. Immutable once built.
class InvertedIndex {
 public:
  IndexMode mode() const { return mode_; }
  std::size_t doc_count() const { return documents_.size(); }

  const std::vector<Posting>* postings(std::string_view index_token) const;
  const DocumentRecord* document(std::string_view doc_id) const;
  const std::map<std::string, std::vector<Posting>, std::less<>>& all_postings()
      const {
    return postings_;
  }
  const std::map<std::string, DocumentRecord, std::less<>>& documents() const {
    return documents_;
  }

  // Single JSON document: header (format, version, mode, doc_count),
  // postings, then the document table. Byte-stable for a given index.
  std::string to_text() const;
  static InvertedIndex from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

 private:
  friend InvertedIndex build_index(std::span<const CorpusDocument>, IndexMode,
                                   const SecretKey*);

  IndexMode mode_ = IndexMode::kPlain;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
  std::map<std::string, DocumentRecord, std::less<>> documents_;
};

// Indexes every indexable token with positions. ENCRYPTED mode needs `key`:
// index tokens become encrypt_token() tags and titles/bodies are sealed.
InvertedIndex build_index(std::span<const CorpusDocument> docs, IndexMode mode,
                          const SecretKey* key);

// Reads every regular file of `corpus_dir` (doc_id = file stem, sorted).
// Unreadable files are skipped with a warning. Throws ResourceError when no
// document could be read.
InvertedIndex ingest(const std::filesystem::path& corpus_dir, IndexMode mode,
                     const SecretKey* key);
std::vector<CorpusDocument> read_corpus(const std::filesystem::path& dir);

// Opens a sealed title or body. Throws Error when authentication fails.
std::string open_sealed(const SecretKey& key, std::string_view sealed);

// Plain title/body of a record, decrypting when `mode` is ENCRYPTED.
std::string document_title(const DocumentRecord& doc, IndexMode mode,
                           const SecretKey* key);
std::string document_body(const DocumentRecord& doc, IndexMode mode,
                          const SecretKey* key);

// A query term as the cloud sees it: one part per indexable token with its
// offset from the first part. Multi-part tokens are phrase queries.
struct SearchToken {
  struct Part {
    std::string value;
    std::uint32_t offset = 0;
  };
  std::vector<Part> parts;

  bool is_phrase() const { return parts.size() > 1; }
};

// Builds the SearchToken for an edge-side term, or nothing when the term has
// no indexable token. ENCRYPTED mode requires `key`.
std::optional<SearchToken> make_search_token(std::string_view term,
                                             IndexMode mode,
                                             const SecretKey* key);

struct MatchedDoc {
  std::string doc_id;
  std::size_t token_count = 0;
  std::vector<std::uint32_t> frequencies;  // one per requested term
};

// The retrieved set, ordered by doc_id. Carries no scores.
struct MatchSet {
  std::size_t term_count = 0;
  std::vector<MatchedDoc> docs;

  const MatchedDoc* find(std::string_view doc_id) const;
  std::size_t document_frequency(std::size_t term) const;
};

// Exhaustive pattern matching: postings union for single tokens, adjacent
// positions for phrases.
MatchSet match(const InvertedIndex& index, std::span<const SearchToken> terms);

// (f / |doc|) * ln(1 + |delta| / df), with df counted inside delta. Zero when
// the term is absent from the document.
double tfidf(const MatchSet& delta, std::size_t term, std::size_t doc_position);
double tfidf(const InvertedIndex& index, std::size_t term,
             std::string_view doc_id, const MatchSet& delta);

// Edge <-> cloud wire format (JSON).
std::string match_request_to_json(std::span<const SearchToken> terms);
std::vector<SearchToken> match_request_from_json(std::string_view text);
std::string match_set_to_json(const MatchSet& set);
MatchSet match_set_from_json(std::string_view text);
std::string document_to_json(const DocumentRecord& doc);
DocumentRecord document_from_json(std::string_view text);

// What the edge tier may ask of the cloud tier.
class CloudBackend {
 public:
  virtual ~CloudBackend() = default;
  virtual IndexMode mode() const = 0;
  virtual MatchSet match(std::span<const SearchToken> terms) = 0;
  virtual std::optional<DocumentRecord> fetch(std::string_view doc_id) = 0;
};

// In-process backend over an index snapshot. The snapshot can be swapped
// atomically while other threads match against the previous one.
class LocalCloud : public CloudBackend {
 public:
  explicit LocalCloud(std::shared_ptr<const InvertedIndex> index);

  IndexMode mode() const override;
  MatchSet match(std::span<const SearchToken> terms) override;
  std::optional<DocumentRecord> fetch(std::string_view doc_id) override;

  void replace(std::shared_ptr<const InvertedIndex> index);
  std::shared_ptr<const InvertedIndex> snapshot() const;

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const InvertedIndex> index_;
};

}  // namespace edgesearch

#endif  // EDGESEARCH_CLOUDSIM_H_
