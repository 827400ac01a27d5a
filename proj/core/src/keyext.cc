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

#include "edgesearch/keyext.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

namespace edgesearch {
namespace {

// NLTK's English list plus a handful of quantifiers and modal verbs.
constexpr std::array<std::string_view, 187> kStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "you're", "you've", "you'll", "you'd", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "she's", "her", "hers",
    "herself", "it", "it's", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "that'll", "these", "those", "am", "is", "are", "was", "were", "be",
    "been", "being", "have", "has", "had", "having", "do", "does", "did",
    "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
    "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above",
    "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
    "under", "again", "further", "then", "once", "here", "there", "when",
    "where", "why", "how", "all", "any", "both", "each", "few", "more", "most",
    "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
    "than", "too", "very", "s", "t", "can", "will", "just", "don", "should",
    "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren",
    "aren't", "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't",
    "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't",
    "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan",
    "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't",
    "won", "won't", "wouldn", "wouldn't", "various", "also", "several",
    "would", "could", "may", "via", "per", "best"};

const std::unordered_set<std::string_view>& stopword_set() {
  static const std::unordered_set<std::string_view> set(kStopwords.begin(),
                                                        kStopwords.end());
  return set;
}

bool is_word_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

bool is_single_letter_abbreviation(std::string_view s) {
  // ([A-Za-z]\.){2,}
  if (s.size() < 4 || s.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    if (!std::isalpha(static_cast<unsigned char>(s[i])) || s[i + 1] != '.') {
      return false;
    }
  }
  return true;
}

bool is_abbreviation(std::string_view core) {
  static const std::set<std::string, std::less<>> kKnown = {
      "mr.", "mrs.", "ms.", "dr.", "prof.", "inc.", "ltd.", "jr.",
      "sr.", "st.", "vs.", "etc.", "co.", "corp.", "no.", "fig."};
  if (is_single_letter_abbreviation(core)) return true;
  return kKnown.count(to_lower(core)) > 0;
}

Token make_token(std::string_view text, std::size_t position) {
  return Token{std::string(text), to_lower(text), position};
}

// Splits a whitespace-free chunk into word tokens. Apostrophes inside a word
// and '.'/',' between digits are kept.
void split_chunk(std::string_view chunk, std::vector<std::string_view>& out) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    while (i < chunk.size() && !is_word_byte(chunk[i])) ++i;
    std::size_t j = i;
    while (j < chunk.size()) {
      if (is_word_byte(chunk[j])) {
        ++j;
        continue;
      }
      const bool inner = j > i && j + 1 < chunk.size() &&
                         is_word_byte(chunk[j + 1]);
      if (inner && chunk[j] == '\'') {
        ++j;
        continue;
      }
      if (inner && (chunk[j] == '.' || chunk[j] == ',') &&
          std::isdigit(static_cast<unsigned char>(chunk[j - 1])) &&
          std::isdigit(static_cast<unsigned char>(chunk[j + 1]))) {
        ++j;
        continue;
      }
      break;
    }
    if (j > i) out.push_back(chunk.substr(i, j - i));
    i = j;
  }
}

bool is_upper_initial(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

bool is_acronym(std::string_view s) {
  std::size_t letters = 0;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalpha(u)) {
      if (!std::isupper(u)) return false;
      ++letters;
    }
  }
  return letters >= 2;
}

double median(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return double(v[n / 2]);
  return (double(v[n / 2 - 1]) + double(v[n / 2])) / 2.0;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::span<const std::string_view> stopwords() { return kStopwords; }

bool is_stopword(std::string_view lower) {
  return stopword_set().count(lower) > 0;
}

bool is_keyword_candidate(std::string_view lower) {
  if (lower.size() < 2 || is_stopword(lower)) return false;
  return std::any_of(lower.begin(), lower.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || u >= 0x80;
  });
}

std::vector<Sentence> tokenize(std::string_view text) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::size_t position = 0;
  std::vector<std::string_view> words;

  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j == i) break;
    std::string_view chunk = text.substr(i, j - i);
    i = j;

    // Peel opening punctuation and closing quotes/brackets.
    while (!chunk.empty() && !is_word_byte(chunk.front())) chunk.remove_prefix(1);
    while (!chunk.empty() && is_closer(chunk.back())) chunk.remove_suffix(1);
    if (chunk.empty()) continue;

    std::string_view core = chunk;
    while (!core.empty() &&
           (core.back() == ',' || core.back() == ';' || core.back() == ':')) {
      core.remove_suffix(1);
    }
    if (is_abbreviation(core)) {
      current.push_back(make_token(core, position++));
      continue;
    }

    const char last = chunk.back();
    const bool ends_sentence = last == '.' || last == '!' || last == '?';
    words.clear();
    split_chunk(chunk, words);
    for (std::string_view w : words) current.push_back(make_token(w, position++));
    if (ends_sentence && !current.empty()) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

std::vector<Token> tokenize_flat(std::string_view text) {
  std::vector<Token> out;
  for (auto& sentence : tokenize(text)) {
    for (auto& t : sentence) out.push_back(std::move(t));
  }
  return out;
}

std::vector<TermFeatures> keyword_features(std::string_view text) {
  const auto sentences = tokenize(text);

  struct Stats {
    std::size_t tf = 0;
    std::size_t cased = 0;
    std::size_t acronyms = 0;
    std::set<std::size_t> sentence_ids;
    std::map<std::string, std::size_t> left;
    std::map<std::string, std::size_t> right;
  };
  std::map<std::string, Stats> stats;

  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Sentence& sentence = sentences[s];
    for (std::size_t k = 0; k < sentence.size(); ++k) {
      const Token& t = sentence[k];
      if (!is_keyword_candidate(t.lower)) continue;
      Stats& st = stats[t.lower];
      ++st.tf;
      if (is_acronym(t.text)) {
        ++st.acronyms;
      } else if (k > 0 && is_upper_initial(t.text)) {
        ++st.cased;
      }
      st.sentence_ids.insert(s);
      // Co-occurrence window of one token on each side.
      if (k > 0) ++st.left[sentence[k - 1].lower];
      if (k + 1 < sentence.size()) ++st.right[sentence[k + 1].lower];
    }
  }
  if (stats.empty()) return {};

  double mean_tf = 0;
  std::size_t max_tf = 0;
  for (const auto& [_, st] : stats) {
    mean_tf += double(st.tf);
    max_tf = std::max(max_tf, st.tf);
  }
  mean_tf /= double(stats.size());
  double var = 0;
  for (const auto& [_, st] : stats) {
    var += (double(st.tf) - mean_tf) * (double(st.tf) - mean_tf);
  }
  const double std_tf = std::sqrt(var / double(stats.size()));

  auto diversity = [](const std::map<std::string, std::size_t>& neighbors) {
    std::size_t total = 0;
    for (const auto& [_, n] : neighbors) total += n;
    return total == 0 ? 0.0 : double(neighbors.size()) / double(total);
  };

  std::vector<TermFeatures> out;
  out.reserve(stats.size());
  for (const auto& [term, st] : stats) {
    TermFeatures f;
    f.term = term;
    f.tf = st.tf;
    f.cased = st.cased;
    f.acronyms = st.acronyms;
    const double tf = double(st.tf);
    f.casing = double(std::max(st.cased, st.acronyms)) / (1.0 + std::log(tf));
    f.position = std::log(std::log(
        3.0 + median({st.sentence_ids.begin(), st.sentence_ids.end()})));
    f.frequency = tf / (mean_tf + std_tf);
    f.relatedness =
        1.0 + (diversity(st.left) + diversity(st.right)) * tf / double(max_tf);
    f.dispersion = double(st.sentence_ids.size()) / double(sentences.size());
    f.score = (f.relatedness * f.position) /
              (f.casing + f.frequency / f.relatedness +
               f.dispersion / f.relatedness);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.term < b.term;
  });
  return out;
}

std::vector<KeywordScore> extract_keywords(std::string_view text,
                                           std::size_t k) {
  std::vector<KeywordScore> out;
  for (auto& f : keyword_features(text)) {
    if (out.size() >= k) break;
    out.push_back(KeywordScore{std::move(f.term), f.score});
  }
  return out;
}

std::vector<std::string> trim_keywords(std::string_view text,
                                       std::size_t top_k,
                                       std::size_t short_text_tokens) {
  const auto features = keyword_features(text);
  if (features.empty()) return {};
  const auto tokens = tokenize_flat(text);

  std::set<std::string> kept;
  if (tokens.size() < short_text_tokens) {
    double mean = 0;
    for (const auto& f : features) mean += f.score;
    mean /= double(features.size());
    for (const auto& f : features) {
      if (f.score < mean) kept.insert(f.term);
    }
  } else {
    for (std::size_t i = 0; i < features.size() && i < top_k; ++i) {
      kept.insert(features[i].term);
    }
  }

  std::vector<std::string> ordered;
  for (const Token& t : tokens) {
    if (kept.erase(t.lower)) ordered.push_back(t.lower);
  }
  return ordered;
}

}  // namespace edgesearch
