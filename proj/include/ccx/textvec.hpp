#pragma once

// Tokenizer and TF-IDF vectorizer for transcripts.

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccx/common.hpp"
#include "ccx/corpus.hpp"

namespace ccx {

struct SparseEntry {
  int index = 0;
  double weight = 0.0;
  bool operator==(const SparseEntry&) const = default;
};

// Indices strictly increasing.
using SparseVector = std::vector<SparseEntry>;

inline double value_at(const SparseVector& v, int index) {
  auto it = std::lower_bound(v.begin(), v.end(), index, [](const SparseEntry& e, int i) { return e.index < i; });
  return (it != v.end() && it->index == index) ? it->weight : 0.0;
}

// Lowercase; any run of non-alphanumeric characters separates tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char ch : text) {
    if (std::isalnum(ch)) {
      cur += static_cast<char>(std::tolower(ch));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline std::vector<std::string> tokenize(const Transcript& t) {
  std::vector<std::string> out;
  for (const auto& u : t.utterances) {
    auto toks = tokenize(u.text);
    out.insert(out.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
  }
  return out;
}

class Vocabulary {
 public:
  Vocabulary() = default;

  // `tokens` sorted lexicographically; `doc_freq` aligned with it.
  Vocabulary(std::vector<std::string> tokens, std::vector<int> doc_freq, int documents)
      : tokens_(std::move(tokens)), doc_freq_(std::move(doc_freq)), documents_(documents) {
    if (tokens_.size() != doc_freq_.size()) fail_data("vocabulary: token and df lengths differ");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (doc_freq_[i] < 1) fail_data("vocabulary: document frequency must be >= 1 for '" + tokens_[i] + "'");
      if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
        fail_data("vocabulary: duplicate token '" + tokens_[i] + "'");
      }
    }
  }

  int size() const { return static_cast<int>(tokens_.size()); }
  int documents() const { return documents_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<int>& doc_freq() const { return doc_freq_; }

  // -1 when absent.
  int index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : it->second;
  }

  double idf(int index) const {
    return std::log((1.0 + documents_) / (1.0 + doc_freq_[static_cast<std::size_t>(index)])) + 1.0;
  }

  bool operator==(const Vocabulary& o) const {
    return tokens_ == o.tokens_ && doc_freq_ == o.doc_freq_ && documents_ == o.documents_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<int> doc_freq_;
  int documents_ = 0;
  std::unordered_map<std::string, int> index_;
};

inline Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& documents, int min_doc_freq = 2) {
  if (documents.empty()) fail_data("fit_vocabulary: empty corpus");
  std::map<std::string, int> df;
  for (const auto& doc : documents) {
    std::vector<std::string> uniq(doc);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto& tok : uniq) ++df[tok];
  }
  std::vector<std::string> tokens;
  std::vector<int> freq;
  for (const auto& [tok, n] : df) {
    if (n >= min_doc_freq) {
      tokens.push_back(tok);
      freq.push_back(n);
    }
  }
  return Vocabulary(std::move(tokens), std::move(freq), static_cast<int>(documents.size()));
}

inline Vocabulary fit_vocabulary(const std::vector<Transcript>& transcripts, int min_doc_freq = 2) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(transcripts.size());
  for (const auto& t : transcripts) docs.push_back(tokenize(t));
  return fit_vocabulary(docs, min_doc_freq);
}

// tf * idf, L2-normalized; unknown tokens dropped.
inline SparseVector vectorize(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
  std::map<int, int> tf;
  for (const auto& tok : tokens) {
    int idx = vocab.index_of(tok);
    if (idx >= 0) ++tf[idx];
  }
  SparseVector v;
  v.reserve(tf.size());
  double norm2 = 0.0;
  for (const auto& [idx, count] : tf) {
    double w = count * vocab.idf(idx);
    v.push_back({idx, w});
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& e : v) e.weight *= inv;
  }
  return v;
}

inline SparseVector vectorize(const Vocabulary& vocab, const Transcript& t) { return vectorize(vocab, tokenize(t)); }

// Format: `documents,D` line, then `token,index,df` header, then one row per token.
inline void save_vocabulary(const std::string& path, const Vocabulary& v) {
  auto out = open_output(path);
  out << "documents," << v.documents() << '\n' << "token,index,df\n";
  for (int i = 0; i < v.size(); ++i) {
    out << v.tokens()[static_cast<std::size_t>(i)] << ',' << i << ',' << v.doc_freq()[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) fail_usage("write failed: " + path);
}

inline Vocabulary load_vocabulary(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) fail_data(path + ": empty vocabulary file");
  auto head = split(trim(line), ',');
  if (head.size() != 2 || head[0] != "documents") fail_data(path + " line 1: expected 'documents,D'");
  int docs = static_cast<int>(parse_int(head[1], path + " line 1"));
  if (!std::getline(in, line) || trim(line) != "token,index,df") fail_data(path + " line 2: expected header 'token,index,df'");
  std::vector<std::string> tokens;
  std::vector<int> df;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty()) continue;
    auto cells = split(t, ',');
    const std::string where = path + " line " + std::to_string(line_no);
    if (cells.size() != 3) fail_data(where + ": expected 3 fields");
    if (parse_int(cells[1], where) != static_cast<long long>(tokens.size())) fail_data(where + ": indices must be dense");
    tokens.push_back(cells[0]);
    df.push_back(static_cast<int>(parse_int(cells[2], where)));
  }
  return Vocabulary(std::move(tokens), std::move(df), docs);
}

}  // namespace ccx
