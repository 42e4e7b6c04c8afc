#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mixdialog {

struct RetrievalDocument {
  std::vector<std::string> prompt_tokens;
  std::string response_text;
};

struct RetrievalHit {
  std::size_t document = 0;
  std::string response_text;
  double score = 0.0;
};

/// Keyword retrieval over prompt/response pairs. A document scores the sum of
/// idf weights of the distinct query tokens its prompt shares, with
/// idf(t) = ln(1 + N / df(t)). No length normalization.
class RetrievalIndex {
 public:
  /// Throws EmptyCorpus if `pairs` is empty, ValidationError on an empty response.
  static RetrievalIndex from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

  /// One `prompt<TAB>response` pair per line, UTF-8. Blank lines are skipped.
  /// Throws ParseError (with the 1-based line number) or EmptyCorpus.
  static RetrievalIndex build(const std::filesystem::path& corpus_path);

  std::size_t size() const noexcept { return documents_.size(); }
  const std::vector<RetrievalDocument>& documents() const noexcept { return documents_; }
  double idf(const std::string& token) const;

  double score(const std::vector<std::string>& query_tokens, std::size_t document) const;

  /// Top-k by score, ties by document order. k larger than the corpus
  /// returns every document.
  std::vector<RetrievalHit> retrieve(const std::vector<std::string>& query_tokens, std::size_t k) const;

 private:
  std::vector<RetrievalDocument> documents_;
  std::map<std::string, double, std::less<>> idf_;
};

}  // namespace mixdialog
