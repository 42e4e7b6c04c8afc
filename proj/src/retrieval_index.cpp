#include "mixdialog/retrieval_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "mixdialog/core.hpp"
#include "mixdialog/errors.hpp"

namespace mixdialog {

RetrievalIndex RetrievalIndex::from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw EmptyCorpus("retrieval corpus has no documents");
  RetrievalIndex index;
  std::map<std::string, int, std::less<>> df;
  for (const auto& [prompt, response] : pairs) {
    if (response.empty()) throw ValidationError("document with empty response for prompt '" + prompt + "'");
    RetrievalDocument doc{tokenize(prompt), response};
    std::set<std::string> distinct(doc.prompt_tokens.begin(), doc.prompt_tokens.end());
    for (const auto& t : distinct) ++df[t];
    index.documents_.push_back(std::move(doc));
  }
  const double n = static_cast<double>(index.documents_.size());
  for (const auto& [token, count] : df) index.idf_[token] = std::log(1.0 + n / count);
  return index;
}

RetrievalIndex RetrievalIndex::build(const std::filesystem::path& corpus_path) {
  std::ifstream in(corpus_path);
  if (!in) throw ParseError("cannot open corpus file " + corpus_path.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(corpus_path.string() + ":" + std::to_string(line_no) +
                       ": expected exactly one tab between prompt and response");
    }
    std::string response = line.substr(tab + 1);
    if (response.find_first_not_of(' ') == std::string::npos) {
      throw ParseError(corpus_path.string() + ":" + std::to_string(line_no) + ": empty response");
    }
    pairs.emplace_back(line.substr(0, tab), std::move(response));
  }
  if (pairs.empty()) throw EmptyCorpus("corpus file " + corpus_path.string() + " has no documents");
  return from_pairs(pairs);
}

double RetrievalIndex::idf(const std::string& token) const {
  auto it = idf_.find(token);
  return it == idf_.end() ? 0.0 : it->second;
}

double RetrievalIndex::score(const std::vector<std::string>& query_tokens, std::size_t document) const {
  const auto& prompt = documents_.at(document).prompt_tokens;
  std::set<std::string_view> query(query_tokens.begin(), query_tokens.end());
  double s = 0.0;
  for (const auto& t : query) {
    if (std::find(prompt.begin(), prompt.end(), t) != prompt.end()) s += idf(std::string(t));
  }
  return s;
}

std::vector<RetrievalHit> RetrievalIndex::retrieve(const std::vector<std::string>& query_tokens,
                                                   std::size_t k) const {
  std::vector<double> scores(documents_.size());
  for (std::size_t d = 0; d < documents_.size(); ++d) scores[d] = score(query_tokens, d);
  std::vector<std::size_t> order(documents_.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<RetrievalHit> hits;
  hits.reserve(top);
  for (std::size_t i = 0; i < top; ++i) {
    hits.push_back({order[i], documents_[order[i]].response_text, scores[order[i]]});
  }
  return hits;
}

}  // namespace mixdialog
