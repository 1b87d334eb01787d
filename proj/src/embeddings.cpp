#include "sparsetag/embeddings.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "sparsetag/text.hpp"

namespace sparsetag {

EmbeddingFormat parse_embedding_format(const std::string& name) {
  if (name == "text") return EmbeddingFormat::text;
  if (name == "word2vec-text") return EmbeddingFormat::word2vec_text;
  throw std::invalid_argument("unknown embedding format: " + name);
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocab, std::size_t dim, std::vector<double> values)
    : vocab_(std::move(vocab)), dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw std::invalid_argument("embedding dimension must be positive");
  if (values_.size() != vocab_.size() * dim_) throw std::invalid_argument("embedding matrix size does not match vocabulary");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite embedding value");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) throw std::invalid_argument("duplicate word '" + vocab_[i] + "'");
  }
}

std::optional<std::size_t> EmbeddingTable::index_of(const std::string& word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingTable::set_unknown(const std::string& word) {
  const auto idx = index_of(word);
  if (!idx) throw std::invalid_argument("unknown-word entry '" + word + "' not in vocabulary");
  unknown_ = *idx;
}

std::optional<std::size_t> EmbeddingTable::find(const std::string& word) const {
  if (auto idx = index_of(word)) return idx;
  if (lowercase_fallback_) return index_of(ascii_lower(word));
  return std::nullopt;
}

std::optional<std::span<const double>> EmbeddingTable::lookup(const std::string& word) const {
  if (const auto idx = find(word)) return row(*idx);
  if (unknown_) return row(*unknown_);
  return std::nullopt;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  const auto lines = read_lines(path);
  const std::string src = path.string();
  std::vector<std::string> vocab;
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t first = 0;
  long declared_rows = -1;

  // Skip leading blank lines when looking for the header.
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first < lines.size()) {
    const auto f = split_whitespace(lines[first]);
    long a = 0;
    long b = 0;
    const bool header = f.size() == 2 && parse_long(f[0], a) && parse_long(f[1], b) && a >= 0 && b > 0;
    if (header) {
      declared_rows = a;
      dim = static_cast<std::size_t>(b);
      ++first;
    } else if (format == EmbeddingFormat::word2vec_text) {
      throw ParseError(src, first + 1, "expected '<count> <dim>' header");
    }
  }

  std::unordered_set<std::string> seen;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto fields = split_whitespace(lines[i]);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError(src, i + 1, "expected a word followed by numbers");
    const std::size_t k = fields.size() - 1;
    if (dim == 0) dim = k;
    if (k != dim) throw ParseError(src, i + 1, "expected " + std::to_string(dim) + " values, got " + std::to_string(k));
    std::string word(fields[0]);
    if (!seen.insert(word).second) throw ParseError(src, i + 1, "duplicate word '" + word + "'");
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v) || !std::isfinite(v)) {
        throw ParseError(src, i + 1, "bad numeric field '" + std::string(fields[j]) + "'");
      }
      values.push_back(v);
    }
    vocab.push_back(std::move(word));
  }
  if (declared_rows >= 0 && static_cast<std::size_t>(declared_rows) != vocab.size()) {
    throw ParseError(src, first, "header declares " + std::to_string(declared_rows) + " rows, file has " + std::to_string(vocab.size()));
  }
  if (vocab.empty()) throw ParseError(src, 0, "no embedding rows");
  return EmbeddingTable(std::move(vocab), dim, std::move(values));
}

std::string dump_embeddings(const EmbeddingTable& table, bool header) {
  std::string out;
  if (header) out += std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.vocab()[i];
    for (double v : table.row(i)) {
      out += ' ';
      out += format_sig(v, 9);
    }
    out += '\n';
  }
  return out;
}

CoverageReport coverage(const EmbeddingTable& table, const Dataset& data) {
  if (data.sentences.empty()) throw std::invalid_argument("coverage of an empty dataset");
  CoverageReport r;
  std::unordered_set<std::string> types;
  std::unordered_set<std::string> covered_types;
  for (const auto& s : data.sentences) {
    for (const auto& t : s) {
      ++r.tokens_total;
      types.insert(t.form);
      if (table.find(t.form)) {
        ++r.tokens_covered;
        covered_types.insert(t.form);
      }
    }
  }
  r.types_total = types.size();
  r.types_covered = covered_types.size();
  r.token_coverage = r.tokens_total ? static_cast<double>(r.tokens_covered) / static_cast<double>(r.tokens_total) : 0.0;
  r.type_coverage = r.types_total ? static_cast<double>(r.types_covered) / static_cast<double>(r.types_total) : 0.0;
  return r;
}

}  // namespace sparsetag
