#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sparsetag/corpus.hpp"

namespace sparsetag {

enum class EmbeddingFormat {
  text,           // `word v1 ... vk` per line; a `|V| k` header is auto-detected
  word2vec_text,  // header line required
};

EmbeddingFormat parse_embedding_format(const std::string& name);

/// Dense word vectors, one row per vocabulary entry. Immutable once built.
class EmbeddingTable {
public:
  EmbeddingTable() = default;
  /// `values` is row-major, |vocab| x dim. Throws on duplicates or non-finite values.
  EmbeddingTable(std::vector<std::string> vocab, std::size_t dim, std::vector<double> values);

  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<double>& values() const { return values_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::optional<std::size_t> index_of(const std::string& word) const;

  /// Designates an existing vocabulary entry as the out-of-vocabulary vector.
  void set_unknown(const std::string& word);
  /// When set, a miss on the exact form retries with the ASCII-lowercased form.
  void set_lowercase_fallback(bool on) { lowercase_fallback_ = on; }

  /// Exact match, then lowercase fallback (if enabled); no unknown row.
  std::optional<std::size_t> find(const std::string& word) const;
  std::optional<std::span<const double>> lookup(const std::string& word) const;

private:
  std::vector<std::string> vocab_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::size_t> unknown_;
  bool lowercase_fallback_ = false;
};

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format = EmbeddingFormat::text);
std::string dump_embeddings(const EmbeddingTable& table, bool header = false);

struct CoverageReport {
  double token_coverage = 0.0;
  double type_coverage = 0.0;
  std::size_t tokens_total = 0;
  std::size_t tokens_covered = 0;
  std::size_t types_total = 0;
  std::size_t types_covered = 0;
};

/// Fraction of tokens / distinct forms with a vector (unknown row not counted).
CoverageReport coverage(const EmbeddingTable& table, const Dataset& data);

}  // namespace sparsetag
