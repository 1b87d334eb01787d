#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sparsetag/corpus.hpp"
#include "sparsetag/embeddings.hpp"
#include "sparsetag/sparse_coding.hpp"

namespace sparsetag::testing {

/// Self-deleting scratch directory.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }
  std::filesystem::path write(const std::string& name, const std::string& content) const;

private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path);

/// Unit-norm vectors drawn around `clusters` random centres.
EmbeddingTable clustered_table(std::size_t words, std::size_t dim, std::size_t clusters, std::uint64_t seed);

Dictionary random_dictionary(std::size_t k, std::size_t m, std::uint64_t seed, Variant variant = Variant::sc1);

/// Sequence-labeling corpus whose word vectors are ±a·p_label + noise. The
/// label is a linear function of sparse-code indicators but not of the raw
/// coordinates (the sign is random per word).
struct SignAmbiguousCorpus {
  Dataset train;
  Dataset test;
  EmbeddingTable embeddings;
};

SignAmbiguousCorpus sign_ambiguous_corpus(std::size_t sentences, std::size_t labels, std::size_t words_per_label,
                                          std::size_t dim, double test_fraction, std::uint64_t seed);

/// 10 sentences x 10 distinct tokens; the first 70 token forms are in the table.
struct CoverageFixture {
  Dataset data;
  EmbeddingTable table;
};

CoverageFixture coverage_fixture();

}  // namespace sparsetag::testing
