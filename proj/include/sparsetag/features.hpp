#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sparsetag/corpus.hpp"
#include "sparsetag/embeddings.hpp"
#include "sparsetag/sparse_coding.hpp"

namespace sparsetag {

enum class Scheme { sc, dense, brown, fr_w, fr_wc, wi, wi_sc };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct FeatureConfig {
  Scheme scheme = Scheme::sc;
  int window = 1;
  std::vector<int> brown_prefix_lengths = {4, 6, 10, 20};
};

void validate(const FeatureConfig& config);

struct Feature {
  std::string name;
  double value = 1.0;
  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Features at one token position, sorted by name with unique names.
using FeatureVector = std::vector<Feature>;

/// Word → Brown cluster bit-string path.
class ClusterTable {
public:
  ClusterTable() = default;
  explicit ClusterTable(std::unordered_map<std::string, std::string> paths);

  const std::string* find(const std::string& word) const;
  std::size_t size() const { return paths_.size(); }
  void set_lowercase_fallback(bool on) { lowercase_fallback_ = on; }

private:
  std::unordered_map<std::string, std::string> paths_;
  bool lowercase_fallback_ = false;
};

/// `bitstring<TAB>word<TAB>count` per line.
ClusterTable read_clusters(const std::filesystem::path& path);

/// One "+j" / "-j" string per nonzero coefficient.
std::vector<std::string> sparse_features(const SparseVector& alpha);
/// "d:j" for every coordinate, zeros included.
FeatureVector dense_features(std::span<const double> w);
/// "bp<p>=<first min(p, |path|) bits>" for each p.
std::vector<std::string> brown_features(const std::string& path, std::span<const int> lengths);
/// Word-level templates (and character-level ones when include_chars) for
/// position t. Templates reaching outside the sentence are dropped.
std::vector<std::string> rich_features(const std::vector<std::string>& words, std::size_t t, bool include_chars);

struct FeatureResources {
  const SparseCodes* codes = nullptr;
  const EmbeddingTable* embeddings = nullptr;
  const ClusterTable* clusters = nullptr;
};

/// Throws std::invalid_argument if the scheme's resource is missing.
void require_resources(const FeatureConfig& config, const FeatureResources& resources);

FeatureVector token_features(const std::vector<std::string>& words, std::size_t t, const FeatureConfig& config,
                             const FeatureResources& resources);

std::vector<FeatureVector> sentence_features(const std::vector<std::string>& words, const FeatureConfig& config,
                                             const FeatureResources& resources);

/// Features for every sentence (OpenMP over sentences).
std::vector<std::vector<FeatureVector>> dataset_features(const Dataset& data, const FeatureConfig& config,
                                                         const FeatureResources& resources);

std::vector<std::string> forms_of(const Sentence& sentence);

}  // namespace sparsetag
