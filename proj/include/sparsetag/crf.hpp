#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sparsetag/features.hpp"

namespace sparsetag {

/// A sentence with features resolved to model ids, stored position-major
/// (CSR: the features of position t are [offsets[t], offsets[t+1])).
struct CompiledSentence {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> ids;
  std::vector<double> values;
  // Gold label ids; empty when decoding.
  std::vector<std::uint32_t> labels;

  std::size_t length() const { return offsets.size() - 1; }
};

/// Linear-chain CRF: emission weights per (feature, label) and label-pair
/// transition weights. All weights live in one vector, emissions first
/// (feature-major), then the L x L transition block (row = previous label).
class CrfModel {
public:
  CrfModel() = default;
  explicit CrfModel(std::vector<std::string> labels);

  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  std::optional<std::uint32_t> label_id(const std::string& label) const;
  std::optional<std::uint32_t> feature_id(const std::string& name) const;
  /// Adds a feature (zero weights) if missing and returns its id.
  std::uint32_t intern_feature(const std::string& name);

  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t transition_offset() const { return num_features() * num_labels(); }

  double emission(std::uint32_t feature, std::uint32_t label) const { return weights_[feature * num_labels() + label]; }
  double& emission(std::uint32_t feature, std::uint32_t label) { return weights_[feature * num_labels() + label]; }
  double transition(std::uint32_t from, std::uint32_t to) const { return weights_[transition_offset() + from * num_labels() + to]; }
  double& transition(std::uint32_t from, std::uint32_t to) { return weights_[transition_offset() + from * num_labels() + to]; }

  /// Resolves features to ids. With `grow`, unseen features are added;
  /// otherwise they are skipped. Gold labels are resolved when given.
  CompiledSentence compile(const std::vector<FeatureVector>& features, const std::vector<std::string>* gold = nullptr,
                           bool grow = false);

  CompiledSentence compile(const std::vector<FeatureVector>& features) const;

  double c1 = 1.0;
  double c2 = 0.001;
  // Free-form run metadata (scheme, window, task, resource shape).
  std::map<std::string, std::string> meta;

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> label_index_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, std::uint32_t> feature_index_;
  std::vector<double> weights_;
};

/// Per-position label scores plus the (position-independent) transition matrix.
struct Lattice {
  std::size_t length = 0;
  std::size_t labels = 0;
  std::vector<double> emission;    // length x labels
  std::vector<double> transition;  // labels x labels

  double& at(std::size_t t, std::size_t y) { return emission[t * labels + y]; }
  double at(std::size_t t, std::size_t y) const { return emission[t * labels + y]; }
};

Lattice score_lattice(const CrfModel& model, const CompiledSentence& sentence);
/// Features unknown to the model are ignored.
Lattice score_lattice(const CrfModel& model, const std::vector<FeatureVector>& features);

struct ForwardBackward {
  double log_z = 0.0;
  std::vector<double> marginals;       // length x labels
  std::vector<double> pair_marginals;  // labels x labels, summed over positions
};

double log_partition(const Lattice& lattice);
ForwardBackward forward_backward(const Lattice& lattice);
double path_score(const Lattice& lattice, std::span<const std::uint32_t> path);

/// MAP path; ties go to the lower label index.
std::vector<std::uint32_t> viterbi(const Lattice& lattice);
std::vector<std::string> decode(const CrfModel& model, const std::vector<FeatureVector>& features);

/// Σ (log Z − gold score) + (c2/2)‖w‖²; fills `gradient` (resized to the
/// weight count) when non-null. Sentences are processed in parallel and
/// summed in sentence order, so the result does not depend on thread count.
double neg_log_likelihood(const CrfModel& model, std::span<const CompiledSentence> batch, double c2,
                          std::vector<double>* gradient);
/// Single-threaded reference for neg_log_likelihood().
double neg_log_likelihood_serial(const CrfModel& model, std::span<const CompiledSentence> batch, double c2,
                                 std::vector<double>* gradient);

struct TrainConfig {
  double c1 = 1.0;
  double c2 = 0.001;
  std::size_t max_iterations = 500;
  // Stop when the objective improved by less than this fraction over `period` iterations.
  double tolerance = 1e-5;
  std::size_t period = 10;
  std::size_t memory = 10;
  // Stop when ‖pseudo-gradient‖ / max(1, ‖w‖) falls below this.
  double epsilon = 1e-5;
  std::uint64_t seed = 42;
};

void validate(const TrainConfig& config);

struct TrainStats {
  std::size_t iterations = 0;
  double objective = 0.0;
  std::vector<double> history;
};

using IterationCallback = std::function<void(std::size_t iteration, double objective)>;

/// Penalized maximum likelihood with OWL-QN (ℓ1-aware L-BFGS).
CrfModel train(const std::vector<std::vector<FeatureVector>>& features,
               const std::vector<std::vector<std::string>>& labels, const TrainConfig& config,
               TrainStats* stats = nullptr, const IterationCallback& callback = {});

/// OWL-QN on a prepared model/batch; starts from the model's current weights.
TrainStats optimize(CrfModel& model, std::span<const CompiledSentence> batch, const TrainConfig& config,
                    const IterationCallback& callback = {});

std::string render_model(const CrfModel& model);
CrfModel read_model(const std::filesystem::path& path);
CrfModel parse_model(const std::string& text, const std::string& source = "<model>");

}  // namespace sparsetag
