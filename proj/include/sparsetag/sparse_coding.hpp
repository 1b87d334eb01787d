#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sparsetag/embeddings.hpp"

namespace sparsetag {

// SC1: ½‖x − Dα‖² + λ‖α‖₁ with every atom in the unit ℓ2 ball.
// SC3: same loss, unconstrained D, plus τ‖D‖²_F.
// SC4: as SC3 with α ≥ 0.
enum class Variant { sc1, sc3, sc4 };

Variant parse_variant(const std::string& name);
std::string to_string(Variant v);

struct SparseCodingConfig {
  Variant variant = Variant::sc1;
  std::size_t m = 1024;
  double lambda = 0.1;
  double tau = 1e-5;
  std::size_t epochs = 10;
  std::size_t batch_size = 256;
  std::uint64_t seed = 42;
  // KKT violation at which a lasso solve is considered converged.
  double tolerance = 1e-7;
};

void validate(const SparseCodingConfig& config);

/// Coefficients below this magnitude are stored as exact zeros.
inline constexpr double kCoefficientThreshold = 1e-10;

/// k x m basis matrix, stored column-major (one atom after another).
class Dictionary {
public:
  Dictionary() = default;
  Dictionary(std::size_t k, std::size_t m, std::vector<double> atoms, Variant variant, double lambda, double tau);

  std::size_t k() const { return k_; }
  std::size_t m() const { return m_; }
  Variant variant() const { return variant_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }
  bool nonnegative_codes() const { return variant_ == Variant::sc4; }

  std::span<const double> atom(std::size_t j) const { return {atoms_.data() + j * k_, k_}; }
  const std::vector<double>& atoms() const { return atoms_; }
  double atom_norm(std::size_t j) const;

private:
  std::size_t k_ = 0;
  std::size_t m_ = 0;
  std::vector<double> atoms_;
  Variant variant_ = Variant::sc1;
  double lambda_ = 0.1;
  double tau_ = 0.0;
};

struct SparseEntry {
  std::uint32_t index;
  double value;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Nonzero coefficients in strictly increasing index order.
using SparseVector = std::vector<SparseEntry>;

SparseVector to_sparse(std::span<const double> dense);
std::vector<double> to_dense(const SparseVector& v, std::size_t m);

/// Per-word sparse codes aligned with a vocabulary.
class SparseCodes {
public:
  SparseCodes() = default;
  SparseCodes(std::size_t m, std::vector<std::string> words, std::vector<SparseVector> codes);

  std::size_t m() const { return m_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<SparseVector>& codes() const { return codes_; }
  const SparseVector& code(std::size_t i) const { return codes_[i]; }

  void set_lowercase_fallback(bool on) { lowercase_fallback_ = on; }
  const SparseVector* find(const std::string& word) const;

private:
  std::size_t m_ = 0;
  std::vector<std::string> words_;
  std::vector<SparseVector> codes_;
  std::unordered_map<std::string, std::size_t> index_;
  bool lowercase_fallback_ = false;
};

class LassoConvergenceError : public std::runtime_error {
public:
  LassoConvergenceError(std::vector<double> last_iterate, double residual);
  const std::vector<double>& last_iterate() const { return last_iterate_; }
  /// Largest KKT violation of the last iterate.
  double residual() const { return residual_; }

private:
  std::vector<double> last_iterate_;
  double residual_;
};

struct LassoOptions {
  double lambda = 0.1;
  bool nonnegative = false;
  double tolerance = 1e-7;
  // 0 means 10·m.
  std::size_t max_sweeps = 0;
};

/// Cyclic coordinate descent with covariance updates for
///   min_α ½‖x − Dα‖² + λ‖α‖₁   (α ≥ 0 when nonnegative).
/// The Gram matrix DᵀD is computed once per solver, so one solver serves many
/// signals. Coordinates are visited in ascending order. Iteration stops once
/// the largest KKT violation drops below the tolerance.
class LassoSolver {
public:
  explicit LassoSolver(const Dictionary& dictionary);

  std::vector<double> solve(std::span<const double> x, const LassoOptions& options,
                            std::span<const double> warm_start = {}) const;

  const Dictionary& dictionary() const { return *dict_; }

private:
  const Dictionary* dict_;
  std::vector<double> gram_;  // m x m, row-major
};

std::vector<double> solve_lasso(const Dictionary& dictionary, std::span<const double> x, double lambda,
                                bool nonnegative, double tolerance = 1e-7);

/// Largest violation of the lasso optimality conditions, computed from the
/// explicit residual x − Dα.
double kkt_violation(const Dictionary& dictionary, std::span<const double> x, std::span<const double> alpha,
                     double lambda, bool nonnegative);

double lasso_objective(const Dictionary& dictionary, std::span<const double> x, std::span<const double> alpha,
                       double lambda);

/// Mean over words of ½‖x − Dα‖² + λ‖α‖₁, plus τ‖D‖²_F for SC3/SC4.
double dictionary_objective(const Dictionary& dictionary, const EmbeddingTable& table, const SparseCodes& codes);

struct LearnResult {
  Dictionary dictionary;
  SparseCodes codes;
  // Objective after each epoch, evaluated on the dictionary and the codes
  // held at the end of that epoch.
  std::vector<double> epoch_objective;
};

using EpochObserver = std::function<void(std::size_t epoch, const Dictionary&, double objective)>;

LearnResult learn_dictionary(const EmbeddingTable& table, const SparseCodingConfig& config,
                             const EpochObserver& observer = {});

/// Encodes every word of `table` against `dictionary` (OpenMP over words).
SparseCodes encode(const Dictionary& dictionary, const EmbeddingTable& table, double tolerance = 1e-7);
/// Single-threaded reference for encode().
SparseCodes encode_serial(const Dictionary& dictionary, const EmbeddingTable& table, double tolerance = 1e-7);

/// Fraction of zero entries in the m x |V| code matrix.
double sparsity_level(const SparseCodes& codes, std::size_t m);

struct BasisReport {
  std::vector<double> norms;
  std::vector<double> frequency;
  double correlation = 0.0;
};

BasisReport basis_statistics(const Dictionary& dictionary, const SparseCodes& codes);

/// Pearson correlation; 0 when either input has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

std::string render_dictionary(const Dictionary& dictionary);
Dictionary read_dictionary(const std::filesystem::path& path);
std::string render_codes(const SparseCodes& codes);
/// `m` = 0 infers the basis count from the largest index.
SparseCodes read_codes(const std::filesystem::path& path, std::size_t m = 0);

}  // namespace sparsetag
