#include "sparsetag/sparse_coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sparsetag/parallel.hpp"
#include "sparsetag/text.hpp"

namespace sparsetag {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double soft_threshold(double z, double lambda, bool nonnegative) {
  if (z > lambda) return z - lambda;
  if (!nonnegative && z < -lambda) return z + lambda;
  return 0.0;
}

// Violation of the optimality condition at one coordinate, given the
// correlation g = d_jᵀ(x − Dα).
double coordinate_violation(double g, double alpha, double lambda, bool nonnegative) {
  if (alpha > 0.0) return std::abs(g - lambda);
  if (alpha < 0.0) return std::abs(g + lambda);
  return nonnegative ? std::max(0.0, g - lambda) : std::max(0.0, std::abs(g) - lambda);
}

// In-place Cholesky of the leading block of a symmetric n x n matrix
// (row-major, lower triangle used). Returns the first pivot that is
// numerically non-positive, or n on success.
std::size_t cholesky_factor(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double original = a[j * n + j];
    double diag = original;
    for (std::size_t p = 0; p < j; ++p) diag -= a[j * n + p] * a[j * n + p];
    if (!(diag > 1e-10 * std::max(1.0, original))) return j;
    diag = std::sqrt(diag);
    a[j * n + j] = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t p = 0; p < j; ++p) v -= a[i * n + p] * a[j * n + p];
      a[i * n + j] = v / diag;
    }
  }
  return n;
}

// Solves L Lᵀ y = b using the factor of the leading `size` block.
void cholesky_solve(const std::vector<double>& l, std::size_t n, std::size_t size, std::vector<double>& b) {
  for (std::size_t i = 0; i < size; ++i) {
    double v = b[i];
    for (std::size_t p = 0; p < i; ++p) v -= l[i * n + p] * b[p];
    b[i] = v / l[i * n + i];
  }
  for (std::size_t i = size; i-- > 0;) {
    double v = b[i];
    for (std::size_t p = i + 1; p < size; ++p) v -= l[p * n + i] * b[p];
    b[i] = v / l[i * n + i];
  }
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

Variant parse_variant(const std::string& name) {
  if (name == "sc1") return Variant::sc1;
  if (name == "sc3") return Variant::sc3;
  if (name == "sc4") return Variant::sc4;
  throw std::invalid_argument("unknown sparse coding variant: " + name);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::sc1: return "sc1";
    case Variant::sc3: return "sc3";
    case Variant::sc4: return "sc4";
  }
  return "?";
}

void validate(const SparseCodingConfig& c) {
  if (c.m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(c.tau >= 0.0) || !std::isfinite(c.tau)) throw std::invalid_argument("tau must be non-negative");
  if (c.epochs < 1) throw std::invalid_argument("epochs must be positive");
  if (c.batch_size < 1) throw std::invalid_argument("batch size must be positive");
  if (!(c.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

// ---- Dictionary -------------------------------------------------------------

Dictionary::Dictionary(std::size_t k, std::size_t m, std::vector<double> atoms, Variant variant, double lambda,
                       double tau)
    : k_(k), m_(m), atoms_(std::move(atoms)), variant_(variant), lambda_(lambda), tau_(variant == Variant::sc1 ? 0.0 : tau) {
  if (k_ == 0 || m_ == 0) throw std::invalid_argument("dictionary dimensions must be positive");
  if (atoms_.size() != k_ * m_) throw std::invalid_argument("dictionary size mismatch");
  for (double v : atoms_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite dictionary entry");
  }
  if (variant_ == Variant::sc1) {
    for (std::size_t j = 0; j < m_; ++j) {
      if (atom_norm(j) > 1.0 + 1e-9) throw std::invalid_argument("SC1 atom " + std::to_string(j) + " exceeds unit norm");
    }
  }
}

double Dictionary::atom_norm(std::size_t j) const { return norm2(atom(j)); }

// ---- sparse vectors -------------------------------------------------------------

SparseVector to_sparse(std::span<const double> dense) {
  SparseVector out;
  for (std::size_t j = 0; j < dense.size(); ++j) {
    if (std::abs(dense[j]) >= kCoefficientThreshold) out.push_back({static_cast<std::uint32_t>(j), dense[j]});
  }
  return out;
}

std::vector<double> to_dense(const SparseVector& v, std::size_t m) {
  std::vector<double> out(m, 0.0);
  for (const auto& e : v) out.at(e.index) = e.value;
  return out;
}

SparseCodes::SparseCodes(std::size_t m, std::vector<std::string> words, std::vector<SparseVector> codes)
    : m_(m), words_(std::move(words)), codes_(std::move(codes)) {
  if (words_.size() != codes_.size()) throw std::invalid_argument("codes/vocabulary size mismatch");
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) throw std::invalid_argument("duplicate word '" + words_[i] + "' in codes");
    for (std::size_t e = 0; e < codes_[i].size(); ++e) {
      const auto& entry = codes_[i][e];
      if (entry.index >= m_) throw std::invalid_argument("code index out of range for '" + words_[i] + "'");
      if (e > 0 && codes_[i][e - 1].index >= entry.index) throw std::invalid_argument("code indices not increasing for '" + words_[i] + "'");
      if (entry.value == 0.0 || !std::isfinite(entry.value)) throw std::invalid_argument("bad coefficient for '" + words_[i] + "'");
    }
  }
}

const SparseVector* SparseCodes::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end() && lowercase_fallback_) it = index_.find(ascii_lower(word));
  return it == index_.end() ? nullptr : &codes_[it->second];
}

// ---- lasso ------------------------------------------------------------------------

LassoConvergenceError::LassoConvergenceError(std::vector<double> last_iterate, double residual)
    : std::runtime_error("lasso did not converge (KKT residual " + format_sig(residual, 3) + ")"),
      last_iterate_(std::move(last_iterate)),
      residual_(residual) {}

LassoSolver::LassoSolver(const Dictionary& dictionary) : dict_(&dictionary) {
  const std::size_t m = dictionary.m();
  gram_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double g = dot(dictionary.atom(i), dictionary.atom(j));
      gram_[i * m + j] = g;
      gram_[j * m + i] = g;
    }
  }
}

std::vector<double> LassoSolver::solve(std::span<const double> x, const LassoOptions& opt,
                                       std::span<const double> warm_start) const {
  const Dictionary& d = *dict_;
  const std::size_t m = d.m();
  if (x.size() != d.k()) throw std::invalid_argument("signal dimension does not match dictionary");
  if (!(opt.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite signal");
  }

  std::vector<double> c(m);
  for (std::size_t j = 0; j < m; ++j) c[j] = dot(d.atom(j), x);

  std::vector<double> alpha(m, 0.0);
  if (!warm_start.empty()) {
    if (warm_start.size() != m) throw std::invalid_argument("warm start has wrong size");
    std::copy(warm_start.begin(), warm_start.end(), alpha.begin());
    if (opt.nonnegative) {
      for (auto& a : alpha) a = std::max(a, 0.0);
    }
  }

  // q = Gα, maintained incrementally.
  std::vector<double> q(m, 0.0);
  auto recompute_q = [&] {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t l = 0; l < m; ++l) {
      if (alpha[l] == 0.0) continue;
      const double* col = &gram_[l * m];
      for (std::size_t j = 0; j < m; ++j) q[j] += col[j] * alpha[l];
    }
  };
  recompute_q();

  auto max_violation = [&] {
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      worst = std::max(worst, coordinate_violation(c[j] - q[j], alpha[j], opt.lambda, opt.nonnegative));
    }
    return worst;
  };

  // Once the sign pattern is stable, the optimum on that pattern solves
  // G_SS a = c_S − λ s_S exactly. Accepted only if signs and KKT hold.
  // Moves α along `dir` (indexed by `support`) by t ∈ (0, limit], stopping
  // where the first coefficient reaches zero. Returns false if none does.
  auto step_to_zero = [&](const std::vector<std::size_t>& support, const std::vector<double>& dir, double limit) {
    double t = limit;
    std::size_t blocking = support.size();
    for (std::size_t a = 0; a < support.size(); ++a) {
      const double from = alpha[support[a]];
      if (dir[a] != 0.0 && sign_of(dir[a]) != sign_of(from)) {
        const double crossing = -from / dir[a];
        if (crossing < t) {
          t = crossing;
          blocking = a;
        }
      }
    }
    for (std::size_t a = 0; a < support.size(); ++a) {
      double& v = alpha[support[a]];
      v = a == blocking ? 0.0 : v + t * dir[a];
    }
    recompute_q();
    return blocking != support.size();
  };

  // One active-set step on the current support S with signs s:
  //  - if G_SS is singular, move along a null direction of D_S (residual
  //    unchanged) in the direction that does not increase ‖α‖₁, until a
  //    coefficient vanishes;
  //  - otherwise step toward the solution of G_SS a = c_S − λ s_S, stopping
  //    where a coefficient vanishes. The objective is a convex quadratic on
  //    that segment with its minimum at the full step, so it descends.
  // Returns true when the full restricted step was taken.
  auto polish_step = [&] {
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < m; ++j) {
      if (alpha[j] != 0.0) support.push_back(j);
    }
    const std::size_t n = support.size();
    if (n == 0) return true;
    std::vector<double> g(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) g[a * n + b] = gram_[support[a] * m + support[b]];
    }
    const std::size_t fail = cholesky_factor(g, n);
    if (fail < n) {
      std::vector<double> y(fail);
      for (std::size_t a = 0; a < fail; ++a) y[a] = gram_[support[a] * m + support[fail]];
      cholesky_solve(g, n, fail, y);
      std::vector<double> dir(n, 0.0);
      for (std::size_t a = 0; a < fail; ++a) dir[a] = -y[a];
      dir[fail] = 1.0;
      double rate = 0.0;
      for (std::size_t a = 0; a < n; ++a) rate += sign_of(alpha[support[a]]) * dir[a];
      if (rate > 0.0) {
        for (auto& v : dir) v = -v;
      }
      if (!step_to_zero(support, dir, std::numeric_limits<double>::infinity()) && rate == 0.0) {
        for (auto& v : dir) v = -v;
        step_to_zero(support, dir, std::numeric_limits<double>::infinity());
      }
      return false;
    }
    std::vector<double> target(n);
    for (std::size_t a = 0; a < n; ++a) target[a] = c[support[a]] - opt.lambda * sign_of(alpha[support[a]]);
    cholesky_solve(g, n, n, target);
    std::vector<double> dir(n);
    for (std::size_t a = 0; a < n; ++a) dir[a] = target[a] - alpha[support[a]];
    return !step_to_zero(support, dir, 1.0);
  };

  // Each blocked step removes one coefficient, so this terminates.
  auto polish = [&] {
    for (std::size_t i = 0; i <= m; ++i) {
      bool any = false;
      for (double a : alpha) any = any || a != 0.0;
      if (!any) return;
      const auto before = alpha;
      if (polish_step()) return;
      if (alpha == before) return;
    }
  };

  // Sign pattern after the previous sweep.
  std::vector<int> pattern(m, 0);
  const std::size_t max_sweeps = opt.max_sweeps ? opt.max_sweeps : 10 * m;
  double violation = max_violation();
  for (std::size_t sweep = 0; sweep < max_sweeps && violation >= opt.tolerance; ++sweep) {
    for (std::size_t j = 0; j < m; ++j) {
      const double gjj = gram_[j * m + j];
      double updated = 0.0;
      if (gjj > 0.0) {
        const double z = c[j] - q[j] + gjj * alpha[j];
        updated = soft_threshold(z, opt.lambda, opt.nonnegative) / gjj;
      }
      const double delta = updated - alpha[j];
      if (delta == 0.0) continue;
      alpha[j] = updated;
      const double* col = &gram_[j * m];
      for (std::size_t l = 0; l < m; ++l) q[l] += col[l] * delta;
    }
    violation = max_violation();
    if (violation < opt.tolerance) {
      // Guard against drift in the incremental q before accepting.
      recompute_q();
      violation = max_violation();
      continue;
    }
    bool stable = true;
    for (std::size_t j = 0; j < m; ++j) {
      const int sg = sign_of(alpha[j]);
      if (sg != pattern[j]) stable = false;
      pattern[j] = sg;
    }
    if (stable) {
      polish();
      violation = max_violation();
    }
  }
  if (violation >= opt.tolerance) throw LassoConvergenceError(alpha, violation);

  for (auto& a : alpha) {
    if (std::abs(a) < kCoefficientThreshold) a = 0.0;
  }
  return alpha;
}

std::vector<double> solve_lasso(const Dictionary& dictionary, std::span<const double> x, double lambda,
                                bool nonnegative, double tolerance) {
  LassoSolver solver(dictionary);
  return solver.solve(x, LassoOptions{lambda, nonnegative, tolerance, 0});
}

namespace {

std::vector<double> residual_of(const Dictionary& d, std::span<const double> x, std::span<const double> alpha) {
  std::vector<double> r(x.begin(), x.end());
  for (std::size_t j = 0; j < d.m(); ++j) {
    if (alpha[j] == 0.0) continue;
    const auto a = d.atom(j);
    for (std::size_t i = 0; i < d.k(); ++i) r[i] -= a[i] * alpha[j];
  }
  return r;
}

double residual_of_sparse(const Dictionary& d, std::span<const double> x, const SparseVector& code, double lambda) {
  std::vector<double> r(x.begin(), x.end());
  double l1 = 0.0;
  for (const auto& e : code) {
    const auto a = d.atom(e.index);
    for (std::size_t i = 0; i < d.k(); ++i) r[i] -= a[i] * e.value;
    l1 += std::abs(e.value);
  }
  return 0.5 * dot(r, r) + lambda * l1;
}

}  // namespace

double kkt_violation(const Dictionary& d, std::span<const double> x, std::span<const double> alpha, double lambda,
                     bool nonnegative) {
  const auto r = residual_of(d, x, alpha);
  double worst = 0.0;
  for (std::size_t j = 0; j < d.m(); ++j) {
    if (nonnegative && alpha[j] < 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, coordinate_violation(dot(d.atom(j), r), alpha[j], lambda, nonnegative));
  }
  return worst;
}

double lasso_objective(const Dictionary& d, std::span<const double> x, std::span<const double> alpha, double lambda) {
  const auto r = residual_of(d, x, alpha);
  double l1 = 0.0;
  for (double a : alpha) l1 += std::abs(a);
  return 0.5 * dot(r, r) + lambda * l1;
}

double dictionary_objective(const Dictionary& d, const EmbeddingTable& table, const SparseCodes& codes) {
  if (codes.size() != table.size()) throw std::invalid_argument("codes do not align with the embedding table");
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) total += residual_of_sparse(d, table.row(i), codes.code(i), d.lambda());
  double frob = 0.0;
  for (double v : d.atoms()) frob += v * v;
  return total / static_cast<double>(table.size()) + d.tau() * frob;
}

// ---- dictionary learning ------------------------------------------------------

namespace {

// Block coordinate descent over atoms on the sufficient statistics
//   A = Σ α αᵀ (m x m, row-major),  B = Σ x αᵀ (k x m, column j contiguous).
// Each atom update is the exact minimizer of the objective in that atom.
struct DictionaryState {
  std::size_t k;
  std::size_t m;
  std::size_t n;
  Variant variant;
  double tau;
  std::vector<double> atoms;  // column-major
  std::vector<double> a;      // m x m
  std::vector<double> b;      // m blocks of k
  std::vector<std::size_t> usage;

  std::span<double> atom(std::size_t j) { return {atoms.data() + j * k, k}; }

  void add_code(std::span<const double> x, const SparseVector& code, double sign) {
    for (const auto& e : code) {
      for (const auto& f : code) a[e.index * m + f.index] += sign * e.value * f.value;
      double* bj = &b[e.index * k];
      for (std::size_t i = 0; i < k; ++i) bj[i] += sign * x[i] * e.value;
      if (sign > 0) ++usage[e.index];
      else --usage[e.index];
    }
  }

  void update_atoms(const EmbeddingTable& table, std::mt19937_64& rng) {
    std::vector<double> da(k);
    for (std::size_t j = 0; j < m; ++j) {
      const double ajj = a[j * m + j];
      if (usage[j] == 0 || !(ajj > 0.0)) {
        // Unused atom: moving it leaves the loss unchanged.
        if (variant == Variant::sc1) reseed(j, table, rng);
        continue;
      }
      // da = D a_j
      std::fill(da.begin(), da.end(), 0.0);
      for (std::size_t l = 0; l < m; ++l) {
        const double w = a[l * m + j];
        if (w == 0.0) continue;
        const double* col = &atoms[l * k];
        for (std::size_t i = 0; i < k; ++i) da[i] += col[i] * w;
      }
      auto d = atom(j);
      const double* bj = &b[j * k];
      if (variant == Variant::sc1) {
        for (std::size_t i = 0; i < k; ++i) d[i] += (bj[i] - da[i]) / ajj;
        const double nrm = norm2(d);
        if (nrm > 1.0) {
          for (auto& v : d) v /= nrm;
        }
      } else {
        const double denom = ajj + 2.0 * static_cast<double>(n) * tau;
        for (std::size_t i = 0; i < k; ++i) d[i] = (bj[i] - da[i] + d[i] * ajj) / denom;
      }
    }
  }

  void reseed(std::size_t j, const EmbeddingTable& table, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, table.size() - 1);
    for (std::size_t attempt = 0; attempt < table.size(); ++attempt) {
      const auto x = table.row(pick(rng));
      const double nrm = norm2(x);
      if (nrm == 0.0) continue;
      auto d = atom(j);
      for (std::size_t i = 0; i < k; ++i) d[i] = x[i] / nrm;
      return;
    }
  }

  void rebuild(const EmbeddingTable& table, const std::vector<SparseVector>& codes) {
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    std::fill(usage.begin(), usage.end(), 0);
    for (std::size_t i = 0; i < codes.size(); ++i) add_code(table.row(i), codes[i], 1.0);
  }
};

}  // namespace

LearnResult learn_dictionary(const EmbeddingTable& table, const SparseCodingConfig& config, const EpochObserver& observer) {
  validate(config);
  const std::size_t n = table.size();
  const std::size_t k = table.dim();
  const std::size_t m = config.m;
  if (n == 0 || k == 0) throw std::invalid_argument("empty embedding table");
  if (std::all_of(table.values().begin(), table.values().end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("embedding table is all zeros");
  }

  std::mt19937_64 rng(config.seed);
  DictionaryState state{k, m, n, config.variant, config.variant == Variant::sc1 ? 0.0 : config.tau, std::vector<double>(k * m),
                        std::vector<double>(m * m, 0.0), std::vector<double>(m * k, 0.0), std::vector<std::size_t>(m, 0)};
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& v : state.atoms) v = gauss(rng);
  for (std::size_t j = 0; j < m; ++j) {
    auto d = state.atom(j);
    const double nrm = norm2(d);
    if (nrm == 0.0) state.reseed(j, table, rng);
    else if (config.variant == Variant::sc1) {
      for (auto& v : d) v /= nrm;
    }
  }

  const bool nonneg = config.variant == Variant::sc4;
  const LassoOptions lasso{config.lambda, nonneg, config.tolerance, 0};
  std::vector<SparseVector> codes(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  LearnResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    state.rebuild(table, codes);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const Dictionary current(k, m, state.atoms, config.variant, config.lambda, config.tau);
      const LassoSolver solver(current);
      std::vector<SparseVector> fresh(stop - start);
      parallel_for(stop - start, [&](std::size_t b) {
        const std::size_t i = order[start + b];
        const auto warm = to_dense(codes[i], m);
        fresh[b] = to_sparse(solver.solve(table.row(i), lasso, warm));
      });
      for (std::size_t b = 0; b < fresh.size(); ++b) {
        const std::size_t i = order[start + b];
        state.add_code(table.row(i), codes[i], -1.0);
        codes[i] = std::move(fresh[b]);
        state.add_code(table.row(i), codes[i], 1.0);
      }
      state.update_atoms(table, rng);
    }
    for (double v : state.atoms) {
      if (!std::isfinite(v)) throw std::runtime_error("non-finite dictionary entry in epoch " + std::to_string(epoch + 1));
    }
    const Dictionary snapshot(k, m, state.atoms, config.variant, config.lambda, config.tau);
    const double objective = dictionary_objective(snapshot, table, SparseCodes(m, table.vocab(), codes));
    if (!std::isfinite(objective)) throw std::runtime_error("non-finite objective in epoch " + std::to_string(epoch + 1));
    result.epoch_objective.push_back(objective);
    if (observer) observer(epoch + 1, snapshot, objective);
  }

  result.dictionary = Dictionary(k, m, state.atoms, config.variant, config.lambda, config.tau);
  result.codes = encode(result.dictionary, table, config.tolerance);
  return result;
}

SparseCodes encode(const Dictionary& dictionary, const EmbeddingTable& table, double tolerance) {
  if (dictionary.k() != table.dim()) throw std::invalid_argument("dictionary dimension does not match embeddings");
  const LassoSolver solver(dictionary);
  const LassoOptions opt{dictionary.lambda(), dictionary.nonnegative_codes(), tolerance, 0};
  std::vector<SparseVector> codes(table.size());
  parallel_for(table.size(), [&](std::size_t i) { codes[i] = to_sparse(solver.solve(table.row(i), opt)); });
  return SparseCodes(dictionary.m(), table.vocab(), std::move(codes));
}

SparseCodes encode_serial(const Dictionary& dictionary, const EmbeddingTable& table, double tolerance) {
  if (dictionary.k() != table.dim()) throw std::invalid_argument("dictionary dimension does not match embeddings");
  const LassoSolver solver(dictionary);
  const LassoOptions opt{dictionary.lambda(), dictionary.nonnegative_codes(), tolerance, 0};
  std::vector<SparseVector> codes(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) codes[i] = to_sparse(solver.solve(table.row(i), opt));
  return SparseCodes(dictionary.m(), table.vocab(), std::move(codes));
}

double sparsity_level(const SparseCodes& codes, std::size_t m) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (codes.size() == 0) return 1.0;
  std::size_t nnz = 0;
  for (const auto& c : codes.codes()) nnz += c.size();
  return 1.0 - static_cast<double>(nnz) / (static_cast<double>(m) * static_cast<double>(codes.size()));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson: size mismatch");
  if (a.empty()) return 0.0;
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

BasisReport basis_statistics(const Dictionary& dictionary, const SparseCodes& codes) {
  const std::size_t m = dictionary.m();
  if (m == 0) throw std::invalid_argument("dictionary has no atoms");
  if (codes.m() != m) throw std::invalid_argument("codes and dictionary disagree on m");
  BasisReport r;
  r.norms.resize(m);
  r.frequency.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) r.norms[j] = dictionary.atom_norm(j);
  for (const auto& c : codes.codes()) {
    for (const auto& e : c) r.frequency[e.index] += 1.0;
  }
  if (codes.size() > 0) {
    for (auto& f : r.frequency) f /= static_cast<double>(codes.size());
  }
  r.correlation = pearson(r.norms, r.frequency);
  return r;
}

// ---- file formats -----------------------------------------------------------------

std::string render_dictionary(const Dictionary& d) {
  std::string out = std::to_string(d.m()) + " " + std::to_string(d.k()) + " " + to_string(d.variant()) + " " +
                    format_exact(d.lambda()) + " " + format_exact(d.tau()) + "\n";
  for (std::size_t j = 0; j < d.m(); ++j) {
    const auto a = d.atom(j);
    for (std::size_t i = 0; i < d.k(); ++i) {
      if (i) out += ' ';
      out += format_exact(a[i]);
    }
    out += '\n';
  }
  return out;
}

Dictionary read_dictionary(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const std::string src = path.string();
  if (lines.empty()) throw ParseError(src, 1, "empty dictionary file");
  const auto head = split_whitespace(lines[0]);
  long m = 0;
  long k = 0;
  double lambda = 0.0;
  double tau = 0.0;
  if (head.size() != 5 || !parse_long(head[0], m) || !parse_long(head[1], k) || m < 1 || k < 1 ||
      !parse_double(head[3], lambda) || !parse_double(head[4], tau)) {
    throw ParseError(src, 1, "expected header 'm k variant lambda tau'");
  }
  Variant variant;
  try {
    variant = parse_variant(std::string(head[2]));
  } catch (const std::invalid_argument& e) {
    throw ParseError(src, 1, e.what());
  }
  std::vector<double> atoms;
  atoms.reserve(static_cast<std::size_t>(m * k));
  std::size_t rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_whitespace(lines[i]);
    if (f.empty()) continue;
    if (f.size() != static_cast<std::size_t>(k)) throw ParseError(src, i + 1, "expected " + std::to_string(k) + " values");
    for (auto v : f) {
      double x = 0.0;
      if (!parse_double(v, x) || !std::isfinite(x)) throw ParseError(src, i + 1, "bad numeric field '" + std::string(v) + "'");
      atoms.push_back(x);
    }
    ++rows;
  }
  if (rows != static_cast<std::size_t>(m)) throw ParseError(src, lines.size(), "expected " + std::to_string(m) + " atoms, found " + std::to_string(rows));
  return Dictionary(static_cast<std::size_t>(k), static_cast<std::size_t>(m), std::move(atoms), variant, lambda, tau);
}

std::string render_codes(const SparseCodes& codes) {
  std::string out;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    out += codes.words()[i];
    for (const auto& e : codes.code(i)) {
      out += ' ';
      out += std::to_string(e.index);
      out += ':';
      out += format_sig(e.value, 6);
    }
    out += '\n';
  }
  return out;
}

SparseCodes read_codes(const std::filesystem::path& path, std::size_t m) {
  const auto lines = read_lines(path);
  const std::string src = path.string();
  std::vector<std::string> words;
  std::vector<SparseVector> codes;
  std::size_t max_index = 0;
  bool any = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = split_whitespace(lines[i]);
    if (f.empty()) continue;
    SparseVector v;
    for (std::size_t j = 1; j < f.size(); ++j) {
      const auto colon = f[j].find(':');
      long idx = 0;
      double val = 0.0;
      if (colon == std::string_view::npos || !parse_long(f[j].substr(0, colon), idx) || idx < 0 ||
          !parse_double(f[j].substr(colon + 1), val) || !std::isfinite(val) || val == 0.0) {
        throw ParseError(src, i + 1, "bad entry '" + std::string(f[j]) + "'");
      }
      if (!v.empty() && v.back().index >= static_cast<std::uint32_t>(idx)) throw ParseError(src, i + 1, "indices must be strictly increasing");
      v.push_back({static_cast<std::uint32_t>(idx), val});
      max_index = std::max(max_index, static_cast<std::size_t>(idx));
      any = true;
    }
    words.emplace_back(f[0]);
    codes.push_back(std::move(v));
  }
  const std::size_t inferred = any ? max_index + 1 : 1;
  if (m == 0) m = inferred;
  if (any && max_index >= m) throw ParseError(src, 0, "code index " + std::to_string(max_index) + " out of range for m=" + std::to_string(m));
  try {
    return SparseCodes(m, std::move(words), std::move(codes));
  } catch (const std::invalid_argument& e) {
    throw ParseError(src, 0, e.what());
  }
}

}  // namespace sparsetag
