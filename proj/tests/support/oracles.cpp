#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace sparsetag::testing {

namespace {

Eigen::MatrixXd as_matrix(const Dictionary& d) {
  Eigen::MatrixXd D(d.k(), d.m());
  for (std::size_t j = 0; j < d.m(); ++j) {
    const auto a = d.atom(j);
    for (std::size_t i = 0; i < d.k(); ++i) D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i];
  }
  return D;
}

Eigen::VectorXd as_vector(std::span<const double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

}  // namespace

double reference_lasso_objective(const Dictionary& d, std::span<const double> x, std::span<const double> alpha,
                                 double lambda) {
  const Eigen::VectorXd a = as_vector(alpha);
  const Eigen::VectorXd r = as_vector(x) - as_matrix(d) * a;
  return 0.5 * r.squaredNorm() + lambda * a.lpNorm<1>();
}

BruteLasso brute_force_lasso(const Dictionary& d, std::span<const double> x, double lambda, bool nonnegative) {
  const Eigen::MatrixXd D = as_matrix(d);
  const Eigen::VectorXd xv = as_vector(x);
  const auto m = static_cast<int>(d.m());
  BruteLasso best;
  best.alpha.assign(d.m(), 0.0);
  best.objective = 0.5 * xv.squaredNorm();

  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> support;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) support.push_back(j);
    }
    const auto s = static_cast<int>(support.size());
    if (s > static_cast<int>(d.k())) continue;
    Eigen::MatrixXd Ds(D.rows(), s);
    for (int c = 0; c < s; ++c) Ds.col(c) = D.col(support[static_cast<std::size_t>(c)]);
    const Eigen::MatrixXd gram = Ds.transpose() * Ds;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (lu.rank() < s) continue;
    const Eigen::VectorXd corr = Ds.transpose() * xv;
    const std::uint32_t sign_patterns = nonnegative ? 1u : (1u << s);
    for (std::uint32_t signs = 0; signs < sign_patterns; ++signs) {
      Eigen::VectorXd sv(s);
      for (int c = 0; c < s; ++c) sv(c) = (signs & (1u << c)) ? -1.0 : 1.0;
      const Eigen::VectorXd a = lu.solve(corr - lambda * sv);
      bool consistent = true;
      for (int c = 0; c < s; ++c) {
        if (a(c) * sv(c) <= 0.0) consistent = false;
      }
      if (!consistent) continue;
      std::vector<double> full(d.m(), 0.0);
      for (int c = 0; c < s; ++c) full[static_cast<std::size_t>(support[static_cast<std::size_t>(c)])] = a(c);
      const double obj = reference_lasso_objective(d, x, full, lambda);
      if (obj < best.objective) {
        best.objective = obj;
        best.alpha = std::move(full);
      }
    }
  }
  return best;
}

BrutePaths brute_force_paths(const Lattice& lat) {
  const std::size_t T = lat.length;
  const std::size_t L = lat.labels;
  BrutePaths out;
  out.marginals.assign(T * L, 0.0);
  std::size_t total = 1;
  for (std::size_t t = 0; t < T; ++t) total *= L;

  std::vector<double> scores(total);
  std::vector<std::vector<std::uint32_t>> paths(total, std::vector<std::uint32_t>(T));
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < total; ++p) {
    // Path p in base L, most significant digit first, so lower labels come first.
    std::size_t rem = p;
    for (std::size_t t = T; t-- > 0;) {
      paths[p][t] = static_cast<std::uint32_t>(rem % L);
      rem /= L;
    }
    double s = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      s += lat.emission[t * L + paths[p][t]];
      if (t) s += lat.transition[paths[p][t - 1] * L + paths[p][t]];
    }
    scores[p] = s;
    if (s > best) {
      best = s;
      out.best = paths[p];
    }
  }
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - best);
  out.log_z = best + std::log(sum);
  out.best_score = best;
  for (std::size_t p = 0; p < total; ++p) {
    const double prob = std::exp(scores[p] - out.log_z);
    for (std::size_t t = 0; t < T; ++t) out.marginals[t * L + paths[p][t]] += prob;
  }
  return out;
}

std::vector<double> finite_difference(const std::function<double()>& f, std::span<double> w, double h) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double orig = w[i];
    w[i] = orig + h;
    const double up = f();
    w[i] = orig - h;
    const double down = f();
    w[i] = orig;
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

}  // namespace sparsetag::testing
