#include "sparsetag/crf.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sparsetag/parallel.hpp"
#include "sparsetag/text.hpp"

namespace sparsetag {

// ---- model ------------------------------------------------------------------------

CrfModel::CrfModel(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("a CRF needs at least one label");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty() || sanitize_field(labels_[i]) != labels_[i]) {
      throw std::invalid_argument("label '" + labels_[i] + "' is empty or contains whitespace");
    }
    if (!label_index_.emplace(labels_[i], static_cast<std::uint32_t>(i)).second) {
      throw std::invalid_argument("duplicate label '" + labels_[i] + "'");
    }
  }
  weights_.assign(labels_.size() * labels_.size(), 0.0);
}

std::optional<std::uint32_t> CrfModel::label_id(const std::string& label) const {
  const auto it = label_index_.find(label);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> CrfModel::feature_id(const std::string& name) const {
  const auto it = feature_index_.find(name);
  if (it == feature_index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t CrfModel::intern_feature(const std::string& name) {
  if (const auto id = feature_id(name)) return *id;
  if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
    throw std::invalid_argument("feature name must be nonempty without whitespace: '" + name + "'");
  const auto id = static_cast<std::uint32_t>(feature_names_.size());
  weights_.insert(weights_.begin() + static_cast<std::ptrdiff_t>(transition_offset()), num_labels(), 0.0);
  feature_names_.push_back(name);
  feature_index_.emplace(name, id);
  return id;
}

CompiledSentence CrfModel::compile(const std::vector<FeatureVector>& features, const std::vector<std::string>* gold,
                                   bool grow) {
  CompiledSentence out;
  for (const auto& position : features) {
    for (const auto& f : position) {
      std::optional<std::uint32_t> id = grow ? std::optional(intern_feature(f.name)) : feature_id(f.name);
      if (!id) continue;
      out.ids.push_back(*id);
      out.values.push_back(f.value);
    }
    out.offsets.push_back(out.ids.size());
  }
  if (gold) {
    if (gold->size() != features.size()) throw std::invalid_argument("label sequence length does not match features");
    for (const auto& l : *gold) {
      const auto id = label_id(l);
      if (!id) throw std::invalid_argument("unknown gold label '" + l + "'");
      out.labels.push_back(*id);
    }
  }
  return out;
}

CompiledSentence CrfModel::compile(const std::vector<FeatureVector>& features) const {
  CompiledSentence out;
  for (const auto& position : features) {
    for (const auto& f : position) {
      if (const auto id = feature_id(f.name)) {
        out.ids.push_back(*id);
        out.values.push_back(f.value);
      }
    }
    out.offsets.push_back(out.ids.size());
  }
  return out;
}

// ---- inference --------------------------------------------------------------------

Lattice score_lattice(const CrfModel& model, const CompiledSentence& s) {
  const std::size_t L = model.num_labels();
  Lattice lat;
  lat.length = s.length();
  lat.labels = L;
  lat.emission.assign(lat.length * L, 0.0);
  const auto w = model.weights();
  for (std::size_t t = 0; t < lat.length; ++t) {
    double* row = &lat.emission[t * L];
    for (std::size_t k = s.offsets[t]; k < s.offsets[t + 1]; ++k) {
      const double v = s.values[k];
      const double* fw = &w[static_cast<std::size_t>(s.ids[k]) * L];
      for (std::size_t y = 0; y < L; ++y) row[y] += fw[y] * v;
    }
  }
  lat.transition.assign(w.begin() + static_cast<std::ptrdiff_t>(model.transition_offset()), w.end());
  return lat;
}

Lattice score_lattice(const CrfModel& model, const std::vector<FeatureVector>& features) {
  return score_lattice(model, model.compile(features));
}

namespace {

// Scaled forward-backward in the exponential domain. Emissions are shifted by
// their per-position maximum and transitions by their global maximum; the
// shifts are added back into log Z.
struct ScaledPass {
  std::vector<double> alpha;  // normalized forward, length x L
  std::vector<double> beta;   // scaled backward, length x L
  std::vector<double> scale;  // c_t
  std::vector<double> expo;   // exp(emission - max_t)
  std::vector<double> trans;  // exp(transition - max)
  double log_z = 0.0;
};

ScaledPass run_forward(const Lattice& lat, bool backward) {
  const std::size_t T = lat.length;
  const std::size_t L = lat.labels;
  ScaledPass p;
  if (T == 0) return p;
  p.alpha.assign(T * L, 0.0);
  p.scale.assign(T, 0.0);
  p.expo.assign(T * L, 0.0);
  p.trans.assign(L * L, 0.0);

  double tmax = -std::numeric_limits<double>::infinity();
  for (double v : lat.transition) tmax = std::max(tmax, v);
  for (std::size_t i = 0; i < L * L; ++i) p.trans[i] = std::exp(lat.transition[i] - tmax);

  double log_z = T > 1 ? static_cast<double>(T - 1) * tmax : 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < L; ++y) emax = std::max(emax, lat.at(t, y));
    for (std::size_t y = 0; y < L; ++y) p.expo[t * L + y] = std::exp(lat.at(t, y) - emax);
    log_z += emax;
  }

  for (std::size_t t = 0; t < T; ++t) {
    double* cur = &p.alpha[t * L];
    if (t == 0) {
      for (std::size_t y = 0; y < L; ++y) cur[y] = p.expo[y];
    } else {
      const double* prev = &p.alpha[(t - 1) * L];
      for (std::size_t i = 0; i < L; ++i) {
        const double a = prev[i];
        if (a == 0.0) continue;
        const double* tr = &p.trans[i * L];
        for (std::size_t y = 0; y < L; ++y) cur[y] += a * tr[y];
      }
      for (std::size_t y = 0; y < L; ++y) cur[y] *= p.expo[t * L + y];
    }
    double c = 0.0;
    for (std::size_t y = 0; y < L; ++y) c += cur[y];
    p.scale[t] = c;
    for (std::size_t y = 0; y < L; ++y) cur[y] /= c;
    log_z += std::log(c);
  }
  p.log_z = log_z;

  if (backward) {
    p.beta.assign(T * L, 0.0);
    std::fill(p.beta.begin() + static_cast<std::ptrdiff_t>((T - 1) * L), p.beta.end(), 1.0);
    std::vector<double> tmp(L);
    for (std::size_t t = T - 1; t-- > 0;) {
      const double* next = &p.beta[(t + 1) * L];
      for (std::size_t j = 0; j < L; ++j) tmp[j] = p.expo[(t + 1) * L + j] * next[j];
      double* cur = &p.beta[t * L];
      for (std::size_t i = 0; i < L; ++i) {
        const double* tr = &p.trans[i * L];
        double s = 0.0;
        for (std::size_t j = 0; j < L; ++j) s += tr[j] * tmp[j];
        cur[i] = s / p.scale[t + 1];
      }
    }
  }
  return p;
}

}  // namespace

double log_partition(const Lattice& lattice) {
  if (lattice.length == 0) return 0.0;
  return run_forward(lattice, false).log_z;
}

ForwardBackward forward_backward(const Lattice& lat) {
  const std::size_t T = lat.length;
  const std::size_t L = lat.labels;
  ForwardBackward fb;
  fb.pair_marginals.assign(L * L, 0.0);
  if (T == 0) return fb;
  const auto p = run_forward(lat, true);
  fb.log_z = p.log_z;
  fb.marginals.resize(T * L);
  for (std::size_t i = 0; i < T * L; ++i) fb.marginals[i] = p.alpha[i] * p.beta[i];
  for (std::size_t t = 1; t < T; ++t) {
    const double* prev = &p.alpha[(t - 1) * L];
    const double inv = 1.0 / p.scale[t];
    for (std::size_t i = 0; i < L; ++i) {
      if (prev[i] == 0.0) continue;
      const double* tr = &p.trans[i * L];
      for (std::size_t j = 0; j < L; ++j) {
        fb.pair_marginals[i * L + j] += prev[i] * tr[j] * p.expo[t * L + j] * p.beta[t * L + j] * inv;
      }
    }
  }
  return fb;
}

double path_score(const Lattice& lat, std::span<const std::uint32_t> path) {
  if (path.size() != lat.length) throw std::invalid_argument("path length does not match lattice");
  double s = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    s += lat.at(t, path[t]);
    if (t > 0) s += lat.transition[path[t - 1] * lat.labels + path[t]];
  }
  return s;
}

std::vector<std::uint32_t> viterbi(const Lattice& lat) {
  const std::size_t T = lat.length;
  const std::size_t L = lat.labels;
  if (T == 0) return {};
  std::vector<double> score(L);
  std::vector<double> next(L);
  std::vector<std::uint32_t> back(T * L, 0);
  for (std::size_t y = 0; y < L; ++y) score[y] = lat.at(0, y);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      double best = -std::numeric_limits<double>::infinity();
      std::uint32_t arg = 0;
      for (std::size_t i = 0; i < L; ++i) {
        const double s = score[i] + lat.transition[i * L + y];
        if (s > best) {
          best = s;
          arg = static_cast<std::uint32_t>(i);
        }
      }
      next[y] = best + lat.at(t, y);
      back[t * L + y] = arg;
    }
    score.swap(next);
  }
  std::uint32_t last = 0;
  for (std::size_t y = 1; y < L; ++y) {
    if (score[y] > score[last]) last = static_cast<std::uint32_t>(y);
  }
  std::vector<std::uint32_t> path(T);
  path[T - 1] = last;
  for (std::size_t t = T - 1; t > 0; --t) path[t - 1] = back[t * L + path[t]];
  return path;
}

std::vector<std::string> decode(const CrfModel& model, const std::vector<FeatureVector>& features) {
  const auto path = viterbi(score_lattice(model, features));
  std::vector<std::string> out;
  out.reserve(path.size());
  for (auto y : path) out.push_back(model.labels()[y]);
  return out;
}

// ---- objective --------------------------------------------------------------------

namespace {

struct SentenceStats {
  double log_z = 0.0;
  double gold = 0.0;
  std::vector<double> marginals;
  std::vector<double> pair_marginals;
};

SentenceStats sentence_stats(const CrfModel& model, const CompiledSentence& s, bool want_gradient) {
  if (s.labels.size() != s.length()) throw std::invalid_argument("training sentence is missing gold labels");
  const auto lat = score_lattice(model, s);
  SentenceStats st;
  st.gold = path_score(lat, s.labels);
  if (want_gradient) {
    auto fb = forward_backward(lat);
    st.log_z = fb.log_z;
    st.marginals = std::move(fb.marginals);
    st.pair_marginals = std::move(fb.pair_marginals);
  } else {
    st.log_z = log_partition(lat);
  }
  return st;
}

// Adds one sentence's contribution. Called in sentence order by both the
// parallel and the serial kernel, which keeps them bit-identical.
void accumulate(const CrfModel& model, const CompiledSentence& s, const SentenceStats& st, double& objective,
                std::vector<double>* gradient) {
  objective += st.log_z - st.gold;
  if (!gradient) return;
  const std::size_t L = model.num_labels();
  auto& g = *gradient;
  for (std::size_t t = 0; t < s.length(); ++t) {
    const double* marg = &st.marginals[t * L];
    const std::uint32_t gold = s.labels[t];
    for (std::size_t k = s.offsets[t]; k < s.offsets[t + 1]; ++k) {
      const double v = s.values[k];
      double* fg = &g[static_cast<std::size_t>(s.ids[k]) * L];
      for (std::size_t y = 0; y < L; ++y) fg[y] += marg[y] * v;
      fg[gold] -= v;
    }
  }
  double* tg = &g[model.transition_offset()];
  for (std::size_t i = 0; i < L * L; ++i) tg[i] += st.pair_marginals[i];
  for (std::size_t t = 1; t < s.length(); ++t) tg[s.labels[t - 1] * L + s.labels[t]] -= 1.0;
}

double add_l2(const CrfModel& model, double c2, double objective, std::vector<double>* gradient) {
  const auto w = model.weights();
  double sq = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sq += w[i] * w[i];
    if (gradient) (*gradient)[i] += c2 * w[i];
  }
  return objective + 0.5 * c2 * sq;
}

}  // namespace

double neg_log_likelihood(const CrfModel& model, std::span<const CompiledSentence> batch, double c2,
                          std::vector<double>* gradient) {
  if (gradient) gradient->assign(model.weights().size(), 0.0);
  std::vector<SentenceStats> stats(batch.size());
  parallel_for(batch.size(), [&](std::size_t i) { stats[i] = sentence_stats(model, batch[i], gradient != nullptr); });
  double objective = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) accumulate(model, batch[i], stats[i], objective, gradient);
  return add_l2(model, c2, objective, gradient);
}

double neg_log_likelihood_serial(const CrfModel& model, std::span<const CompiledSentence> batch, double c2,
                                 std::vector<double>* gradient) {
  if (gradient) gradient->assign(model.weights().size(), 0.0);
  double objective = 0.0;
  for (const auto& s : batch) accumulate(model, s, sentence_stats(model, s, gradient != nullptr), objective, gradient);
  return add_l2(model, c2, objective, gradient);
}

// ---- training ---------------------------------------------------------------------

void validate(const TrainConfig& c) {
  if (!(c.c1 >= 0.0) || !(c.c2 >= 0.0)) throw std::invalid_argument("regularization coefficients must be non-negative");
  if (c.memory < 1) throw std::invalid_argument("L-BFGS memory must be positive");
  if (c.period < 1) throw std::invalid_argument("convergence period must be positive");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

// Minimum-norm subgradient of f + c1‖x‖₁.
void pseudo_gradient(std::span<const double> x, std::span<const double> g, double c1, std::vector<double>& pg) {
  pg.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) pg[i] = g[i] + c1;
    else if (x[i] < 0.0) pg[i] = g[i] - c1;
    else if (g[i] + c1 < 0.0) pg[i] = g[i] + c1;
    else if (g[i] - c1 > 0.0) pg[i] = g[i] - c1;
    else pg[i] = 0.0;
  }
}

}  // namespace

TrainStats optimize(CrfModel& model, std::span<const CompiledSentence> batch, const TrainConfig& config,
                    const IterationCallback& callback) {
  validate(config);
  const double c1 = config.c1;
  const std::size_t n = model.weights().size();
  auto x = model.weights();

  std::vector<double> g;
  double f = neg_log_likelihood(model, batch, config.c2, &g);
  double F = f + c1 * l1(x);
  if (!std::isfinite(F)) throw std::runtime_error("non-finite objective at iteration 0");

  TrainStats stats;
  stats.history.push_back(F);
  std::vector<double> pg;
  pseudo_gradient(x, g, c1, pg);

  std::deque<std::vector<double>> s_hist;
  std::deque<std::vector<double>> y_hist;
  std::deque<double> rho_hist;
  std::vector<double> d(n);
  std::vector<double> x_old(n);
  std::vector<double> g_new;
  std::vector<double> orthant(n);
  std::vector<double> alpha_buf;

  auto converged_gradient = [&] {
    const double xnorm = std::max(1.0, std::sqrt(dot(x, x)));
    return std::sqrt(dot(pg, pg)) / xnorm < config.epsilon;
  };

  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    if (converged_gradient()) break;

    // Two-loop recursion on the pseudo-gradient.
    for (std::size_t i = 0; i < n; ++i) d[i] = -pg[i];
    const std::size_t h = s_hist.size();
    alpha_buf.assign(h, 0.0);
    for (std::size_t k = h; k-- > 0;) {
      alpha_buf[k] = rho_hist[k] * dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha_buf[k] * y_hist[k][i];
    }
    if (h > 0) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (auto& v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < h; ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alpha_buf[k] - beta) * s_hist[k][i];
    }
    // Keep only components that descend along the pseudo-gradient.
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] * pg[i] >= 0.0) d[i] = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) orthant[i] = x[i] != 0.0 ? (x[i] > 0.0 ? 1.0 : -1.0) : (pg[i] < 0.0 ? 1.0 : (pg[i] > 0.0 ? -1.0 : 0.0));

    std::copy(x.begin(), x.end(), x_old.begin());
    double step = h == 0 ? 1.0 / std::max(std::sqrt(dot(d, d)), 1e-300) : 1.0;
    double F_new = F;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double v = x_old[i] + step * d[i];
        if (v * orthant[i] <= 0.0) v = 0.0;
        x[i] = v;
        decrease += pg[i] * (v - x_old[i]);
      }
      f_new = neg_log_likelihood(model, batch, config.c2, &g_new);
      F_new = f_new + c1 * l1(x);
      if (!std::isfinite(F_new)) throw std::runtime_error("non-finite objective at iteration " + std::to_string(iter));
      if (F_new <= F + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No further decrease available along this direction.
      std::copy(x_old.begin(), x_old.end(), x.begin());
      break;
    }

    std::vector<double> s(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x[i] - x_old[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 0.0) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > config.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    f = f_new;
    F = F_new;
    g.swap(g_new);
    pseudo_gradient(x, g, c1, pg);
    stats.iterations = iter;
    stats.history.push_back(F);
    if (callback) callback(iter, F);

    if (stats.history.size() > config.period) {
      const double past = stats.history[stats.history.size() - 1 - config.period];
      if ((past - F) / std::max(std::abs(F), 1e-300) < config.tolerance) break;
    }
  }
  stats.objective = F;
  return stats;
}

CrfModel train(const std::vector<std::vector<FeatureVector>>& features,
               const std::vector<std::vector<std::string>>& labels, const TrainConfig& config, TrainStats* stats,
               const IterationCallback& callback) {
  validate(config);
  if (features.empty()) throw std::invalid_argument("empty training set");
  if (features.size() != labels.size()) throw std::invalid_argument("features and labels disagree on sentence count");
  std::set<std::string> label_set;
  for (const auto& s : labels) label_set.insert(s.begin(), s.end());
  CrfModel model(std::vector<std::string>(label_set.begin(), label_set.end()));
  model.c1 = config.c1;
  model.c2 = config.c2;
  std::vector<CompiledSentence> batch;
  batch.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].empty()) continue;
    batch.push_back(model.compile(features[i], &labels[i], true));
  }
  auto st = optimize(model, batch, config, callback);
  if (stats) *stats = std::move(st);
  return model;
}

// ---- serialization ----------------------------------------------------------------

std::string render_model(const CrfModel& model) {
  std::string out = "sparsetag-crf 1\n[meta]\n";
  out += "c1 " + format_exact(model.c1) + "\n";
  out += "c2 " + format_exact(model.c2) + "\n";
  out += "labels";
  for (const auto& l : model.labels()) out += " " + l;
  out += "\n";
  for (const auto& [k, v] : model.meta) out += k + " " + v + "\n";
  out += "[transitions]\n";
  const auto L = static_cast<std::uint32_t>(model.num_labels());
  for (std::uint32_t i = 0; i < L; ++i) {
    for (std::uint32_t j = 0; j < L; ++j) {
      out += model.labels()[i] + " " + model.labels()[j] + " " + format_exact(model.transition(i, j)) + "\n";
    }
  }
  out += "[emissions]\n";
  for (std::uint32_t f = 0; f < model.num_features(); ++f) {
    for (std::uint32_t y = 0; y < L; ++y) {
      const double w = model.emission(f, y);
      if (w == 0.0) continue;
      out += model.feature_names()[f] + " " + model.labels()[y] + " " + format_exact(w) + "\n";
    }
  }
  return out;
}

CrfModel parse_model(const std::string& text, const std::string& source) {
  std::vector<std::string> lines;
  for (auto line : split_on(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
  }
  if (lines.empty() || trim(lines[0]) != "sparsetag-crf 1") throw ParseError(source, 1, "not a sparsetag CRF model (version 1)");
  std::string section;
  CrfModel model;
  bool have_labels = false;
  double c1 = 0.0;
  double c2 = 0.0;
  std::map<std::string, std::string> meta;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (line == "[meta]" || line == "[transitions]" || line == "[emissions]") {
      section = std::string(line);
      if (section == "[transitions]" && !have_labels) throw ParseError(source, i + 1, "[meta] must declare labels first");
      continue;
    }
    const auto f = split_whitespace(line);
    auto num = [&](std::string_view s) {
      double v = 0.0;
      if (!parse_double(s, v) || !std::isfinite(v)) throw ParseError(source, i + 1, "bad weight '" + std::string(s) + "'");
      return v;
    };
    if (section == "[meta]") {
      if (f[0] == "labels") {
        std::vector<std::string> labels(f.begin() + 1, f.end());
        try {
          model = CrfModel(std::move(labels));
        } catch (const std::invalid_argument& e) {
          throw ParseError(source, i + 1, e.what());
        }
        have_labels = true;
      } else if (f[0] == "c1" && f.size() == 2) {
        c1 = num(f[1]);
      } else if (f[0] == "c2" && f.size() == 2) {
        c2 = num(f[1]);
      } else if (f.size() == 2) {
        meta[std::string(f[0])] = std::string(f[1]);
      } else {
        throw ParseError(source, i + 1, "bad meta line");
      }
    } else if (section == "[transitions]") {
      if (f.size() != 3) throw ParseError(source, i + 1, "expected 'from to weight'");
      const auto a = model.label_id(std::string(f[0]));
      const auto b = model.label_id(std::string(f[1]));
      if (!a || !b) throw ParseError(source, i + 1, "unknown label in transition");
      model.transition(*a, *b) = num(f[2]);
    } else if (section == "[emissions]") {
      if (!have_labels) throw ParseError(source, i + 1, "[meta] must declare labels first");
      if (f.size() != 3) throw ParseError(source, i + 1, "expected 'feature label weight'");
      const auto y = model.label_id(std::string(f[1]));
      if (!y) throw ParseError(source, i + 1, "unknown label '" + std::string(f[1]) + "'");
      const auto id = model.intern_feature(std::string(f[0]));
      model.emission(id, *y) = num(f[2]);
    } else if (section.empty()) {
      throw ParseError(source, i + 1, "content outside a section");
    } else {
      throw ParseError(source, i + 1, "unknown section " + section);
    }
  }
  if (!have_labels) throw ParseError(source, lines.size(), "model declares no labels");
  model.c1 = c1;
  model.c2 = c2;
  model.meta = std::move(meta);
  return model;
}

CrfModel read_model(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::string text;
  for (const auto& l : lines) {
    text += l;
    text += '\n';
  }
  return parse_model(text, path.string());
}

}  // namespace sparsetag
