// Parallel kernels vs their serial references. Thread count from OMP_NUM_THREADS.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "sparsetag/crf.hpp"
#include "sparsetag/parallel.hpp"
#include "sparsetag/sparse_coding.hpp"
#include "synthetic.hpp"

using namespace sparsetag;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  identical %s\n", name, serial, parallel,
              serial / parallel, equal ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("threads %d\n", max_threads());

  const auto table = testing::clustered_table(5000, 64, 40, 1);
  const auto d0 = testing::random_dictionary(64, 256, 2);
  const Dictionary dict(64, 256, d0.atoms(), Variant::sc1, 0.1, 0.0);
  SparseCodes ser;
  SparseCodes par;
  const double enc_s = best_of(3, [&] { ser = encode_serial(dict, table); });
  const double enc_p = best_of(3, [&] { par = encode(dict, table); });
  report("encode", enc_s, enc_p, ser.codes() == par.codes());

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(5, 30);
  std::uniform_int_distribution<int> feat(0, 2000);
  std::normal_distribution<double> g;
  CrfModel model({"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"});
  std::vector<CompiledSentence> batch;
  for (int s = 0; s < 2000; ++s) {
    std::vector<FeatureVector> fv;
    std::vector<std::string> gold;
    const int n = len(rng);
    for (int t = 0; t < n; ++t) {
      FeatureVector f;
      for (int k = 0; k < 20; ++k) f.push_back({"f" + std::to_string(feat(rng)), 1.0});
      std::sort(f.begin(), f.end(), [](const Feature& a, const Feature& b) { return a.name < b.name; });
      f.erase(std::unique(f.begin(), f.end(), [](const Feature& a, const Feature& b) { return a.name == b.name; }), f.end());
      fv.push_back(std::move(f));
      gold.push_back(model.labels()[static_cast<std::size_t>(s + t) % model.num_labels()]);
    }
    batch.push_back(model.compile(fv, &gold, true));
  }
  for (auto& w : model.weights()) w = 0.1 * g(rng);
  std::vector<double> gs;
  std::vector<double> gp;
  double os = 0.0;
  double op = 0.0;
  const double nll_s = best_of(5, [&] { os = neg_log_likelihood_serial(model, batch, 0.001, &gs); });
  const double nll_p = best_of(5, [&] { op = neg_log_likelihood(model, batch, 0.001, &gp); });
  report("crf objective+gradient", nll_s, nll_p, os == op && gs == gp);
  return 0;
}
