#include "doctest.h"

#include <cmath>
#include <random>

#include "sparsetag/embeddings.hpp"
#include "sparsetag/text.hpp"
#include "synthetic.hpp"

using namespace sparsetag;
using sparsetag::testing::TempDir;

namespace {

Dataset dataset_of(const std::vector<std::vector<std::string>>& forms) {
  Dataset d;
  for (const auto& s : forms) {
    Sentence sent;
    for (const auto& f : s) sent.push_back(Token{f, "X", {}});
    d.sentences.push_back(sent);
  }
  return d;
}

}  // namespace

TEST_CASE("load minimal table") {
  TempDir dir;
  const auto p = dir.write("e.vec", "a 1.0 0.0\nb 0.0 1.0\n");
  const auto t = load_embeddings(p);
  CHECK(t.size() == 2);
  CHECK(t.dim() == 2);
  const auto a = t.lookup("a");
  REQUIRE(a);
  CHECK((*a)[0] == 1.0);
  CHECK((*a)[1] == 0.0);
}

TEST_CASE("inconsistent dimensionality reports line 2") {
  TempDir dir;
  const auto p = dir.write("e.vec", "a 1.0\nb 0.0 1.0\n");
  try {
    load_embeddings(p);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("non-numeric field and duplicates are rejected") {
  TempDir dir;
  CHECK_THROWS_AS(load_embeddings(dir.write("x.vec", "a 1.0 zz\n")), ParseError);
  try {
    load_embeddings(dir.write("d.vec", "a 1 2\nb 3 4\na 5 6\n"));
    FAIL("expected duplicate error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
}

TEST_CASE("header is detected and required for word2vec text") {
  TempDir dir;
  const auto with = dir.write("h.vec", "2 3\na 1 2 3\nb 4 5 6\n");
  CHECK(load_embeddings(with).size() == 2);
  CHECK(load_embeddings(with, EmbeddingFormat::word2vec_text).dim() == 3);
  const auto without = dir.write("n.vec", "a 1 2 3\n");
  CHECK_THROWS(load_embeddings(without, EmbeddingFormat::word2vec_text));
}

TEST_CASE("k=64 table round-trips to 6 decimals") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<std::string> vocab;
  std::vector<double> values;
  for (int w = 0; w < 5; ++w) {
    vocab.push_back("word" + std::to_string(w));
    for (int i = 0; i < 64; ++i) values.push_back(g(rng));
  }
  const EmbeddingTable original(vocab, 64, values);
  TempDir dir;
  const auto p = dir.write("rt.vec", dump_embeddings(original));
  const auto loaded = load_embeddings(p);
  REQUIRE(loaded.size() == 5);
  REQUIRE(loaded.dim() == 64);
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(std::abs(loaded.values()[i] - values[i]) < 5e-7);
  CHECK(loaded.vocab() == vocab);
}

TEST_CASE("lookup, unknown row and lowercase fallback") {
  EmbeddingTable t({"a", "b", "<unk>"}, 2, {1, 0, 0, 1, 9, 9});
  CHECK_FALSE(t.lookup("zzz"));
  CHECK_FALSE(t.lookup("A"));
  t.set_unknown("<unk>");
  const auto u = t.lookup("zzz");
  REQUIRE(u);
  CHECK((*u)[0] == 9.0);
  CHECK_FALSE(t.find("zzz"));
  t.set_lowercase_fallback(true);
  REQUIRE(t.find("A"));
  CHECK(*t.find("A") == 0);
}

TEST_CASE("table validation") {
  CHECK_THROWS(EmbeddingTable({"a", "a"}, 1, {1, 2}));
  CHECK_THROWS(EmbeddingTable({"a"}, 1, {std::nan("")}));
  CHECK_THROWS(EmbeddingTable({"a"}, 2, {1}));
}

TEST_CASE("coverage examples") {
  const EmbeddingTable t({"a", "b"}, 1, {1, 2});
  auto r = coverage(t, dataset_of({{"a", "b", "zzz"}}));
  CHECK(r.token_coverage == doctest::Approx(2.0 / 3.0));
  CHECK(r.type_coverage == doctest::Approx(2.0 / 3.0));
  r = coverage(t, dataset_of({{"a", "a", "a"}}));
  CHECK(r.token_coverage == 1.0);
  CHECK(r.type_coverage == 1.0);
  CHECK_THROWS(coverage(t, Dataset{}));
}

TEST_CASE("coverage of the 70 percent fixture is exact") {
  const auto f = sparsetag::testing::coverage_fixture();
  const auto r = coverage(f.table, f.data);
  CHECK(r.tokens_total == 100);
  CHECK(r.tokens_covered == 70);
  CHECK(r.token_coverage == 0.70);
  CHECK(r.type_coverage == 0.70);
}

TEST_CASE("coverage is invariant under sentence permutation and ignores the unknown row") {
  EmbeddingTable t({"a", "<unk>"}, 1, {1, 0});
  auto d1 = dataset_of({{"a", "x"}, {"y", "a", "a"}});
  auto d2 = dataset_of({{"y", "a", "a"}, {"a", "x"}});
  const auto before = coverage(t, d1);
  t.set_unknown("<unk>");
  const auto after = coverage(t, d2);
  CHECK(before.token_coverage == after.token_coverage);
  CHECK(before.type_coverage == after.type_coverage);
  CHECK(before.tokens_covered == 3);
}
