#include "doctest.h"

#include <algorithm>
#include <set>

#include "sparsetag/features.hpp"
#include "synthetic.hpp"

using namespace sparsetag;

namespace {

std::set<std::string> names(const FeatureVector& v) {
  std::set<std::string> out;
  for (const auto& f : v) out.insert(f.name);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

SparseCodes toy_codes() {
  return SparseCodes(4, {"a", "b", "c"}, {{{0, 0.5}, {2, -0.3}}, {{1, 1.0}}, {{3, -2.0}}});
}

}  // namespace

TEST_CASE("signed index features") {
  CHECK(sparse_features(to_sparse(std::vector<double>{0.5, 0.0, -0.3})) == std::vector<std::string>{"+0", "-2"});
  CHECK(sparse_features({}).empty());
  const SparseVector nonneg{{1, 0.2}, {5, 3.0}};
  for (const auto& f : sparse_features(nonneg)) CHECK(f.front() == '+');
}

TEST_CASE("dense features keep zeros") {
  const auto f = dense_features(std::vector<double>{1.0, 0.0});
  REQUIRE(f.size() == 2);
  CHECK(f[0] == Feature{"d:0", 1.0});
  CHECK(f[1] == Feature{"d:1", 0.0});
  CHECK(dense_features(std::vector<double>(64, 0.25)).size() == 64);
}

TEST_CASE("brown prefixes truncate to the path") {
  const std::vector<int> lengths{4, 6, 10, 20};
  CHECK(brown_features("0110110101", lengths) ==
        std::vector<std::string>{"bp4=0110", "bp6=011011", "bp10=0110110101", "bp20=0110110101"});
  CHECK(brown_features("01", lengths) == std::vector<std::string>{"bp4=01", "bp6=01", "bp10=01", "bp20=01"});
  ClusterTable clusters(std::unordered_map<std::string, std::string>{{"dog", "0110"}});
  FeatureConfig cfg{Scheme::brown, 1, lengths};
  FeatureResources res;
  res.clusters = &clusters;
  CHECK(token_features({"cat"}, 0, cfg, res).empty());
}

TEST_CASE("cluster file parsing") {
  sparsetag::testing::TempDir dir;
  const auto ok = dir.write("c.txt", "0110\tdog\t5\n111\tcat\t2\n");
  const auto t = read_clusters(ok);
  REQUIRE(t.find("dog"));
  CHECK(*t.find("dog") == "0110");
  CHECK_THROWS(read_clusters(dir.write("bad.txt", "01a\tdog\t5\n")));
}

TEST_CASE("rich features for a short sentence") {
  const auto f = rich_features({"The", "dog"}, 0, true);
  for (const char* s : {"title=1", "suf1=e", "suf3=The", "pre1=T", "w[0]=The", "w[1]=dog", "w[0..1]=The|dog"}) {
    CHECK_MESSAGE(contains(f, s), s);
  }
  CHECK_FALSE(contains(f, "pre4=The"));
  CHECK(contains(rich_features({"42"}, 0, true), "num=1"));
  CHECK(contains(rich_features({","}, 0, true), "nonalnum=1"));
  CHECK_FALSE(contains(rich_features({"The", "dog"}, 0, false), "title=1"));
  CHECK_THROWS(rich_features({"a"}, 1, true));
}

TEST_CASE("pair templates clip at the sentence edges") {
  std::vector<std::string> words;
  for (int i = 0; i < 12; ++i) words.push_back("x" + std::to_string(i));
  const auto f = rich_features(words, 5, false);
  int right = 0;
  int left = 0;
  for (const auto& s : f) {
    if (s.rfind("w[0,-", 0) == 0) ++left;
    else if (s.rfind("w[0,", 0) == 0) ++right;
  }
  CHECK(right == 6);
  CHECK(left == 5);
}

TEST_CASE("character features use codepoints") {
  const auto f = rich_features({"\xc3\xa9t\xc3\xa9"}, 0, true);
  CHECK(contains(f, "pre1=\xc3\xa9"));
  CHECK(contains(f, "suf2=t\xc3\xa9"));
  CHECK(contains(f, "pre3=\xc3\xa9t\xc3\xa9"));
}

TEST_CASE("window features carry offsets and clip") {
  const auto codes = toy_codes();
  FeatureResources res;
  res.codes = &codes;
  FeatureConfig cfg;
  const std::vector<std::string> s{"a", "b", "c"};
  CHECK(names(token_features(s, 1, cfg, res)) == std::set<std::string>{"[-1]+0", "[-1]-2", "[0]+1", "[+1]-3"});
  CHECK(names(token_features(s, 0, cfg, res)) == std::set<std::string>{"[0]+0", "[0]-2", "[+1]+1"});
  CHECK(names(token_features(s, 2, cfg, res)) == std::set<std::string>{"[-1]+1", "[0]-3"});
  cfg.window = 2;
  CHECK(names(token_features(s, 0, cfg, res)).count("[+2]-3") == 1);
}

TEST_CASE("out-of-vocabulary tokens contribute nothing at their offset") {
  const auto codes = toy_codes();
  FeatureResources res;
  res.codes = &codes;
  const auto f = token_features({"zzz", "b"}, 0, FeatureConfig{}, res);
  CHECK(names(f) == std::set<std::string>{"[+1]+1"});
}

TEST_CASE("wi_sc is the disjoint union of wi and sc") {
  const auto codes = toy_codes();
  FeatureResources res;
  res.codes = &codes;
  const std::vector<std::string> s{"a", "b c", "c"};
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto sc = names(token_features(s, t, FeatureConfig{Scheme::sc}, res));
    const auto wi = names(token_features(s, t, FeatureConfig{Scheme::wi}, res));
    const auto both = names(token_features(s, t, FeatureConfig{Scheme::wi_sc}, res));
    std::set<std::string> u = sc;
    u.insert(wi.begin(), wi.end());
    CHECK(both == u);
    CHECK(u.size() == sc.size() + wi.size());
    for (const auto& n : both) CHECK(n.find_first_of(" \t\n") == std::string::npos);
  }
}

TEST_CASE("dense window features keep real values") {
  const EmbeddingTable table({"a", "b"}, 2, {1.5, -2.0, 0.0, 3.0});
  FeatureResources res;
  res.embeddings = &table;
  const auto f = token_features({"a", "b"}, 0, FeatureConfig{Scheme::dense}, res);
  REQUIRE(f.size() == 4);
  CHECK(std::is_sorted(f.begin(), f.end(), [](const Feature& x, const Feature& y) { return x.name < y.name; }));
  for (const auto& x : f) {
    if (x.name == "[0]d:1") CHECK(x.value == -2.0);
    if (x.name == "[+1]d:1") CHECK(x.value == 3.0);
  }
}

TEST_CASE("missing resources and bad config are errors") {
  FeatureResources none;
  CHECK_THROWS_AS(token_features({"a"}, 0, FeatureConfig{Scheme::sc}, none), std::invalid_argument);
  CHECK_THROWS_AS(token_features({"a"}, 0, FeatureConfig{Scheme::dense}, none), std::invalid_argument);
  CHECK_THROWS_AS(token_features({"a"}, 0, FeatureConfig{Scheme::brown}, none), std::invalid_argument);
  CHECK_NOTHROW(token_features({"a"}, 0, FeatureConfig{Scheme::wi}, none));
  FeatureConfig bad;
  bad.window = 3;
  CHECK_THROWS(validate(bad));
  CHECK(parse_scheme("wi_sc") == Scheme::wi_sc);
  CHECK_THROWS(parse_scheme("nope"));
}

TEST_CASE("dataset features match per-sentence extraction") {
  const auto codes = toy_codes();
  FeatureResources res;
  res.codes = &codes;
  Dataset d;
  for (int s = 0; s < 50; ++s) {
    Sentence sent;
    for (int t = 0; t < 1 + s % 5; ++t) sent.push_back(Token{std::string(1, static_cast<char>('a' + (s + t) % 4)), "X", {}});
    d.sentences.push_back(sent);
  }
  const auto all = dataset_features(d, FeatureConfig{}, res);
  REQUIRE(all.size() == 50);
  for (std::size_t s = 0; s < 50; ++s) CHECK(all[s] == sentence_features(forms_of(d.sentences[s]), FeatureConfig{}, res));
}
