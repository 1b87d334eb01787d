#include "doctest.h"

#include <map>
#include <random>

#include "sparsetag/corpus.hpp"
#include "sparsetag/text.hpp"
#include "synthetic.hpp"

using namespace sparsetag;
using sparsetag::testing::TempDir;

TEST_CASE("conllx two-token sentence and trailing blanks") {
  TempDir dir;
  const auto p = dir.write("a.conll",
                           "1\tThe\tthe\tDT\tDT\t_\t2\tNMOD\t_\t_\n"
                           "2\tdog\tdog\tNN\tNN\t_\t0\tROOT\t_\t_\n\n\n\n");
  const auto d = read_conllx(p);
  REQUIRE(d.sentences.size() == 1);
  REQUIRE(d.sentences[0].size() == 2);
  CHECK(d.sentences[0][0].form == "The");
  CHECK(d.sentences[0][1].label == "NN");
}

TEST_CASE("conllx coarse column, ragged rows and round-trip") {
  TempDir dir;
  const auto p = dir.write("b.conll", "1\tA\t_\tN\tNNP\t_\n2\tb\t_\tV\tVBZ\t_\n\n1\tc\t_\tD\tDT\t_\n");
  const auto coarse = read_conllx(p, ConllxOptions{true});
  CHECK(coarse.sentences[0][0].label == "N");
  const auto fine = read_conllx(p);
  CHECK(fine.sentences[1][0].label == "DT");

  const auto again = read_conllx(dir.write("c.conll", render_dataset(fine)));
  REQUIRE(again.sentences.size() == fine.sentences.size());
  for (std::size_t s = 0; s < fine.sentences.size(); ++s) {
    for (std::size_t t = 0; t < fine.sentences[s].size(); ++t) {
      CHECK(again.sentences[s][t].form == fine.sentences[s][t].form);
      CHECK(again.sentences[s][t].label == fine.sentences[s][t].label);
    }
  }

  try {
    read_conllx(dir.write("r.conll", "1\ta\t_\tN\tN\t_\n2\tb\t_\tN\tN\n"));
    FAIL("expected ragged row error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("conllu skips comments, ranges and empty nodes") {
  TempDir dir;
  const std::string row_tail = "\t_\t_\t_\t_\t_\t_";
  const auto p = dir.write("u.conllu",
                           "# sent_id = 1\n"
                           "1\tI\tI\tPRON" + row_tail + "\n"
                           "2\twant\twant\tVERB" + row_tail + "\n"
                           "3-4\tdon't\t_\t_" + row_tail + "\n"
                           "3\tdo\tdo\tAUX" + row_tail + "\n"
                           "4\tn't\tnot\tPART" + row_tail + "\n"
                           "4.1\tx\tx\tX" + row_tail + "\n\n"
                           "# text = Go\n1\tGo\tgo\tVERB" + row_tail + "\n\n"
                           "1\tOK\tok\tINTJ" + row_tail + "\n");
  const auto d = read_conllu(p);
  REQUIRE(d.sentences.size() == 3);
  REQUIRE(d.sentences[0].size() == 4);
  CHECK(d.sentences[0][2].form == "do");
  CHECK(d.sentences[0][3].label == "PART");
  CHECK(d.sentences[1][0].label == "VERB");
  CHECK(d.sentences[2][0].label == "INTJ");
  CHECK_THROWS_AS(read_conllu(dir.write("bad.conllu", "x\tI\tI\tPRON" + row_tail + "\n")), ParseError);
}

TEST_CASE("conll ner reading normalizes IOB1 and drops document lines") {
  TempDir dir;
  const auto p = dir.write("n.txt",
                           "-DOCSTART- -X- O O\n\n"
                           "EU NNP I-NP I-ORG\nrejects VBZ I-VP O\nGerman JJ I-NP I-MISC\n"
                           "Peter NNP I-NP I-PER\nBlackburn NNP I-NP I-PER\n\n");
  const auto d = read_conll_ner(p, CorpusFormat::ner2003);
  REQUIRE(d.sentences.size() == 1);
  CHECK(labels_of(d)[0] == std::vector<std::string>{"B-ORG", "O", "B-MISC", "B-PER", "I-PER"});
  const auto back = read_conll_ner(dir.write("n2.txt", render_dataset(d)), CorpusFormat::ner2003);
  CHECK(labels_of(back) == labels_of(d));
  CHECK_THROWS_AS(read_conll_ner(dir.write("bad.txt", "x X-PER\n"), CorpusFormat::ner2002), ParseError);
}

TEST_CASE("universal mapping") {
  TempDir dir;
  const auto p = dir.write("b.conll", "1\tthe\t_\tDT\tDT\t_\n2\tdog\t_\tNN\tNN\t_\n3\tdogs\t_\tNNS\tNNS\t_\n");
  const auto d = read_conllx(p);
  const auto map = read_tagmap(dir.write("m.map", "# comment\nDT\tDET\nNN\tNOUN\nNNS\tNOUN\n"));
  const auto u = map_universal(d, map);
  std::map<std::string, int> histogram;
  for (const auto& t : u.sentences[0]) ++histogram[t.label];
  CHECK(histogram == std::map<std::string, int>{{"DET", 1}, {"NOUN", 2}});

  TagMap identity{{{"DT", "DT"}, {"NN", "NN"}, {"NNS", "NNS"}}};
  CHECK(labels_of(map_universal(d, identity)) == labels_of(d));

  TagMap partial{{{"DT", "DET"}}};
  try {
    map_universal(d, partial);
    FAIL("expected unmapped tag error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("'NN'") != std::string::npos);
  }
  CHECK_THROWS_AS(read_tagmap(dir.write("x.map", "DT\tDETERMINER\n")), ParseError);
}

TEST_CASE("iobes conversion") {
  CHECK(to_iobes(std::vector<std::string>{"B-PER", "I-PER", "O"}) == std::vector<std::string>{"B-PER", "E-PER", "O"});
  CHECK(to_iobes(std::vector<std::string>{"B-LOC"}) == std::vector<std::string>{"S-LOC"});
  CHECK(to_iobes(std::vector<std::string>{"B-PER", "I-PER", "I-PER", "B-PER"}) ==
        std::vector<std::string>{"B-PER", "I-PER", "E-PER", "S-PER"});
  std::size_t repaired = 0;
  CHECK(to_iobes(std::vector<std::string>{"O", "I-ORG", "I-ORG", "I-LOC"}, &repaired) ==
        std::vector<std::string>{"O", "B-ORG", "E-ORG", "S-LOC"});
  CHECK(repaired == 2);
  CHECK_THROWS(to_iobes(std::vector<std::string>{"E-PER"}));
  CHECK_THROWS(from_iobes(std::vector<std::string>{"X-PER"}));
}

TEST_CASE("iobes round-trips random well-formed BIO") {
  std::mt19937_64 rng(1);
  const std::vector<std::string> types{"PER", "LOC", "ORG", "MISC"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> bio;
    std::uniform_int_distribution<int> len(1, 20);
    std::uniform_int_distribution<int> action(0, 2);
    std::uniform_int_distribution<std::size_t> type(0, 3);
    const int n = len(rng);
    std::string open;
    for (int i = 0; i < n; ++i) {
      const int a = action(rng);
      if (a == 0 || (a == 2 && open.empty())) {
        bio.push_back("O");
        open.clear();
      } else if (a == 1) {
        open = types[type(rng)];
        bio.push_back("B-" + open);
      } else {
        bio.push_back("I-" + open);
      }
    }
    std::size_t repaired = 0;
    CHECK(from_iobes(to_iobes(bio, &repaired)) == bio);
    CHECK(repaired == 0);
  }
}

TEST_CASE("dataset-level iobes counts repairs") {
  Dataset d;
  d.task = Task::ner;
  d.sentences = {{Token{"a", "I-PER", {}}, Token{"b", "O", {}}}};
  const auto r = to_iobes(d);
  CHECK(r.repaired == 1);
  CHECK(r.data.sentences[0][0].label == "S-PER");
  CHECK(from_iobes(r.data).sentences[0][0].label == "B-PER");
}

TEST_CASE("subset keeps a prefix") {
  Dataset d;
  for (int i = 0; i < 5190; ++i) d.sentences.push_back({Token{"w" + std::to_string(i), "X", {}}});
  const auto s150 = subset_first_n(d, 150);
  CHECK(s150.sentences.size() == 150);
  CHECK(s150.sentences[0][0].form == "w0");
  const auto s1500 = subset_first_n(d, 1500);
  for (std::size_t i = 0; i < 150; ++i) CHECK(s1500.sentences[i][0].form == s150.sentences[i][0].form);
  CHECK(subset_first_n(d, 100000).sentences.size() == 5190);
  CHECK_THROWS(subset_first_n(d, 0));
}
