#include "doctest.h"

#include "sparsetag/evaluation.hpp"
#include "sparsetag/text.hpp"
#include "synthetic.hpp"

using namespace sparsetag;

namespace {

Dataset pos_dataset(const LabelSequences& labels) {
  Dataset d;
  for (const auto& s : labels) {
    Sentence sent;
    for (const auto& l : s) sent.push_back(Token{"w", l, {}});
    d.sentences.push_back(sent);
  }
  return d;
}

}  // namespace

TEST_CASE("token accuracy") {
  const LabelSequences gold{{"A", "B"}, {"C", "D"}};
  const auto d = pos_dataset(gold);
  CHECK(token_accuracy(d, gold) == 1.0);
  CHECK(token_accuracy(d, {{"A", "B"}, {"C", "X"}}) == 0.75);
  CHECK(token_accuracy(pos_dataset({{"C", "D"}, {"A", "B"}}), {{"C", "X"}, {"A", "B"}}) == 0.75);
  CHECK_THROWS(token_accuracy(d, {{"A"}, {"C", "D"}}));
  CHECK_THROWS(token_accuracy(d, {{"A", "B"}}));
}

TEST_CASE("entity extraction") {
  CHECK(extract_entities({"B-PER", "I-PER", "O", "B-LOC"}) ==
        std::vector<Entity>{{"PER", 0, 1}, {"LOC", 3, 3}});
  CHECK(extract_entities({"O", "I-PER", "I-PER"}) == std::vector<Entity>{{"PER", 1, 2}});
  CHECK(extract_entities({"B-PER", "I-LOC"}) == std::vector<Entity>{{"PER", 0, 0}, {"LOC", 1, 1}});
  CHECK(extract_entities({"S-PER", "B-PER", "E-PER", "E-PER"}) ==
        std::vector<Entity>{{"PER", 0, 0}, {"PER", 1, 2}, {"PER", 3, 3}});
  CHECK_THROWS(extract_entities({"X-PER"}));
}

TEST_CASE("entity f1 examples") {
  auto r = entity_f1(LabelSequences{{"B-PER", "I-PER"}}, LabelSequences{{"B-PER", "I-PER"}});
  CHECK(r.precision() == 1.0);
  CHECK(r.recall() == 1.0);
  CHECK(r.f1() == 1.0);

  r = entity_f1(LabelSequences{{"B-PER", "I-PER"}}, LabelSequences{{"B-PER", "O"}});
  CHECK(r.precision() == 0.0);
  CHECK(r.recall() == 0.0);
  CHECK(r.f1() == 0.0);

  r = entity_f1(LabelSequences{{"B-PER", "O", "O"}}, LabelSequences{{"B-PER", "O", "B-LOC"}});
  CHECK(r.precision() == 0.5);
  CHECK(r.recall() == 1.0);
  CHECK(r.f1() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.per_type["LOC"].predicted == 1);
  CHECK(r.per_type["LOC"].correct == 0);
}

TEST_CASE("entity f1 is scheme agnostic") {
  const LabelSequences bio{{"B-PER", "I-PER", "O", "B-LOC", "B-LOC", "I-LOC"}};
  const LabelSequences pred{{"B-PER", "O", "O", "B-LOC", "B-LOC", "I-LOC"}};
  const auto a = entity_f1(bio, pred);
  const auto b = entity_f1(LabelSequences{to_iobes(bio[0])}, LabelSequences{to_iobes(pred[0])});
  CHECK(a.overall.correct == b.overall.correct);
  CHECK(a.overall.predicted == b.overall.predicted);
  CHECK(a.overall.gold == b.overall.gold);
  std::size_t predicted = 0;
  for (const auto& [type, c] : a.per_type) predicted += c.predicted;
  CHECK(predicted == a.overall.predicted);
}

TEST_CASE("evaluate dispatches on task") {
  Dataset ner = pos_dataset({{"B-PER", "O"}});
  ner.task = Task::ner;
  const auto r = evaluate(ner, {{"B-PER", "O"}});
  CHECK(r.task == Task::ner);
  CHECK(r.f1() == 1.0);
  const auto p = evaluate(pos_dataset({{"A", "B", "C"}}), {{"A", "B", "X"}});
  CHECK(p.tokens_correct == 2);
  CHECK(p.tokens_total == 3);
}

TEST_CASE("report rows and upsert") {
  EvalReport pos;
  pos.token_accuracy = 0.9725;
  RunInfo run{"en", "sc", 0.1, 1024, 0.953, std::nullopt};
  const auto row = build_report(run, pos);
  CHECK(render_row(row) == "en\tpos\tsc\t0.1\t1024\t0.953\taccuracy\t0.9725");
  EvalReport ner;
  ner.task = Task::ner;
  ner.overall = {1, 2, 1};
  const auto nrow = build_report(RunInfo{"es", "dense", {}, {}, {}, {}}, ner);
  CHECK(nrow.metric == "f1");
  CHECK(nrow.lambda == "-");

  sparsetag::testing::TempDir dir;
  const auto path = dir.file("report.tsv");
  upsert_report(path, row);
  upsert_report(path, nrow);
  const auto two = sparsetag::testing::slurp(path);
  upsert_report(path, nrow);
  CHECK(sparsetag::testing::slurp(path) == two);
  auto changed = row;
  changed.value = "0.5";
  upsert_report(path, changed);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == kReportHeader);
  CHECK(lines[1] == render_row(changed));
  CHECK(lines[2] == render_row(nrow));
}
