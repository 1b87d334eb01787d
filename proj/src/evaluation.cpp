#include "sparsetag/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

#include "sparsetag/text.hpp"

namespace sparsetag {

namespace {

void check_shape(const std::vector<std::size_t>& gold_lengths, const LabelSequences& pred) {
  if (gold_lengths.size() != pred.size()) throw std::invalid_argument("gold and predicted sentence counts differ");
  for (std::size_t s = 0; s < pred.size(); ++s) {
    if (gold_lengths[s] != pred[s].size()) {
      throw std::invalid_argument("sentence " + std::to_string(s) + ": gold and predicted lengths differ");
    }
  }
}

std::vector<std::size_t> lengths_of(const LabelSequences& seqs) {
  std::vector<std::size_t> out;
  for (const auto& s : seqs) out.push_back(s.size());
  return out;
}

double ratio(std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }

}  // namespace

double token_accuracy(const Dataset& gold, const LabelSequences& predicted) {
  const auto g = labels_of(gold);
  check_shape(lengths_of(g), predicted);
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    for (std::size_t t = 0; t < g[s].size(); ++t) {
      ++total;
      if (g[s][t] == predicted[s][t]) ++correct;
    }
  }
  return ratio(correct, total);
}

std::vector<Entity> extract_entities(const std::vector<std::string>& labels) {
  std::vector<Entity> out;
  bool open = false;
  char prev_tag = 'O';
  std::string prev_type;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    char tag = 'O';
    std::string type;
    if (l != "O") {
      if (l.size() < 3 || l[1] != '-' || std::string("BIES").find(l[0]) == std::string::npos) {
        throw std::invalid_argument("invalid span label '" + l + "'");
      }
      tag = l[0];
      type = l.substr(2);
    }
    if (tag == 'O') {
      open = false;
    } else {
      const bool continues = open && (tag == 'I' || tag == 'E') && (prev_tag == 'B' || prev_tag == 'I') && prev_type == type;
      if (continues) {
        out.back().end = i;
      } else {
        out.push_back({type, i, i});
        open = true;
      }
      if (tag == 'E' || tag == 'S') open = false;
    }
    prev_tag = tag;
    prev_type = type;
  }
  return out;
}

double PrfCounts::precision() const { return ratio(correct, predicted); }
double PrfCounts::recall() const { return ratio(correct, gold); }
double PrfCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

EvalReport entity_f1(const LabelSequences& gold, const LabelSequences& predicted) {
  check_shape(lengths_of(gold), predicted);
  EvalReport r;
  r.task = Task::ner;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto g = extract_entities(gold[s]);
    const auto p = extract_entities(predicted[s]);
    for (const auto& e : g) {
      ++r.overall.gold;
      ++r.per_type[e.type].gold;
    }
    for (const auto& e : p) {
      ++r.overall.predicted;
      ++r.per_type[e.type].predicted;
      if (std::find(g.begin(), g.end(), e) != g.end()) {
        ++r.overall.correct;
        ++r.per_type[e.type].correct;
      }
    }
  }
  return r;
}

EvalReport entity_f1(const Dataset& gold, const LabelSequences& predicted) { return entity_f1(labels_of(gold), predicted); }

EvalReport evaluate(const Dataset& gold, const LabelSequences& predicted) {
  if (gold.task == Task::ner) return entity_f1(gold, predicted);
  EvalReport r;
  r.task = Task::pos;
  const auto g = labels_of(gold);
  check_shape(lengths_of(g), predicted);
  for (std::size_t s = 0; s < g.size(); ++s) {
    for (std::size_t t = 0; t < g[s].size(); ++t) {
      ++r.tokens_total;
      if (g[s][t] == predicted[s][t]) ++r.tokens_correct;
    }
  }
  r.token_accuracy = ratio(r.tokens_correct, r.tokens_total);
  return r;
}

ReportRow build_report(const RunInfo& run, const EvalReport& report) {
  ReportRow row;
  row.treebank = sanitize_field(run.treebank.empty() ? "-" : run.treebank);
  row.task = to_string(report.task);
  row.scheme = sanitize_field(run.scheme.empty() ? "-" : run.scheme);
  row.lambda = run.lambda ? format_sig(*run.lambda, 6) : "-";
  row.m = run.m ? std::to_string(*run.m) : "-";
  row.sparsity = run.sparsity ? format_sig(*run.sparsity, 6) : "-";
  if (report.task == Task::pos) {
    row.metric = "accuracy";
    row.value = format_sig(report.token_accuracy, 6);
  } else {
    row.metric = "f1";
    row.value = format_sig(report.f1(), 6);
  }
  return row;
}

std::string render_row(const ReportRow& r) {
  return r.treebank + "\t" + r.task + "\t" + r.scheme + "\t" + r.lambda + "\t" + r.m + "\t" + r.sparsity + "\t" + r.metric +
         "\t" + r.value;
}

void upsert_report(const std::filesystem::path& path, const ReportRow& row) {
  std::vector<std::string> rows;
  bool replaced = false;
  if (std::filesystem::exists(path)) {
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i == 0 && lines[i] == kReportHeader) continue;
      if (trim(lines[i]).empty()) continue;
      const auto cols = split_on(lines[i], '\t');
      if (cols.size() != 8) throw ParseError(path.string(), i + 1, "report rows need 8 columns");
      if (cols[0] == row.treebank && cols[2] == row.scheme && cols[3] == row.lambda) {
        if (!replaced) rows.push_back(render_row(row));
        replaced = true;
        continue;
      }
      rows.push_back(lines[i]);
    }
  }
  if (!replaced) rows.push_back(render_row(row));
  std::string out = std::string(kReportHeader) + "\n";
  for (const auto& r : rows) out += r + "\n";
  write_atomic(path, out);
}

}  // namespace sparsetag
