#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsetag/corpus.hpp"

namespace sparsetag {

using LabelSequences = std::vector<std::vector<std::string>>;

double token_accuracy(const Dataset& gold, const LabelSequences& predicted);

struct Entity {
  std::string type;
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // inclusive
  friend auto operator<=>(const Entity&, const Entity&) = default;
};

/// Spans in a BIO or IOBES sequence. A span starts at B-/S-, or at an I-/E-
/// that does not continue an open span of the same type; it closes at E-/S-,
/// at O, or where the next token starts a new span.
std::vector<Entity> extract_entities(const std::vector<std::string>& labels);

struct PrfCounts {
  std::size_t correct = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  double precision() const;
  double recall() const;
  double f1() const;
};

struct EvalReport {
  Task task = Task::pos;
  // POS
  double token_accuracy = 0.0;
  std::size_t tokens_correct = 0;
  std::size_t tokens_total = 0;
  // NER
  PrfCounts overall;
  std::map<std::string, PrfCounts> per_type;

  double precision() const { return overall.precision(); }
  double recall() const { return overall.recall(); }
  double f1() const { return overall.f1(); }
};

/// Exact-match entity scoring (type and both boundaries).
EvalReport entity_f1(const Dataset& gold, const LabelSequences& predicted);
EvalReport entity_f1(const LabelSequences& gold, const LabelSequences& predicted);

EvalReport evaluate(const Dataset& gold, const LabelSequences& predicted);

struct RunInfo {
  std::string treebank;
  std::string scheme;
  std::optional<double> lambda;
  std::optional<std::size_t> m;
  std::optional<double> sparsity;
  std::optional<double> token_coverage;
};

struct ReportRow {
  std::string treebank;
  std::string task;
  std::string scheme;
  std::string lambda;
  std::string m;
  std::string sparsity;
  std::string metric;
  std::string value;
};

inline constexpr const char* kReportHeader = "treebank\ttask\tscheme\tlambda\tm\tsparsity\tmetric\tvalue";

ReportRow build_report(const RunInfo& run, const EvalReport& report);
std::string render_row(const ReportRow& row);

/// Inserts `row` into the TSV at `path`, replacing any row with the same
/// (treebank, scheme, lambda) key. Creates the file with a header if absent.
void upsert_report(const std::filesystem::path& path, const ReportRow& row);

}  // namespace sparsetag
