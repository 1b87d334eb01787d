#include "sparsetag/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "sparsetag/corpus.hpp"
#include "sparsetag/crf.hpp"
#include "sparsetag/embeddings.hpp"
#include "sparsetag/evaluation.hpp"
#include "sparsetag/features.hpp"
#include "sparsetag/parallel.hpp"
#include "sparsetag/sparse_coding.hpp"
#include "sparsetag/text.hpp"

namespace sparsetag {

namespace {

// Bad flag combinations and model/resource mismatches: exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LearnDictArgs {
  std::string embeddings;
  std::string embedding_format = "text";
  std::size_t m = 1024;
  double lambda = 0.1;
  std::string variant = "sc1";
  double tau = 1e-5;
  std::size_t epochs = 10;
  std::size_t batch_size = 256;
  std::uint64_t seed = 42;
  double tolerance = 1e-7;
  std::string out_dict;
  std::string out_codes;
};

struct EncodeArgs {
  std::string embeddings;
  std::string embedding_format = "text";
  std::string dict;
  std::string out_codes;
};

// Resources shared by train and tag.
struct ResourceArgs {
  std::string codes;
  std::string embeddings;
  std::string embedding_format = "text";
  std::string clusters;
  std::string unknown_word;
  bool lowercase = false;
};

struct TrainArgs {
  std::string task = "pos";
  std::string scheme = "sc";
  std::string train;
  std::string format = "conllx";
  ResourceArgs res;
  std::string tagmap;
  bool iobes = false;
  bool cpostag = false;
  std::size_t first_n = 0;
  int window = 1;
  std::vector<int> brown_lengths = {4, 6, 10, 20};
  double c1 = 1.0;
  double c2 = 0.001;
  std::size_t max_iterations = 500;
  double tolerance = 1e-5;
  std::uint64_t seed = 42;
  std::string out;
};

struct TagArgs {
  std::string model;
  std::string input;
  std::string format = "conllx";
  bool cpostag = false;
  ResourceArgs res;
  std::string out;
};

struct EvalArgs {
  std::string gold;
  std::string pred;
  std::string format = "conllx";
  std::string tagmap;
  bool cpostag = false;
  std::string report;
  std::string treebank;
  std::string scheme;
  std::optional<double> lambda;
  std::optional<std::size_t> m;
  std::optional<double> sparsity;
};

struct CoverageArgs {
  std::string embeddings;
  std::string embedding_format = "text";
  std::vector<std::string> data;
  std::string format = "conllx";
  bool lowercase = false;
};

struct BasisArgs {
  std::string dict;
  std::string codes;
  std::string out;
};

void add_resource_flags(CLI::App* cmd, ResourceArgs& r) {
  cmd->add_option("--codes", r.codes, "Sparse codes file (schemes sc, wi_sc)")->check(CLI::ExistingFile);
  cmd->add_option("--embeddings", r.embeddings, "Embedding file (scheme dense)")->check(CLI::ExistingFile);
  cmd->add_option("--embedding-format", r.embedding_format)->check(CLI::IsMember({"text", "word2vec-text"}));
  cmd->add_option("--clusters", r.clusters, "Brown cluster paths (scheme brown)")->check(CLI::ExistingFile);
  cmd->add_option("--unknown-word", r.unknown_word, "Vocabulary entry used for out-of-vocabulary words (dense)");
  cmd->add_flag("--lowercase", r.lowercase, "Retry lookups with the lowercased form");
}

const CLI::IsMember kFormats({"conllx", "conllu", "ner2002", "ner2003"});
const CLI::IsMember kSchemes({"sc", "dense", "brown", "fr_w", "fr_wc", "wi", "wi_sc"});

bool is_ner_format(CorpusFormat f) { return f == CorpusFormat::ner2002 || f == CorpusFormat::ner2003; }

struct LoadedResources {
  std::optional<SparseCodes> codes;
  std::optional<EmbeddingTable> embeddings;
  std::optional<ClusterTable> clusters;

  FeatureResources view() const {
    return {codes ? &*codes : nullptr, embeddings ? &*embeddings : nullptr, clusters ? &*clusters : nullptr};
  }
};

LoadedResources load_resources(Scheme scheme, const ResourceArgs& r) {
  LoadedResources out;
  switch (scheme) {
    case Scheme::sc:
    case Scheme::wi_sc:
      if (r.codes.empty()) throw UsageError("scheme '" + to_string(scheme) + "' requires --codes");
      out.codes = read_codes(r.codes);
      out.codes->set_lowercase_fallback(r.lowercase);
      break;
    case Scheme::dense:
      if (r.embeddings.empty()) throw UsageError("scheme 'dense' requires --embeddings");
      out.embeddings = load_embeddings(r.embeddings, parse_embedding_format(r.embedding_format));
      out.embeddings->set_lowercase_fallback(r.lowercase);
      if (!r.unknown_word.empty()) out.embeddings->set_unknown(r.unknown_word);
      break;
    case Scheme::brown:
      if (r.clusters.empty()) throw UsageError("scheme 'brown' requires --clusters");
      out.clusters = read_clusters(r.clusters);
      out.clusters->set_lowercase_fallback(r.lowercase);
      break;
    case Scheme::fr_w:
    case Scheme::fr_wc:
    case Scheme::wi: break;
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  for (auto part : split_on(s, ',')) {
    long v = 0;
    if (!parse_long(part, v)) throw UsageError("bad integer list in model meta: " + s);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Dataset load_labeled(const std::string& path, CorpusFormat format, bool cpostag) {
  return read_dataset(path, format, ConllxOptions{cpostag});
}

LabelSequences decode_all(const CrfModel& model, const std::vector<std::vector<FeatureVector>>& features) {
  LabelSequences out(features.size());
  parallel_for(features.size(), [&](std::size_t s) { out[s] = decode(model, features[s]); });
  return out;
}

// ---- subcommands ------------------------------------------------------------------

int cmd_learn_dict(const LearnDictArgs& a, std::ostream& out) {
  SparseCodingConfig cfg;
  cfg.variant = parse_variant(a.variant);
  cfg.m = a.m;
  cfg.lambda = a.lambda;
  cfg.tau = a.tau;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch_size;
  cfg.seed = a.seed;
  cfg.tolerance = a.tolerance;
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto table = load_embeddings(a.embeddings, parse_embedding_format(a.embedding_format));
  const auto result = learn_dictionary(table, cfg, [&](std::size_t epoch, const Dictionary&, double objective) {
    out << "epoch " << epoch << "\tobjective " << format_sig(objective, 10) << "\n";
  });

  std::vector<double> violations(table.size());
  parallel_for(table.size(), [&](std::size_t i) {
    const auto dense = to_dense(result.codes.code(i), cfg.m);
    violations[i] = kkt_violation(result.dictionary, table.row(i), dense, cfg.lambda, cfg.variant == Variant::sc4);
  });
  const double worst = violations.empty() ? 0.0 : *std::max_element(violations.begin(), violations.end());

  write_atomic(a.out_dict, render_dictionary(result.dictionary));
  write_atomic(a.out_codes, render_codes(result.codes));
  out << "words\t" << table.size() << "\n";
  out << "sparsity\t" << format_sig(sparsity_level(result.codes, cfg.m), 6) << "\n";
  out << "max_kkt_violation\t" << format_sig(worst, 3) << "\n";
  return 0;
}

int cmd_encode(const EncodeArgs& a, std::ostream& out) {
  const auto table = load_embeddings(a.embeddings, parse_embedding_format(a.embedding_format));
  const auto dict = read_dictionary(a.dict);
  if (dict.k() != table.dim()) {
    throw UsageError("dictionary has k=" + std::to_string(dict.k()) + " but embeddings have k=" + std::to_string(table.dim()));
  }
  const auto codes = encode(dict, table);
  write_atomic(a.out_codes, render_codes(codes));
  out << "words\t" << codes.size() << "\n";
  out << "sparsity\t" << format_sig(sparsity_level(codes, dict.m()), 6) << "\n";
  return 0;
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const Task task = parse_task(a.task);
  const CorpusFormat format = parse_corpus_format(a.format);
  if ((task == Task::ner) != is_ner_format(format)) throw UsageError("--task " + a.task + " does not match --format " + a.format);
  if (a.iobes && task != Task::ner) throw UsageError("--iobes applies to NER only");
  if (!a.tagmap.empty() && task != Task::pos) throw UsageError("--tagmap applies to POS only");

  FeatureConfig fc;
  fc.scheme = parse_scheme(a.scheme);
  fc.window = a.window;
  fc.brown_prefix_lengths = a.brown_lengths;
  try {
    validate(fc);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto res = load_resources(fc.scheme, a.res);

  Dataset data = load_labeled(a.train, format, a.cpostag);
  if (!a.tagmap.empty()) data = map_universal(data, read_tagmap(a.tagmap));
  if (a.iobes) {
    auto conv = to_iobes(data);
    if (conv.repaired) err << "repaired " << conv.repaired << " ill-formed BIO tags\n";
    data = std::move(conv.data);
  }
  if (a.first_n > 0) data = subset_first_n(data, a.first_n);
  if (data.sentences.empty()) throw std::runtime_error("training file has no sentences");

  const auto features = dataset_features(data, fc, res.view());
  TrainConfig tc;
  tc.c1 = a.c1;
  tc.c2 = a.c2;
  tc.max_iterations = a.max_iterations;
  tc.tolerance = a.tolerance;
  tc.seed = a.seed;
  TrainStats stats;
  CrfModel model = train(features, labels_of(data), tc, &stats);

  model.meta["task"] = to_string(task);
  model.meta["scheme"] = to_string(fc.scheme);
  model.meta["window"] = std::to_string(fc.window);
  model.meta["iobes"] = a.iobes ? "1" : "0";
  model.meta["lowercase"] = a.res.lowercase ? "1" : "0";
  if (fc.scheme == Scheme::brown) model.meta["brown_lengths"] = join_ints(fc.brown_prefix_lengths);
  if (res.codes) model.meta["codes_m"] = std::to_string(res.codes->m());
  if (res.embeddings) model.meta["embedding_dim"] = std::to_string(res.embeddings->dim());
  if (!a.res.unknown_word.empty()) model.meta["unknown_word"] = sanitize_field(a.res.unknown_word);
  write_atomic(a.out, render_model(model));

  out << "sentences\t" << data.sentences.size() << "\n";
  out << "tokens\t" << data.token_count() << "\n";
  out << "labels\t" << model.num_labels() << "\n";
  out << "features\t" << model.num_features() << "\n";
  out << "iterations\t" << stats.iterations << "\n";
  out << "objective\t" << format_sig(stats.objective, 10) << "\n";
  return 0;
}

std::string meta_or(const CrfModel& model, const std::string& key, const std::string& fallback) {
  const auto it = model.meta.find(key);
  return it == model.meta.end() ? fallback : it->second;
}

int cmd_tag(TagArgs a, std::ostream& out) {
  const auto model = read_model(a.model);
  FeatureConfig fc;
  try {
    fc.scheme = parse_scheme(meta_or(model, "scheme", ""));
    fc.window = std::stoi(meta_or(model, "window", "1"));
  } catch (const std::exception&) {
    throw UsageError("model meta does not record a valid feature scheme/window");
  }
  if (model.meta.count("brown_lengths")) fc.brown_prefix_lengths = split_ints(model.meta.at("brown_lengths"));
  const Task task = parse_task(meta_or(model, "task", "pos"));
  const CorpusFormat format = parse_corpus_format(a.format);
  if ((task == Task::ner) != is_ner_format(format)) throw UsageError("model task '" + to_string(task) + "' does not match --format " + a.format);

  a.res.lowercase = a.res.lowercase || meta_or(model, "lowercase", "0") == "1";
  if (a.res.unknown_word.empty() && model.meta.count("unknown_word")) a.res.unknown_word = model.meta.at("unknown_word");
  const auto res = load_resources(fc.scheme, a.res);
  if (res.codes && model.meta.count("codes_m") && model.meta.at("codes_m") != std::to_string(res.codes->m())) {
    // Codes files carry no header, so m is inferred from the largest index;
    // only a larger index than the model saw is a definite mismatch.
    if (res.codes->m() > std::stoul(model.meta.at("codes_m"))) {
      throw UsageError("codes use basis indices beyond the model's m=" + model.meta.at("codes_m"));
    }
  }
  if (res.embeddings && model.meta.count("embedding_dim") && model.meta.at("embedding_dim") != std::to_string(res.embeddings->dim())) {
    throw UsageError("model was trained on " + model.meta.at("embedding_dim") + "-dimensional embeddings, got " +
                     std::to_string(res.embeddings->dim()));
  }

  const Dataset data = load_labeled(a.input, format, a.cpostag);
  const auto features = dataset_features(data, fc, res.view());
  auto predicted = decode_all(model, features);
  if (meta_or(model, "iobes", "0") == "1") {
    for (auto& s : predicted) s = from_iobes(s);
  }
  write_atomic(a.out, render_dataset(data, predicted));
  out << "sentences\t" << data.sentences.size() << "\n";
  out << "tokens\t" << data.token_count() << "\n";
  return 0;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const CorpusFormat format = parse_corpus_format(a.format);
  Dataset gold = load_labeled(a.gold, format, a.cpostag);
  const Dataset pred = load_labeled(a.pred, format, a.cpostag);
  if (!a.tagmap.empty()) gold = map_universal(gold, read_tagmap(a.tagmap));
  const auto report = evaluate(gold, labels_of(pred));
  if (report.task == Task::pos) {
    out << "accuracy\t" << format_sig(report.token_accuracy, 6) << "\n";
  } else {
    out << "precision\t" << format_sig(report.precision(), 6) << "\n";
    out << "recall\t" << format_sig(report.recall(), 6) << "\n";
    out << "f1\t" << format_sig(report.f1(), 6) << "\n";
    for (const auto& [type, c] : report.per_type) out << "f1[" << type << "]\t" << format_sig(c.f1(), 6) << "\n";
  }
  if (!a.report.empty()) {
    RunInfo run;
    run.treebank = a.treebank.empty() ? std::filesystem::path(a.gold).stem().string() : a.treebank;
    run.scheme = a.scheme;
    run.lambda = a.lambda;
    run.m = a.m;
    run.sparsity = a.sparsity;
    const auto row = build_report(run, report);
    upsert_report(a.report, row);
    out << render_row(row) << "\n";
  }
  return 0;
}

int cmd_coverage(const CoverageArgs& a, std::ostream& out) {
  auto table = load_embeddings(a.embeddings, parse_embedding_format(a.embedding_format));
  table.set_lowercase_fallback(a.lowercase);
  const CorpusFormat format = parse_corpus_format(a.format);
  Dataset all;
  for (const auto& path : a.data) {
    auto d = read_dataset(path, format);
    for (auto& s : d.sentences) all.sentences.push_back(std::move(s));
  }
  const auto r = coverage(table, all);
  out << "token_coverage\t" << format_sig(r.token_coverage, 6) << "\n";
  out << "type_coverage\t" << format_sig(r.type_coverage, 6) << "\n";
  out << "tokens\t" << r.tokens_covered << "/" << r.tokens_total << "\n";
  out << "types\t" << r.types_covered << "/" << r.types_total << "\n";
  return 0;
}

int cmd_analyze_basis(const BasisArgs& a, std::ostream& out) {
  const auto dict = read_dictionary(a.dict);
  const auto codes = read_codes(a.codes, dict.m());
  const auto r = basis_statistics(dict, codes);
  std::string tsv = "basis\tnorm\tfrequency\n";
  for (std::size_t j = 0; j < dict.m(); ++j) {
    tsv += std::to_string(j) + "\t" + format_exact(r.norms[j]) + "\t" + format_sig(r.frequency[j], 6) + "\n";
  }
  tsv += "# pearson\t" + format_sig(r.correlation, 6) + "\n";
  write_atomic(a.out, tsv);
  out << "pearson\t" << format_sig(r.correlation, 6) << "\n";
  out << "max_norm\t" << format_sig(*std::max_element(r.norms.begin(), r.norms.end()), 10) << "\n";
  out << "sparsity\t" << format_sig(sparsity_level(codes, dict.m()), 6) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse-coded word features and CRF sequence labeling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sparsetag 1.0");

  LearnDictArgs ld;
  auto* learn = app.add_subcommand("learn-dict", "Learn a dictionary and sparse codes from embeddings");
  learn->add_option("--embeddings", ld.embeddings)->required()->check(CLI::ExistingFile);
  learn->add_option("--embedding-format", ld.embedding_format)->check(CLI::IsMember({"text", "word2vec-text"}));
  learn->add_option("--m", ld.m, "Number of basis vectors");
  learn->add_option("--lambda", ld.lambda, "l1 weight");
  learn->add_option("--variant", ld.variant)->check(CLI::IsMember({"sc1", "sc3", "sc4"}));
  learn->add_option("--tau", ld.tau, "Dictionary l2 weight (sc3, sc4)");
  learn->add_option("--epochs", ld.epochs);
  learn->add_option("--batch-size", ld.batch_size);
  learn->add_option("--seed", ld.seed);
  learn->add_option("--tolerance", ld.tolerance, "Lasso KKT tolerance");
  learn->add_option("--out-dict", ld.out_dict)->required();
  learn->add_option("--out-codes", ld.out_codes)->required();

  EncodeArgs en;
  auto* enc = app.add_subcommand("encode", "Encode embeddings against an existing dictionary");
  enc->add_option("--embeddings", en.embeddings)->required()->check(CLI::ExistingFile);
  enc->add_option("--embedding-format", en.embedding_format)->check(CLI::IsMember({"text", "word2vec-text"}));
  enc->add_option("--dict", en.dict)->required()->check(CLI::ExistingFile);
  enc->add_option("--out-codes", en.out_codes)->required();

  TrainArgs tr;
  auto* trn = app.add_subcommand("train", "Train a CRF tagger");
  trn->add_option("--task", tr.task)->check(CLI::IsMember({"pos", "ner"}));
  trn->add_option("--scheme", tr.scheme)->check(kSchemes);
  trn->add_option("--train", tr.train)->required()->check(CLI::ExistingFile);
  trn->add_option("--format", tr.format)->check(kFormats);
  add_resource_flags(trn, tr.res);
  trn->add_option("--tagmap", tr.tagmap, "fine<TAB>universal POS map")->check(CLI::ExistingFile);
  trn->add_flag("--iobes", tr.iobes, "Train on IOBES-converted NER labels");
  trn->add_flag("--cpostag", tr.cpostag, "CoNLL-X: use CPOSTAG instead of POSTAG");
  trn->add_option("--first-n", tr.first_n, "Train on the first N sentences only")->check(CLI::PositiveNumber);
  trn->add_option("--window", tr.window)->check(CLI::IsMember({1, 2}));
  trn->add_option("--brown-lengths", tr.brown_lengths)->delimiter(',');
  trn->add_option("--c1", tr.c1)->check(CLI::NonNegativeNumber);
  trn->add_option("--c2", tr.c2)->check(CLI::NonNegativeNumber);
  trn->add_option("--max-iterations", tr.max_iterations);
  trn->add_option("--tolerance", tr.tolerance);
  trn->add_option("--seed", tr.seed);
  trn->add_option("--out", tr.out)->required();

  TagArgs tg;
  auto* tag = app.add_subcommand("tag", "Tag a corpus with a trained model");
  tag->add_option("--model", tg.model)->required()->check(CLI::ExistingFile);
  tag->add_option("--input", tg.input)->required()->check(CLI::ExistingFile);
  tag->add_option("--format", tg.format)->check(kFormats);
  tag->add_flag("--cpostag", tg.cpostag);
  add_resource_flags(tag, tg.res);
  tag->add_option("--out", tg.out)->required();

  EvalArgs ev;
  auto* evl = app.add_subcommand("eval", "Score predicted labels against gold");
  evl->add_option("--gold", ev.gold)->required()->check(CLI::ExistingFile);
  evl->add_option("--pred", ev.pred)->required()->check(CLI::ExistingFile);
  evl->add_option("--format", ev.format)->check(kFormats);
  evl->add_option("--tagmap", ev.tagmap, "Map gold tags before scoring")->check(CLI::ExistingFile);
  evl->add_flag("--cpostag", ev.cpostag);
  evl->add_option("--report", ev.report, "Report TSV to update");
  evl->add_option("--treebank", ev.treebank);
  evl->add_option("--scheme", ev.scheme);
  evl->add_option("--lambda", ev.lambda);
  evl->add_option("--m", ev.m);
  evl->add_option("--sparsity", ev.sparsity);

  CoverageArgs cv;
  auto* cov = app.add_subcommand("coverage", "Token and type coverage of embeddings over corpora");
  cov->add_option("--embeddings", cv.embeddings)->required()->check(CLI::ExistingFile);
  cov->add_option("--embedding-format", cv.embedding_format)->check(CLI::IsMember({"text", "word2vec-text"}));
  cov->add_option("--data", cv.data)->required()->check(CLI::ExistingFile);
  cov->add_option("--format", cv.format)->check(kFormats);
  cov->add_flag("--lowercase", cv.lowercase);

  BasisArgs ba;
  auto* basis = app.add_subcommand("analyze-basis", "Per-basis norms and usage frequencies");
  basis->add_option("--dict", ba.dict)->required()->check(CLI::ExistingFile);
  basis->add_option("--codes", ba.codes)->required()->check(CLI::ExistingFile);
  basis->add_option("--out", ba.out)->required();

  std::vector<std::string> argv_store{"sparsetag"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*learn) return cmd_learn_dict(ld, out);
    if (*enc) return cmd_encode(en, out);
    if (*trn) return cmd_train(tr, out, err);
    if (*tag) return cmd_tag(tg, out);
    if (*evl) return cmd_eval(ev, out);
    if (*cov) return cmd_coverage(cv, out);
    if (*basis) return cmd_analyze_basis(ba, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace sparsetag
