#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sparsetag {

enum class Task { pos, ner };

struct Token {
  std::string form;
  std::string label;
  // Raw columns of the source line, kept so tagged output can be written back
  // in the input's layout.
  std::vector<std::string> columns;
};

using Sentence = std::vector<Token>;

enum class CorpusFormat { conllx, conllu, ner2002, ner2003 };

struct Dataset {
  std::vector<Sentence> sentences;
  Task task = Task::pos;
  CorpusFormat format = CorpusFormat::conllx;
  // Column holding the label in Token::columns.
  std::size_t label_column = 0;

  std::size_t token_count() const;
};

CorpusFormat parse_corpus_format(const std::string& name);
std::string to_string(CorpusFormat f);
std::string to_string(Task t);
Task parse_task(const std::string& name);

struct ConllxOptions {
  // Read CPOSTAG (column 4) instead of the fine POSTAG (column 5).
  bool coarse_tag = false;
};

Dataset read_conllx(const std::filesystem::path& path, ConllxOptions opts = {});
Dataset read_conllu(const std::filesystem::path& path);
/// CoNLL-2002/2003 NER. Labels are normalized to BIO (IOB2) on read.
Dataset read_conll_ner(const std::filesystem::path& path, CorpusFormat format);
Dataset read_dataset(const std::filesystem::path& path, CorpusFormat format, ConllxOptions opts = {});

/// Renders `data` in its source column layout, with each token's label column
/// replaced by `labels` (or by the token's own label when `labels` is empty).
std::string render_dataset(const Dataset& data, const std::vector<std::vector<std::string>>& labels = {});

// ---- universal tag mapping ------------------------------------------------

const std::vector<std::string>& universal_tags_12();
const std::vector<std::string>& universal_tags_ud();

struct TagMap {
  std::map<std::string, std::string> fine_to_universal;
};

/// Two tab-separated columns `fine<TAB>universal`, '#' comments.
TagMap read_tagmap(const std::filesystem::path& path);
Dataset map_universal(const Dataset& data, const TagMap& map);

// ---- NER span schemes -----------------------------------------------------

struct IobesResult {
  Dataset data;
  // I- tokens that did not continue a span of their type.
  std::size_t repaired = 0;
};

IobesResult to_iobes(const Dataset& data);
Dataset from_iobes(const Dataset& data);
std::vector<std::string> to_iobes(const std::vector<std::string>& bio, std::size_t* repaired = nullptr);
std::vector<std::string> from_iobes(const std::vector<std::string>& iobes);
/// Normalizes IOB1 (or ill-formed BIO) to IOB2.
std::vector<std::string> normalize_bio(const std::vector<std::string>& labels, std::size_t* repaired = nullptr);

Dataset subset_first_n(const Dataset& data, std::size_t n);

std::vector<std::vector<std::string>> labels_of(const Dataset& data);

}  // namespace sparsetag
