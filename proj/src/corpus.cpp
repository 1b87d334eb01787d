#include "sparsetag/corpus.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "sparsetag/text.hpp"

namespace sparsetag {

namespace {

constexpr std::size_t kLastColumn = std::numeric_limits<std::size_t>::max();

void flush(std::vector<Sentence>& out, Sentence& current) {
  if (!current.empty()) out.push_back(std::move(current));
  current.clear();
}

std::vector<std::string> to_strings(const std::vector<std::string_view>& v) {
  return {v.begin(), v.end()};
}

bool valid_bio_tag(const std::string& tag) {
  if (tag == "O") return true;
  return tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-';
}

std::string span_type(const std::string& tag) { return tag.size() > 2 ? tag.substr(2) : std::string(); }

}  // namespace

std::size_t Dataset::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "conllx") return CorpusFormat::conllx;
  if (name == "conllu") return CorpusFormat::conllu;
  if (name == "ner2002") return CorpusFormat::ner2002;
  if (name == "ner2003") return CorpusFormat::ner2003;
  throw std::invalid_argument("unknown corpus format: " + name);
}

std::string to_string(CorpusFormat f) {
  switch (f) {
    case CorpusFormat::conllx: return "conllx";
    case CorpusFormat::conllu: return "conllu";
    case CorpusFormat::ner2002: return "ner2002";
    case CorpusFormat::ner2003: return "ner2003";
  }
  return "?";
}

std::string to_string(Task t) { return t == Task::pos ? "pos" : "ner"; }

Task parse_task(const std::string& name) {
  if (name == "pos") return Task::pos;
  if (name == "ner") return Task::ner;
  throw std::invalid_argument("unknown task: " + name);
}

Dataset read_conllx(const std::filesystem::path& path, ConllxOptions opts) {
  const auto lines = read_lines(path);
  Dataset data;
  data.task = Task::pos;
  data.format = CorpusFormat::conllx;
  data.label_column = opts.coarse_tag ? 3 : 4;
  const std::string src = path.string();
  std::size_t width = 0;
  Sentence current;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) {
      flush(data.sentences, current);
      continue;
    }
    auto cols = split_on(lines[i], '\t');
    if (cols.size() < 5) throw ParseError(src, i + 1, "expected at least 5 tab-separated columns, got " + std::to_string(cols.size()));
    if (width == 0) width = cols.size();
    if (cols.size() != width) {
      throw ParseError(src, i + 1, "ragged row: " + std::to_string(cols.size()) + " columns, expected " + std::to_string(width));
    }
    Token tok;
    tok.form = std::string(cols[1]);
    tok.label = std::string(cols[data.label_column]);
    if (tok.form.empty()) throw ParseError(src, i + 1, "empty word form");
    tok.columns = to_strings(cols);
    current.push_back(std::move(tok));
  }
  flush(data.sentences, current);
  return data;
}

Dataset read_conllu(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  Dataset data;
  data.task = Task::pos;
  data.format = CorpusFormat::conllu;
  data.label_column = 3;
  const std::string src = path.string();
  Sentence current;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) {
      flush(data.sentences, current);
      continue;
    }
    if (lines[i].front() == '#') continue;
    auto cols = split_on(lines[i], '\t');
    if (cols.size() != 10) throw ParseError(src, i + 1, "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    const auto id = cols[0];
    long a = 0;
    long b = 0;
    if (const auto dash = id.find('-'); dash != std::string_view::npos) {
      if (!parse_long(id.substr(0, dash), a) || !parse_long(id.substr(dash + 1), b) || a < 1 || b < a) {
        throw ParseError(src, i + 1, "malformed multiword id '" + std::string(id) + "'");
      }
      continue;
    }
    if (const auto dot = id.find('.'); dot != std::string_view::npos) {
      if (!parse_long(id.substr(0, dot), a) || !parse_long(id.substr(dot + 1), b) || a < 0 || b < 1) {
        throw ParseError(src, i + 1, "malformed empty-node id '" + std::string(id) + "'");
      }
      continue;
    }
    if (!parse_long(id, a) || a < 1) throw ParseError(src, i + 1, "malformed id '" + std::string(id) + "'");
    Token tok;
    tok.form = std::string(cols[1]);
    tok.label = std::string(cols[3]);
    if (tok.form.empty()) throw ParseError(src, i + 1, "empty word form");
    tok.columns = to_strings(cols);
    current.push_back(std::move(tok));
  }
  flush(data.sentences, current);
  return data;
}

Dataset read_conll_ner(const std::filesystem::path& path, CorpusFormat format) {
  if (format != CorpusFormat::ner2002 && format != CorpusFormat::ner2003) {
    throw std::invalid_argument("read_conll_ner needs ner2002 or ner2003");
  }
  const auto lines = read_lines(path);
  Dataset data;
  data.task = Task::ner;
  data.format = format;
  data.label_column = kLastColumn;
  const std::string src = path.string();
  Sentence current;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto cols = split_whitespace(lines[i]);
    if (cols.empty()) {
      flush(data.sentences, current);
      continue;
    }
    if (cols[0] == "-DOCSTART-") {
      flush(data.sentences, current);
      continue;
    }
    if (cols.size() < 2) throw ParseError(src, i + 1, "expected at least 2 columns");
    Token tok;
    tok.form = std::string(cols.front());
    tok.label = std::string(cols.back());
    if (!valid_bio_tag(tok.label)) throw ParseError(src, i + 1, "invalid NER tag '" + tok.label + "'");
    tok.columns = to_strings(cols);
    current.push_back(std::move(tok));
  }
  flush(data.sentences, current);
  for (auto& s : data.sentences) {
    std::vector<std::string> labels;
    labels.reserve(s.size());
    for (const auto& t : s) labels.push_back(t.label);
    labels = normalize_bio(labels);
    for (std::size_t t = 0; t < s.size(); ++t) s[t].label = labels[t];
  }
  return data;
}

Dataset read_dataset(const std::filesystem::path& path, CorpusFormat format, ConllxOptions opts) {
  switch (format) {
    case CorpusFormat::conllx: return read_conllx(path, opts);
    case CorpusFormat::conllu: return read_conllu(path);
    case CorpusFormat::ner2002:
    case CorpusFormat::ner2003: return read_conll_ner(path, format);
  }
  throw std::invalid_argument("unknown corpus format");
}

std::string render_dataset(const Dataset& data, const std::vector<std::vector<std::string>>& labels) {
  const bool ner = data.format == CorpusFormat::ner2002 || data.format == CorpusFormat::ner2003;
  const char sep = ner ? ' ' : '\t';
  if (!labels.empty() && labels.size() != data.sentences.size()) {
    throw std::invalid_argument("label sequences do not match sentence count");
  }
  std::string out;
  for (std::size_t s = 0; s < data.sentences.size(); ++s) {
    const auto& sent = data.sentences[s];
    if (!labels.empty() && labels[s].size() != sent.size()) {
      throw std::invalid_argument("label sequence length mismatch in sentence " + std::to_string(s));
    }
    for (std::size_t t = 0; t < sent.size(); ++t) {
      auto cols = sent[t].columns;
      if (cols.empty()) {
        // Tokens built in memory: emit a minimal layout for the format.
        if (ner) cols = {sent[t].form, sent[t].label};
        else if (data.format == CorpusFormat::conllu) cols = {std::to_string(t + 1), sent[t].form, "_", sent[t].label, "_", "_", "_", "_", "_", "_"};
        else cols = {std::to_string(t + 1), sent[t].form, "_", sent[t].label, sent[t].label, "_", "_", "_", "_", "_"};
      }
      const std::size_t col = data.label_column == kLastColumn ? cols.size() - 1 : data.label_column;
      cols.at(col) = labels.empty() ? sent[t].label : labels[s][t];
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out += sep;
        out += cols[c];
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

const std::vector<std::string>& universal_tags_12() {
  static const std::vector<std::string> tags = {"NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PRT", ".", "X"};
  return tags;
}

const std::vector<std::string>& universal_tags_ud() {
  static const std::vector<std::string> tags = {"ADJ",  "ADP",  "ADV",  "AUX",  "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
                                                "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return tags;
}

TagMap read_tagmap(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const auto& u12 = universal_tags_12();
  const auto& ud = universal_tags_ud();
  TagMap map;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = split_on(line, '\t');
    if (cols.size() != 2) throw ParseError(path.string(), i + 1, "expected fine<TAB>universal");
    std::string fine(trim(cols[0]));
    std::string uni(trim(cols[1]));
    if (std::find(u12.begin(), u12.end(), uni) == u12.end() && std::find(ud.begin(), ud.end(), uni) == ud.end()) {
      throw ParseError(path.string(), i + 1, "'" + uni + "' is not a universal POS tag");
    }
    map.fine_to_universal[fine] = uni;
  }
  return map;
}

Dataset map_universal(const Dataset& data, const TagMap& map) {
  Dataset out = data;
  for (auto& s : out.sentences) {
    for (auto& t : s) {
      const auto it = map.fine_to_universal.find(t.label);
      if (it == map.fine_to_universal.end()) throw std::runtime_error("tag '" + t.label + "' has no universal mapping");
      t.label = it->second;
    }
  }
  return out;
}

std::vector<std::string> normalize_bio(const std::vector<std::string>& labels, std::size_t* repaired) {
  std::vector<std::string> out = labels;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& tag = out[i];
    if (tag.size() < 2 || tag[0] != 'I') continue;
    const std::string type = span_type(tag);
    const bool continues = i > 0 && out[i - 1] != "O" && span_type(out[i - 1]) == type;
    if (!continues) {
      out[i] = "B-" + type;
      if (repaired) ++*repaired;
    }
  }
  return out;
}

std::vector<std::string> to_iobes(const std::vector<std::string>& bio, std::size_t* repaired) {
  for (const auto& tag : bio) {
    if (!valid_bio_tag(tag)) throw std::invalid_argument("not a BIO tag: '" + tag + "'");
  }
  const auto norm = normalize_bio(bio, repaired);
  std::vector<std::string> out(norm.size());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (norm[i] == "O") {
      out[i] = "O";
      continue;
    }
    const std::string type = span_type(norm[i]);
    const bool next_inside = i + 1 < norm.size() && norm[i + 1] == "I-" + type;
    if (norm[i][0] == 'B') out[i] = (next_inside ? "B-" : "S-") + type;
    else out[i] = (next_inside ? "I-" : "E-") + type;
  }
  return out;
}

std::vector<std::string> from_iobes(const std::vector<std::string>& iobes) {
  std::vector<std::string> out(iobes.size());
  for (std::size_t i = 0; i < iobes.size(); ++i) {
    const auto& tag = iobes[i];
    if (tag == "O") {
      out[i] = tag;
      continue;
    }
    if (tag.size() < 3 || tag[1] != '-') throw std::invalid_argument("not an IOBES tag: '" + tag + "'");
    switch (tag[0]) {
      case 'S':
      case 'B': out[i] = "B-" + tag.substr(2); break;
      case 'E':
      case 'I': out[i] = "I-" + tag.substr(2); break;
      default: throw std::invalid_argument("not an IOBES tag: '" + tag + "'");
    }
  }
  return out;
}

IobesResult to_iobes(const Dataset& data) {
  IobesResult res;
  res.data = data;
  for (auto& s : res.data.sentences) {
    std::vector<std::string> labels;
    labels.reserve(s.size());
    for (const auto& t : s) labels.push_back(t.label);
    labels = to_iobes(labels, &res.repaired);
    for (std::size_t i = 0; i < s.size(); ++i) s[i].label = labels[i];
  }
  return res;
}

Dataset from_iobes(const Dataset& data) {
  Dataset out = data;
  for (auto& s : out.sentences) {
    std::vector<std::string> labels;
    labels.reserve(s.size());
    for (const auto& t : s) labels.push_back(t.label);
    labels = from_iobes(labels);
    for (std::size_t i = 0; i < s.size(); ++i) s[i].label = labels[i];
  }
  return out;
}

Dataset subset_first_n(const Dataset& data, std::size_t n) {
  if (n == 0) throw std::invalid_argument("subset size must be at least 1");
  Dataset out;
  out.task = data.task;
  out.format = data.format;
  out.label_column = data.label_column;
  const std::size_t count = std::min(n, data.sentences.size());
  out.sentences.assign(data.sentences.begin(), data.sentences.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

std::vector<std::vector<std::string>> labels_of(const Dataset& data) {
  std::vector<std::vector<std::string>> out;
  out.reserve(data.sentences.size());
  for (const auto& s : data.sentences) {
    std::vector<std::string> l;
    l.reserve(s.size());
    for (const auto& t : s) l.push_back(t.label);
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace sparsetag
