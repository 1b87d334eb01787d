#include "sparsetag/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparsetag/parallel.hpp"
#include "sparsetag/text.hpp"

namespace sparsetag {

Scheme parse_scheme(const std::string& name) {
  if (name == "sc") return Scheme::sc;
  if (name == "dense") return Scheme::dense;
  if (name == "brown") return Scheme::brown;
  if (name == "fr_w") return Scheme::fr_w;
  if (name == "fr_wc") return Scheme::fr_wc;
  if (name == "wi") return Scheme::wi;
  if (name == "wi_sc") return Scheme::wi_sc;
  throw std::invalid_argument("unknown feature scheme: " + name);
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::sc: return "sc";
    case Scheme::dense: return "dense";
    case Scheme::brown: return "brown";
    case Scheme::fr_w: return "fr_w";
    case Scheme::fr_wc: return "fr_wc";
    case Scheme::wi: return "wi";
    case Scheme::wi_sc: return "wi_sc";
  }
  return "?";
}

void validate(const FeatureConfig& config) {
  if (config.window != 1 && config.window != 2) throw std::invalid_argument("window must be 1 or 2");
  for (int p : config.brown_prefix_lengths) {
    if (p < 1) throw std::invalid_argument("Brown prefix lengths must be positive");
  }
}

ClusterTable::ClusterTable(std::unordered_map<std::string, std::string> paths) : paths_(std::move(paths)) {
  for (const auto& [word, path] : paths_) {
    if (path.empty() || path.find_first_not_of("01") != std::string::npos) {
      throw std::invalid_argument("cluster path for '" + word + "' is not a bit string");
    }
  }
}

const std::string* ClusterTable::find(const std::string& word) const {
  auto it = paths_.find(word);
  if (it == paths_.end() && lowercase_fallback_) it = paths_.find(ascii_lower(word));
  return it == paths_.end() ? nullptr : &it->second;
}

ClusterTable read_clusters(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::unordered_map<std::string, std::string> paths;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cols = split_on(lines[i], '\t');
    if (cols.size() < 2) throw ParseError(path.string(), i + 1, "expected bitstring<TAB>word<TAB>count");
    const std::string bits(cols[0]);
    if (bits.empty() || bits.find_first_not_of("01") != std::string::npos) {
      throw ParseError(path.string(), i + 1, "cluster id '" + bits + "' is not a bit string");
    }
    if (!paths.emplace(std::string(cols[1]), bits).second) {
      throw ParseError(path.string(), i + 1, "duplicate word '" + std::string(cols[1]) + "'");
    }
  }
  return ClusterTable(std::move(paths));
}

std::vector<std::string> sparse_features(const SparseVector& alpha) {
  std::vector<std::string> out;
  out.reserve(alpha.size());
  for (const auto& e : alpha) {
    if (e.value == 0.0) continue;
    out.push_back((e.value > 0.0 ? "+" : "-") + std::to_string(e.index));
  }
  return out;
}

FeatureVector dense_features(std::span<const double> w) {
  FeatureVector out;
  out.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out.push_back({"d:" + std::to_string(j), w[j]});
  return out;
}

std::vector<std::string> brown_features(const std::string& path, std::span<const int> lengths) {
  std::vector<std::string> out;
  if (path.empty()) return out;
  for (int p : lengths) {
    const auto len = std::min(static_cast<std::size_t>(p), path.size());
    out.push_back("bp" + std::to_string(p) + "=" + path.substr(0, len));
  }
  return out;
}

namespace {

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_alnum(char c) { return is_ascii_digit(c) || is_ascii_upper(c) || (c >= 'a' && c <= 'z'); }

bool is_number(std::string_view w) {
  bool digit = false;
  for (char c : w) {
    if (is_ascii_digit(c)) digit = true;
    else if (c != '.' && c != ',' && c != '-' && c != '+' && c != '/' && c != ':') return false;
  }
  return digit;
}

bool is_title_case(std::string_view w) {
  if (w.empty() || !is_ascii_upper(w.front())) return false;
  return std::none_of(w.begin() + 1, w.end(), is_ascii_upper);
}

// Bytes >= 0x80 belong to non-ASCII letters in practice and count as alphanumeric.
bool is_non_alnum(std::string_view w) {
  return std::none_of(w.begin(), w.end(), [](char c) { return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80; });
}

std::string offset_tag(int o) {
  if (o > 0) return "[+" + std::to_string(o) + "]";
  return "[" + std::to_string(o) + "]";
}

void normalize(FeatureVector& v) {
  std::stable_sort(v.begin(), v.end(), [](const Feature& a, const Feature& b) { return a.name < b.name; });
  v.erase(std::unique(v.begin(), v.end(), [](const Feature& a, const Feature& b) { return a.name == b.name; }), v.end());
}

}  // namespace

std::vector<std::string> rich_features(const std::vector<std::string>& words, std::size_t t, bool include_chars) {
  if (t >= words.size()) throw std::out_of_range("token position out of range");
  const long n = static_cast<long>(words.size());
  const long pos = static_cast<long>(t);
  auto in = [&](long i) { return i >= 0 && i < n; };
  auto form = [&](long i) { return sanitize_field(words[static_cast<std::size_t>(i)]); };

  std::vector<std::string> out;
  if (include_chars) {
    const std::string& w = words[t];
    if (is_number(w)) out.push_back("num=1");
    if (is_title_case(w)) out.push_back("title=1");
    if (is_non_alnum(w)) out.push_back("nonalnum=1");
    const auto cps = utf8_codepoints(w);
    for (std::size_t i = 1; i <= 4 && i <= cps.size(); ++i) {
      std::string pre;
      std::string suf;
      for (std::size_t c = 0; c < i; ++c) pre += cps[c];
      for (std::size_t c = cps.size() - i; c < cps.size(); ++c) suf += cps[c];
      out.push_back("pre" + std::to_string(i) + "=" + sanitize_field(pre));
      out.push_back("suf" + std::to_string(i) + "=" + sanitize_field(suf));
    }
  }

  for (long j = -2; j <= 2; ++j) {
    if (in(pos + j)) out.push_back("w[" + std::to_string(j) + "]=" + form(pos + j));
  }
  for (long i = 1; i <= 9; ++i) {
    if (in(pos + i)) out.push_back("w[0," + std::to_string(i) + "]=" + form(pos) + "|" + form(pos + i));
    if (in(pos - i)) out.push_back("w[0,-" + std::to_string(i) + "]=" + form(pos) + "|" + form(pos - i));
  }
  auto ngram = [&](long from, long to) {
    if (!in(pos + from) || !in(pos + to)) return;
    std::string f = "w[" + std::to_string(from) + ".." + std::to_string(to) + "]=";
    for (long i = from; i <= to; ++i) {
      if (i > from) f += '|';
      f += form(pos + i);
    }
    out.push_back(std::move(f));
  };
  for (long j = -2; j <= 1; ++j) ngram(j, j + 1);
  for (long j = -2; j <= 0; ++j) ngram(j, j + 2);
  for (long j = -1; j <= 0; ++j) ngram(j - 1, j + 2);
  ngram(-2, 2);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_resources(const FeatureConfig& config, const FeatureResources& res) {
  switch (config.scheme) {
    case Scheme::sc:
    case Scheme::wi_sc:
      if (!res.codes) throw std::invalid_argument("scheme '" + to_string(config.scheme) + "' needs sparse codes");
      break;
    case Scheme::dense:
      if (!res.embeddings) throw std::invalid_argument("scheme 'dense' needs embeddings");
      break;
    case Scheme::brown:
      if (!res.clusters) throw std::invalid_argument("scheme 'brown' needs a cluster file");
      break;
    case Scheme::fr_w:
    case Scheme::fr_wc:
    case Scheme::wi: break;
  }
}

FeatureVector token_features(const std::vector<std::string>& words, std::size_t t, const FeatureConfig& config,
                             const FeatureResources& res) {
  if (t >= words.size()) throw std::out_of_range("token position out of range");
  require_resources(config, res);
  FeatureVector out;

  if (config.scheme == Scheme::fr_w || config.scheme == Scheme::fr_wc) {
    for (auto& f : rich_features(words, t, config.scheme == Scheme::fr_wc)) out.push_back({std::move(f), 1.0});
    return out;
  }

  const bool with_sc = config.scheme == Scheme::sc || config.scheme == Scheme::wi_sc;
  const bool with_wi = config.scheme == Scheme::wi || config.scheme == Scheme::wi_sc;
  const long n = static_cast<long>(words.size());
  for (int o = -config.window; o <= config.window; ++o) {
    const long i = static_cast<long>(t) + o;
    if (i < 0 || i >= n) continue;
    const std::string& word = words[static_cast<std::size_t>(i)];
    const std::string tag = offset_tag(o);
    if (with_wi) out.push_back({tag + "w=" + sanitize_field(word), 1.0});
    if (with_sc) {
      if (const auto* code = res.codes->find(word)) {
        for (auto& f : sparse_features(*code)) out.push_back({tag + f, 1.0});
      }
    }
    if (config.scheme == Scheme::dense) {
      if (const auto vec = res.embeddings->lookup(word)) {
        for (auto& f : dense_features(*vec)) out.push_back({tag + f.name, f.value});
      }
    }
    if (config.scheme == Scheme::brown) {
      if (const auto* path = res.clusters->find(word)) {
        for (auto& f : brown_features(*path, config.brown_prefix_lengths)) out.push_back({tag + f, 1.0});
      }
    }
  }
  normalize(out);
  return out;
}

std::vector<FeatureVector> sentence_features(const std::vector<std::string>& words, const FeatureConfig& config,
                                             const FeatureResources& res) {
  std::vector<FeatureVector> out;
  out.reserve(words.size());
  for (std::size_t t = 0; t < words.size(); ++t) out.push_back(token_features(words, t, config, res));
  return out;
}

std::vector<std::string> forms_of(const Sentence& sentence) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (const auto& tok : sentence) out.push_back(tok.form);
  return out;
}

std::vector<std::vector<FeatureVector>> dataset_features(const Dataset& data, const FeatureConfig& config,
                                                         const FeatureResources& res) {
  validate(config);
  require_resources(config, res);
  std::vector<std::vector<FeatureVector>> out(data.sentences.size());
  parallel_for(data.sentences.size(), [&](std::size_t s) { out[s] = sentence_features(forms_of(data.sentences[s]), config, res); });
  return out;
}

}  // namespace sparsetag
