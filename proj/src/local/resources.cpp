#include "seedaug/local/resources.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "seedaug/core/text.hpp"
#include "seedaug/local/augment_ops.hpp"

namespace seedaug {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError(path.string(), 0, "cannot open");
  return in;
}

}  // namespace

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::noun: return "NOUN";
    case PosTag::verb: return "VERB";
    case PosTag::adj: return "ADJ";
    case PosTag::adv: return "ADV";
    case PosTag::det: return "DET";
    case PosTag::pron: return "PRON";
    case PosTag::other: return "OTHER";
  }
  return "OTHER";
}

std::optional<PosTag> parse_pos_tag(std::string_view s) {
  static constexpr std::array<PosTag, 7> all = {PosTag::noun, PosTag::verb, PosTag::adj,
                                                PosTag::adv,  PosTag::det,  PosTag::pron,
                                                PosTag::other};
  for (PosTag t : all) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

bool is_content_tag(PosTag tag) {
  return tag == PosTag::noun || tag == PosTag::verb || tag == PosTag::adj;
}

// ---- Thesaurus ----

void Thesaurus::add(std::string lemma, PosTag tag, std::vector<std::string> synonyms) {
  lemma = lower(lemma);
  std::erase_if(synonyms, [&](const std::string& s) { return s.empty() || s == lemma; });
  if (synonyms.empty()) return;
  auto& slot = entries_[{std::move(lemma), tag}];
  for (auto& s : synonyms) {
    if (std::find(slot.begin(), slot.end(), s) == slot.end()) slot.push_back(std::move(s));
  }
}

std::span<const std::string> Thesaurus::lookup(const std::string& lemma, PosTag tag) const {
  auto it = entries_.find({lemma, tag});
  if (it == entries_.end()) return {};
  return it->second;
}

Thesaurus Thesaurus::parse(std::istream& in, std::string_view source) {
  Thesaurus t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = strip_cr(line);
    if (normalize(l).empty() || l.front() == '#') continue;
    auto cols = split(l, '\t');
    if (cols.size() != 3) throw ResourceError(std::string(source), line_no, "expected 3 columns");
    auto tag = parse_pos_tag(cols[1]);
    if (!tag) throw ResourceError(std::string(source), line_no, "unknown POS tag");
    std::vector<std::string> syns;
    for (auto s : split(cols[2], '|')) syns.emplace_back(normalize(s));
    t.add(std::string(cols[0]), *tag, std::move(syns));
  }
  return t;
}

Thesaurus Thesaurus::load(const std::filesystem::path& path) {
  auto in = open(path);
  return parse(in, path.string());
}

// ---- PosLexicon ----

void PosLexicon::set(std::string token, PosTag tag) { tags_[lower(token)] = tag; }

PosTag PosLexicon::tag(std::string_view token) const {
  auto it = tags_.find(lower(token));
  return it == tags_.end() ? PosTag::other : it->second;
}

PosLexicon PosLexicon::parse(std::istream& in, std::string_view source) {
  PosLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = strip_cr(line);
    if (normalize(l).empty() || l.front() == '#') continue;
    auto cols = split(l, '\t');
    if (cols.size() != 2) throw ResourceError(std::string(source), line_no, "expected 2 columns");
    auto tag = parse_pos_tag(cols[1]);
    if (!tag) throw ResourceError(std::string(source), line_no, "unknown POS tag");
    lex.set(std::string(cols[0]), *tag);
  }
  return lex;
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  auto in = open(path);
  return parse(in, path.string());
}

// ---- EmbeddingTable ----

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

void EmbeddingTable::add(std::string token, std::span<const double> vector) {
  if (vector.size() != dim_) throw std::invalid_argument("embedding dimension mismatch for " + token);
  for (double v : vector) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite embedding component for " + token);
  }
  auto [it, inserted] = index_.emplace(std::move(token), data_.size() / dim_);
  if (inserted) {
    data_.insert(data_.end(), vector.begin(), vector.end());
  } else {
    std::copy(vector.begin(), vector.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
  }
}

const double* EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? nullptr : data_.data() + it->second * dim_;
}

EmbeddingTable EmbeddingTable::parse(std::istream& in, std::string_view source) {
  std::optional<EmbeddingTable> table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    values.clear();
    std::string num;
    while (fields >> num) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
      if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(v))
        throw ResourceError(std::string(source), line_no, "bad component \"" + num + "\"");
      values.push_back(v);
    }
    if (values.empty()) throw ResourceError(std::string(source), line_no, "token without vector");
    if (!table) table.emplace(values.size());
    if (values.size() != table->dim())
      throw ResourceError(std::string(source), line_no,
                          "expected " + std::to_string(table->dim()) + " components");
    table->add(lower(token), values);
  }
  if (!table) throw ResourceError(std::string(source), 0, "no embeddings");
  return std::move(*table);
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  auto in = open(path);
  return parse(in, path.string());
}

// ---- CandidatePool ----

CandidatePool::CandidatePool(std::vector<std::string> texts, const EmbeddingTable& table)
    : texts_(std::move(texts)), dim_(table.dim()) {
  rows_.reserve(texts_.size() * dim_);
  for (const auto& t : texts_) {
    auto v = embed_bow(t, table);
    rows_.insert(rows_.end(), v.begin(), v.end());
  }
}

CandidatePool::CandidatePool(std::vector<std::string> texts, std::vector<double> rows,
                             std::size_t dim)
    : texts_(std::move(texts)), rows_(std::move(rows)), dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("pool dimension must be positive");
  if (rows_.size() != texts_.size() * dim_)
    throw std::invalid_argument("pool rows do not match text count");
}

std::vector<std::string> CandidatePool::read_texts(const std::filesystem::path& path) {
  auto in = open(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string n = normalize(line);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

// ---- NGramModel ----

namespace {
std::string bigram_key(const std::string& l, const std::string& r) {
  std::string k;
  k.reserve(l.size() + r.size() + 1);
  k += l;
  k.push_back('\x1f');
  k += r;
  return k;
}
}  // namespace

void NGramModel::add_sentence(std::span<const std::string> tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (unigrams_[tokens[i]]++ == 0) {
      vocab_.insert(std::lower_bound(vocab_.begin(), vocab_.end(), tokens[i]), tokens[i]);
    }
    if (i + 1 < tokens.size()) ++bigrams_[bigram_key(tokens[i], tokens[i + 1])];
  }
}

std::size_t NGramModel::unigram(const std::string& w) const {
  auto it = unigrams_.find(w);
  return it == unigrams_.end() ? 0 : it->second;
}

std::size_t NGramModel::bigram(const std::string& left, const std::string& right) const {
  auto it = bigrams_.find(bigram_key(left, right));
  return it == bigrams_.end() ? 0 : it->second;
}

const std::string& NGramModel::most_frequent() const {
  if (vocab_.empty()) throw AugmentError(AugmentError::Kind::empty_model, "n-gram model is empty");
  const std::string* best = &vocab_.front();
  std::size_t best_count = unigram(*best);
  for (const auto& w : vocab_) {
    std::size_t c = unigram(w);
    if (c > best_count) {
      best = &w;
      best_count = c;
    }
  }
  return *best;
}

NGramModel NGramModel::train(std::span<const std::string> texts) {
  NGramModel m;
  for (const auto& t : texts) m.add_sentence(tokenize(t).tokens);
  return m;
}

// ---- KeyboardMap ----

KeyboardMap::KeyboardMap() {
  static constexpr std::array<std::string_view, 4> rows = {"1234567890", "qwertyuiop",
                                                           "asdfghjkl", "zxcvbnm"};
  auto link = [this](char a, char b) {
    adjacency_[static_cast<unsigned char>(a)].push_back(b);
    adjacency_[static_cast<unsigned char>(b)].push_back(a);
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < rows[r].size(); ++j) {
      if (j + 1 < rows[r].size()) link(rows[r][j], rows[r][j + 1]);
      if (r == 0) continue;
      // Rows are staggered: key j sits below keys j and j + 1 of the row above.
      const auto& above = rows[r - 1];
      if (j < above.size()) link(rows[r][j], above[j]);
      if (j + 1 < above.size()) link(rows[r][j], above[j + 1]);
    }
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
}

const KeyboardMap& KeyboardMap::qwerty() {
  static const KeyboardMap map;
  return map;
}

std::span<const char> KeyboardMap::neighbours(char c) const {
  if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  auto idx = static_cast<unsigned char>(c);
  if (idx >= 128) return {};
  return adjacency_[idx];
}

bool KeyboardMap::has_key(char c) const { return !neighbours(c).empty(); }

}  // namespace seedaug
