#include "seedaug/core/corpus_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "seedaug/core/atomic_file.hpp"
#include "seedaug/core/text.hpp"

namespace seedaug {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw CorpusError(CorpusError::Kind::malformed_line, line_no,
                    "line " + std::to_string(line_no) + ": " + why);
}

bool blank(std::string_view line) { return normalize(line).empty(); }

json parse_object(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) malformed(line_no, "invalid JSON");
  if (!j.is_object()) malformed(line_no, "expected a JSON object");
  return j;
}

std::string required_string(const json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) malformed(line_no, std::string("missing \"") + key + "\"");
  if (!it->is_string()) malformed(line_no, std::string("\"") + key + "\" is not a string");
  return it->get<std::string>();
}

MethodId required_method(const json& j, std::size_t line_no) {
  std::string name = required_string(j, "method", line_no);
  auto m = parse_method(name);
  if (!m) malformed(line_no, "unknown method \"" + name + "\"");
  return *m;
}

Utterance parse_labeled(std::string_view line, std::size_t line_no) {
  json j = parse_object(line, line_no);
  Utterance u = Utterance::seed(required_string(j, "text", line_no),
                                required_string(j, "intent", line_no));
  if (normalize(u.text).empty()) malformed(line_no, "empty text");
  if (u.intent.empty()) malformed(line_no, "empty intent");
  return u;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError(CorpusError::Kind::io, 0, "cannot open " + path.string());
  return in;
}

}  // namespace

SeedSet parse_seed_set(std::istream& in) {
  SeedSet set;
  std::map<std::string, DedupSet> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    Utterance u = parse_labeled(line, line_no);
    if (!seen[u.intent].insert(u.text))
      throw CorpusError(CorpusError::Kind::duplicate_seed, line_no,
                        "duplicate seed under intent \"" + u.intent + "\": " + u.text);
    set.intents[u.intent].push_back(std::move(u));
  }
  for (const auto& [intent, seeds] : set.intents) {
    if (seeds.empty())
      throw CorpusError(CorpusError::Kind::empty_intent, 0, "intent has no seeds: " + intent);
  }
  if (set.intents.empty())
    throw CorpusError(CorpusError::Kind::empty_intent, 0, "seed file contains no intents");
  return set;
}

SeedSet load_seed_set(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_seed_set(in);
}

std::vector<Utterance> load_labeled_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<Utterance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    out.push_back(parse_labeled(line, line_no));
  }
  return out;
}

std::string serialize_record(const AugmentationRecord& r) {
  json j;
  j["id"] = r.id;
  j["intent"] = r.utterance.intent;
  j["text"] = r.utterance.text;
  j["method"] = to_string(r.method);
  json prov = json::array();
  for (MethodId m : r.utterance.provenance) prov.push_back(to_string(m));
  j["provenance"] = std::move(prov);
  j["source_text"] = r.utterance.source_text ? json(*r.utterance.source_text) : json(nullptr);
  j["round_index"] = r.round_index;
  if (r.strategy) j["strategy"] = to_string(*r.strategy);
  if (r.review) j["review"] = to_string(*r.review);
  return j.dump();
}

AugmentationRecord parse_record(std::string_view line, std::size_t line_no) {
  json j = parse_object(line, line_no);
  AugmentationRecord r;
  r.id = required_string(j, "id", line_no);
  r.utterance.intent = required_string(j, "intent", line_no);
  r.utterance.text = required_string(j, "text", line_no);
  r.method = required_method(j, line_no);

  auto prov = j.find("provenance");
  if (prov == j.end() || !prov->is_array()) malformed(line_no, "\"provenance\" must be an array");
  for (const auto& p : *prov) {
    if (!p.is_string()) malformed(line_no, "provenance entry is not a string");
    auto m = parse_method(p.get<std::string>());
    if (!m) malformed(line_no, "unknown provenance entry \"" + p.get<std::string>() + "\"");
    r.utterance.provenance.push_back(*m);
  }

  auto src = j.find("source_text");
  if (src != j.end() && !src->is_null()) {
    if (!src->is_string()) malformed(line_no, "\"source_text\" must be a string or null");
    r.utterance.source_text = src->get<std::string>();
  }

  auto round = j.find("round_index");
  if (round != j.end()) {
    if (!round->is_number_unsigned()) malformed(line_no, "\"round_index\" must be a non-negative integer");
    r.round_index = round->get<std::size_t>();
  }
  if (auto st = j.find("strategy"); st != j.end()) {
    auto m = st->is_string() ? parse_method(st->get<std::string>()) : std::nullopt;
    if (!m) malformed(line_no, "bad \"strategy\"");
    r.strategy = m;
  }
  if (auto rv = j.find("review"); rv != j.end()) {
    auto d = rv->is_string() ? parse_decision(rv->get<std::string>()) : std::nullopt;
    if (!d) malformed(line_no, "bad \"review\"");
    r.review = d;
  }

  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    malformed(line_no, e.what());
  }
  return r;
}

std::string serialize_records(std::span<const AugmentationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += serialize_record(r);
    out.push_back('\n');
  }
  return out;
}

void write_augmentations(std::span<const AugmentationRecord> records,
                         const std::filesystem::path& path) {
  write_file_atomic(path, serialize_records(records));
}

std::vector<AugmentationRecord> parse_augmentations(std::istream& in) {
  std::vector<AugmentationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    out.push_back(parse_record(line, line_no));
  }
  return out;
}

std::vector<AugmentationRecord> load_augmentations(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_augmentations(in);
}

}  // namespace seedaug
