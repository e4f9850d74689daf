#include "seedaug/review/review_types.hpp"

#include <cmath>
#include <ctime>

#include <json.hpp>

#include "seedaug/core/corpus_io.hpp"

namespace seedaug {

namespace {
using json = nlohmann::ordered_json;

[[noreturn]] void bad(std::size_t line_no, const std::string& why) {
  throw CorpusError(CorpusError::Kind::malformed_line, line_no,
                    "review log line " + std::to_string(line_no) + ": " + why);
}

std::string get_string(const json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) bad(line_no, std::string("missing string \"") + key + "\"");
  return it->get<std::string>();
}
}  // namespace

std::string serialize_review(const ReviewRecord& r) {
  json j;
  j["augmentation_id"] = r.augmentation_id;
  j["annotator"] = r.annotator;
  j["batch_id"] = r.batch_id;
  j["decision"] = to_string(r.decision);
  j["elapsed_ms"] = r.elapsed_ms;
  j["timestamp"] = r.timestamp;
  return j.dump();
}

ReviewRecord parse_review(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) bad(line_no, "not a JSON object");
  ReviewRecord r;
  r.augmentation_id = get_string(j, "augmentation_id", line_no);
  r.annotator = get_string(j, "annotator", line_no);
  r.batch_id = get_string(j, "batch_id", line_no);
  auto d = parse_decision(get_string(j, "decision", line_no));
  if (!d) bad(line_no, "decision must be accept or reject");
  r.decision = *d;
  auto e = j.find("elapsed_ms");
  if (e == j.end() || !e->is_number_integer() || e->get<std::int64_t>() < 0)
    bad(line_no, "elapsed_ms must be a non-negative integer");
  r.elapsed_ms = e->get<std::int64_t>();
  r.timestamp = get_string(j, "timestamp", line_no);
  return r;
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  ::gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
  return buf;
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

double round_percent(std::size_t part, std::size_t whole) {
  return round_to(100.0 * static_cast<double>(part) / static_cast<double>(whole), 1);
}

}  // namespace seedaug
