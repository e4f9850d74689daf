#include "seedaug/metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "seedaug/core/text.hpp"
#include "seedaug/metrics/metrics_error.hpp"
#include "seedaug/metrics/mtld.hpp"

namespace seedaug {

namespace {

// Method enum order first, then anything else alphabetically.
std::size_t key_rank(const std::string& key) {
  if (auto m = parse_method(key)) return static_cast<std::size_t>(*m);
  return 1000;
}

std::string cell(const std::optional<double>& v, const char* fmt, const char* suffix = "") {
  if (!v) return "---";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return std::string(buf) + suffix;
}

}  // namespace

std::string report_key(const AugmentationRecord& record) {
  return std::string(to_string(record.strategy ? *record.strategy : record.method));
}

MetricsReport build_report(std::span<const AugmentationRecord> records,
                           std::span<const ReviewRecord> reviews,
                           const std::map<std::string, double>& accuracy_pct) {
  std::unordered_map<std::string, const AugmentationRecord*> by_id;
  std::map<std::string, std::vector<const AugmentationRecord*>> groups;
  for (const auto& r : records) {
    by_id.emplace(r.id, &r);
    groups[report_key(r)].push_back(&r);
  }

  struct ReviewTally {
    std::size_t reviewed = 0;
    std::size_t accepted = 0;
    std::map<std::string, std::int64_t> batch_ms;
  };
  std::map<std::string, ReviewTally> tallies;
  for (const auto& rv : reviews) {
    auto it = by_id.find(rv.augmentation_id);
    if (it == by_id.end())
      throw MetricsError(MetricsError::Kind::dangling_review, "review of unknown record " + rv.augmentation_id);
    auto& t = tallies[report_key(*it->second)];
    ++t.reviewed;
    if (rv.decision == ReviewDecision::accept) ++t.accepted;
    t.batch_ms[rv.batch_id] = rv.elapsed_ms;
  }

  std::set<std::string> keys;
  for (const auto& [k, v] : groups) keys.insert(k);
  for (const auto& [k, v] : accuracy_pct) keys.insert(k);

  MetricsReport report;
  for (const auto& key : keys) {
    ReportRow row;
    row.method = key;
    if (auto g = groups.find(key); g != groups.end()) {
      row.num_augment = g->second.size();
      TokenSequence all;
      for (const auto* r : g->second) {
        auto t = tokenize(r->utterance.text).tokens;
        all.tokens.insert(all.tokens.end(), t.begin(), t.end());
      }
      row.diversity_mtld = round_to(mtld(all), 1);
    }
    if (auto a = accuracy_pct.find(key); a != accuracy_pct.end()) row.accuracy_pct = round_to(a->second, 1);
    if (auto t = tallies.find(key); t != tallies.end() && t->second.reviewed > 0) {
      row.reviewed = t->second.reviewed;
      row.accepted = t->second.accepted;
      row.accept_rate_pct = round_percent(t->second.accepted, t->second.reviewed);
      double total_min = 0.0;
      for (const auto& [batch, ms] : t->second.batch_ms) total_min += static_cast<double>(ms) / 60000.0;
      row.time_spent_min = round_to(total_min / static_cast<double>(t->second.batch_ms.size()), 2);
    }
    report.total_augment += row.num_augment;
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return key_rank(a.method) < key_rank(b.method);
  });
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  using json = nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& r : report.rows) {
    json j;
    j["method"] = r.method;
    j["num_augment"] = r.num_augment;
    j["diversity_mtld"] = opt(r.diversity_mtld);
    j["accuracy_pct"] = opt(r.accuracy_pct);
    j["time_spent_min"] = opt(r.time_spent_min);
    j["accept_rate_pct"] = opt(r.accept_rate_pct);
    j["reviewed"] = r.reviewed;
    j["accepted"] = r.accepted;
    rows.push_back(std::move(j));
  }
  json out;
  out["rows"] = std::move(rows);
  out["total_augment"] = report.total_augment;
  out["metadata"] = {{"diversity_scope", report.diversity_scope}};
  return out.dump(2) + "\n";
}

std::string report_to_table(const MetricsReport& report) {
  const std::vector<std::string> header = {"Method", "# Augment", "Diversity", "Accuracy", "Time Spent",
                                           "Accept Rate"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : report.rows) {
    cells.push_back({r.method, std::to_string(r.num_augment), cell(r.diversity_mtld, "%.1f"),
                     cell(r.accuracy_pct, "%.1f"), cell(r.time_spent_min, "%.2f"),
                     cell(r.accept_rate_pct, "%.1f", "%")});
  }
  cells.push_back({"Total", std::to_string(report.total_augment), "", "", "", ""});

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string v = row[c];
      if (c == 0) {
        v.resize(width[c], ' ');
        out += v;
      } else {
        out += "  " + std::string(width[c] - v.size(), ' ') + v;
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  std::size_t rule = 0;
  for (auto w : width) rule += w + 2;
  out += std::string(rule - 2, '-') + "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i + 1 == cells.size()) out += std::string(rule - 2, '-') + "\n";
    out += line(cells[i]);
  }
  return out;
}

}  // namespace seedaug
