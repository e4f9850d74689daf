#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seedaug/core/types.hpp"
#include "seedaug/review/review_types.hpp"

namespace seedaug {

// One table row per method (or per mixing strategy for mixed output).
// Columns follow the order # Augment, Diversity, Accuracy, Time Spent,
// Accept Rate; empty optionals mean "no data", not zero.
struct ReportRow {
  std::string method;
  std::size_t num_augment = 0;
  std::optional<double> diversity_mtld;
  std::optional<double> accuracy_pct;
  std::optional<double> time_spent_min;
  std::optional<double> accept_rate_pct;
  std::size_t reviewed = 0;
  std::size_t accepted = 0;
};

struct MetricsReport {
  std::vector<ReportRow> rows;
  std::size_t total_augment = 0;
  // Where diversity was measured; recorded so readers know the text body.
  std::string diversity_scope = "per-method concatenation of generated texts";
};

// Row key for a record: its strategy when produced by a mix, else its method.
std::string report_key(const AugmentationRecord& record);

// `accuracy_pct` maps row keys to downstream accuracy in percent.
// Throws MetricsError(dangling_review) for a review of an unknown record.
MetricsReport build_report(std::span<const AugmentationRecord> records,
                           std::span<const ReviewRecord> reviews,
                           const std::map<std::string, double>& accuracy_pct = {});

std::string report_to_json(const MetricsReport& report);
std::string report_to_table(const MetricsReport& report);

}  // namespace seedaug
