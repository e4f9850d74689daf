#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

#include "seedaug/core/types.hpp"

namespace seedaug {

// One line of the append-only review log. elapsed_ms is the whole batch's
// review time, stored identically on each of its records.
struct ReviewRecord {
  std::string augmentation_id;
  std::string annotator;
  std::string batch_id;
  ReviewDecision decision = ReviewDecision::accept;
  std::int64_t elapsed_ms = 0;
  std::string timestamp;  // ISO-8601 UTC

  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

std::string serialize_review(const ReviewRecord& r);
// Throws CorpusError(malformed_line).
ReviewRecord parse_review(std::string_view line, std::size_t line_no);

std::string iso8601_utc(std::chrono::system_clock::time_point t);

// Percent with one decimal, as review tables report it.
double round_percent(std::size_t part, std::size_t whole);
double round_to(double value, int decimals);

}  // namespace seedaug
