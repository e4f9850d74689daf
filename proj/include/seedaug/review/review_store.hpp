#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seedaug/core/error.hpp"
#include "seedaug/core/types.hpp"
#include "seedaug/review/review_types.hpp"

namespace seedaug {

class ReviewError : public Error {
 public:
  enum class Kind {
    no_work_available,
    unknown_annotator,
    unknown_batch,
    lease_expired,
    foreign_record,
    incomplete_batch,
    batch_closed,
    bad_request,
    bad_log,
  };

  ReviewError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(ReviewError::Kind kind);

struct ReviewServiceConfig {
  std::size_t batch_size = 50;
  std::chrono::milliseconds lease{std::chrono::minutes(30)};
  // When set, only annotators listed in `annotators` may request work.
  bool require_registration = false;
  std::set<std::string> annotators;
  // When set, a record reviewed by one annotator can still be served to
  // another; otherwise one review retires it.
  bool allow_overlap = false;
  // Seed texts per intent, shown to reviewers as context.
  std::map<std::string, std::vector<std::string>> seeds;
};

struct ReviewBatch {
  std::string batch_id;
  std::string intent;
  std::vector<AugmentationRecord> items;
  std::string assigned_to;
  std::chrono::system_clock::time_point issued_at;
  std::chrono::system_clock::time_point expires_at;
};

struct SubmitAck {
  std::size_t recorded = 0;  // new log lines; 0 for a replayed submission
  bool replay = false;
};

struct AcceptanceMetrics {
  std::size_t reviewed = 0;
  std::size_t accepted = 0;
  std::size_t batches = 0;
  std::optional<double> accept_rate_pct;
  std::optional<double> mean_batch_minutes;

  friend bool operator==(const AcceptanceMetrics&, const AcceptanceMetrics&) = default;
};

using Decisions = std::vector<std::pair<std::string, ReviewDecision>>;

// Recomputes metrics from log lines alone (joined with the records for the
// method filter). Throws MetricsError(dangling_review) for unknown ids.
AcceptanceMetrics metrics_from_log(std::span<const ReviewRecord> log, std::span<const AugmentationRecord> records,
                                   const std::optional<std::string>& method, const std::optional<std::string>& intent);

std::vector<ReviewRecord> read_review_log(const std::filesystem::path& path);

// Batch leasing and decision capture over an append-only JSONL log. The log
// is the source of truth: it is replayed on construction, and every closed
// batch is appended and fsynced before submit returns. Thread-safe.
class ReviewStore {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  ReviewStore(std::vector<AugmentationRecord> records, std::filesystem::path log_path,
              ReviewServiceConfig config = {}, Clock clock = {});
  ~ReviewStore();
  ReviewStore(const ReviewStore&) = delete;
  ReviewStore& operator=(const ReviewStore&) = delete;

  ReviewBatch next_batch(const std::string& annotator, const std::optional<std::string>& intent = std::nullopt,
                         const std::optional<std::string>& method = std::nullopt);

  SubmitAck submit_reviews(const std::string& batch_id, const Decisions& decisions, std::int64_t elapsed_ms);

  // Maintained incrementally as batches close.
  AcceptanceMetrics acceptance_metrics(const std::optional<std::string>& method = std::nullopt,
                                       const std::optional<std::string>& intent = std::nullopt) const;

  std::vector<ReviewRecord> log_records() const;
  const std::vector<AugmentationRecord>& records() const { return records_; }
  const ReviewServiceConfig& config() const { return config_; }

 private:
  struct OpenBatch {
    ReviewBatch batch;
    std::set<std::string> ids;
  };
  struct ClosedBatch {
    std::string intent;
    std::set<std::string> methods;
    std::map<std::string, ReviewDecision> decisions;
    std::int64_t elapsed_ms = 0;
    std::string annotator;
  };
  struct Tally {
    std::size_t reviewed = 0;
    std::size_t accepted = 0;
  };

  void replay();
  void apply_locked(const ReviewRecord& r);
  void expire_locked(std::chrono::system_clock::time_point now);
  bool available_locked(const AugmentationRecord& r, const std::string& annotator) const;
  void append_locked(std::span<const ReviewRecord> lines);

  std::vector<AugmentationRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::filesystem::path log_path_;
  ReviewServiceConfig config_;
  Clock clock_;

  mutable std::mutex mutex_;
  int log_fd_ = -1;
  std::vector<ReviewRecord> log_;
  std::map<std::string, OpenBatch> open_;
  std::set<std::string> expired_;
  std::map<std::string, ClosedBatch> closed_;
  std::unordered_map<std::string, std::set<std::string>> reviewed_by_;  // record id -> annotators
  std::unordered_map<std::string, std::string> leased_;                // record id -> batch id
  std::map<std::pair<std::string, std::string>, Tally> tallies_;        // (intent, method)
  std::uint64_t next_batch_number_ = 1;
};

}  // namespace seedaug
