#include "seedaug/review/review_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "seedaug/core/corpus_io.hpp"
#include "seedaug/metrics/metrics_error.hpp"

namespace seedaug {

std::string_view to_string(ReviewError::Kind kind) {
  switch (kind) {
    case ReviewError::Kind::no_work_available: return "no_work_available";
    case ReviewError::Kind::unknown_annotator: return "unknown_annotator";
    case ReviewError::Kind::unknown_batch: return "unknown_batch";
    case ReviewError::Kind::lease_expired: return "lease_expired";
    case ReviewError::Kind::foreign_record: return "foreign_record";
    case ReviewError::Kind::incomplete_batch: return "incomplete_batch";
    case ReviewError::Kind::batch_closed: return "batch_closed";
    case ReviewError::Kind::bad_request: return "bad_request";
    case ReviewError::Kind::bad_log: return "bad_log";
  }
  return "unknown";
}

namespace {

double minutes(std::int64_t ms) { return static_cast<double>(ms) / 60000.0; }

std::optional<double> mean_minutes(const std::vector<std::int64_t>& batch_ms) {
  if (batch_ms.empty()) return std::nullopt;
  double total = 0.0;
  for (auto ms : batch_ms) total += minutes(ms);
  return round_to(total / static_cast<double>(batch_ms.size()), 2);
}

}  // namespace

std::vector<ReviewRecord> read_review_log(const std::filesystem::path& path) {
  std::vector<ReviewRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (in.eof()) break;  // unterminated tail: a write that never completed
    out.push_back(parse_review(line, line_no));
  }
  return out;
}

AcceptanceMetrics metrics_from_log(std::span<const ReviewRecord> log, std::span<const AugmentationRecord> records,
                                   const std::optional<std::string>& method, const std::optional<std::string>& intent) {
  std::unordered_map<std::string, const AugmentationRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.id, &r);

  AcceptanceMetrics m;
  std::map<std::string, std::int64_t> batches;
  for (const auto& line : log) {
    auto it = by_id.find(line.augmentation_id);
    if (it == by_id.end())
      throw MetricsError(MetricsError::Kind::dangling_review, "review of unknown record " + line.augmentation_id);
    const auto& rec = *it->second;
    if (intent && rec.utterance.intent != *intent) continue;
    if (method && std::string(to_string(rec.method)) != *method) continue;
    ++m.reviewed;
    if (line.decision == ReviewDecision::accept) ++m.accepted;
    batches[line.batch_id] = line.elapsed_ms;
  }
  if (m.reviewed > 0) m.accept_rate_pct = round_percent(m.accepted, m.reviewed);
  std::vector<std::int64_t> ms;
  for (const auto& [id, v] : batches) ms.push_back(v);
  m.batches = ms.size();
  m.mean_batch_minutes = mean_minutes(ms);
  return m;
}

ReviewStore::ReviewStore(std::vector<AugmentationRecord> records, std::filesystem::path log_path,
                         ReviewServiceConfig config, Clock clock)
    : records_(std::move(records)),
      log_path_(std::move(log_path)),
      config_(std::move(config)),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::system_clock::now(); })) {
  if (config_.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].id, i).second)
      throw ReviewError(ReviewError::Kind::bad_log, "duplicate augmentation id " + records_[i].id);
  }
  replay();
  log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (log_fd_ < 0)
    throw ReviewError(ReviewError::Kind::bad_log, "cannot open review log " + log_path_.string() + ": " +
                                                      std::strerror(errno));
}

ReviewStore::~ReviewStore() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

void ReviewStore::replay() {
  // Drop an unterminated trailing line so the next append starts cleanly.
  std::error_code ec;
  if (std::filesystem::exists(log_path_, ec)) {
    std::ifstream in(log_path_, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string content = ss.str();
    if (!content.empty() && content.back() != '\n') {
      auto keep = content.rfind('\n');
      std::filesystem::resize_file(log_path_, keep == std::string::npos ? 0 : keep + 1);
    }
  }
  std::vector<ReviewRecord> lines;
  try {
    lines = read_review_log(log_path_);
  } catch (const CorpusError& e) {
    throw ReviewError(ReviewError::Kind::bad_log, e.what());
  }
  for (const auto& r : lines) {
    if (!index_.count(r.augmentation_id))
      throw ReviewError(ReviewError::Kind::bad_log, "review log references unknown record " + r.augmentation_id);
    apply_locked(r);
  }
}

void ReviewStore::apply_locked(const ReviewRecord& r) {
  const auto& rec = records_[index_.at(r.augmentation_id)];
  const std::string method(to_string(rec.method));

  auto& batch = closed_[r.batch_id];
  batch.intent = rec.utterance.intent;
  batch.methods.insert(method);
  batch.decisions[r.augmentation_id] = r.decision;
  batch.elapsed_ms = r.elapsed_ms;
  batch.annotator = r.annotator;

  reviewed_by_[r.augmentation_id].insert(r.annotator);
  auto& t = tallies_[{rec.utterance.intent, method}];
  ++t.reviewed;
  if (r.decision == ReviewDecision::accept) ++t.accepted;
  log_.push_back(r);

  if (r.batch_id.size() > 1 && r.batch_id[0] == 'b' &&
      std::all_of(r.batch_id.begin() + 1, r.batch_id.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    next_batch_number_ = std::max<std::uint64_t>(next_batch_number_, std::stoull(r.batch_id.substr(1)) + 1);
  }
}

void ReviewStore::expire_locked(std::chrono::system_clock::time_point now) {
  for (auto it = open_.begin(); it != open_.end();) {
    if (now >= it->second.batch.expires_at) {
      for (const auto& id : it->second.ids) leased_.erase(id);
      expired_.insert(it->first);
      it = open_.erase(it);
    } else {
      ++it;
    }
  }
}

bool ReviewStore::available_locked(const AugmentationRecord& r, const std::string& annotator) const {
  if (leased_.count(r.id)) return false;
  auto it = reviewed_by_.find(r.id);
  if (it == reviewed_by_.end()) return true;
  return config_.allow_overlap && !it->second.count(annotator);
}

ReviewBatch ReviewStore::next_batch(const std::string& annotator, const std::optional<std::string>& intent,
                                    const std::optional<std::string>& method) {
  if (annotator.empty()) throw ReviewError(ReviewError::Kind::bad_request, "annotator id is required");
  if (config_.require_registration && !config_.annotators.count(annotator))
    throw ReviewError(ReviewError::Kind::unknown_annotator, "unknown annotator " + annotator);

  std::lock_guard lock(mutex_);
  const auto now = clock_();
  expire_locked(now);

  std::map<std::string, std::vector<const AugmentationRecord*>> by_intent;
  for (const auto& r : records_) {
    if (intent && r.utterance.intent != *intent) continue;
    if (method && std::string(to_string(r.method)) != *method) continue;
    if (available_locked(r, annotator)) by_intent[r.utterance.intent].push_back(&r);
  }
  if (by_intent.empty()) throw ReviewError(ReviewError::Kind::no_work_available, "no unreviewed records match");

  auto& [chosen_intent, pending] = *by_intent.begin();
  std::stable_sort(pending.begin(), pending.end(),
                   [](const auto* a, const auto* b) { return a->round_index < b->round_index; });
  if (pending.size() > config_.batch_size) pending.resize(config_.batch_size);

  OpenBatch open;
  open.batch.batch_id = "b" + std::to_string(next_batch_number_++);
  open.batch.intent = chosen_intent;
  open.batch.assigned_to = annotator;
  open.batch.issued_at = now;
  open.batch.expires_at = now + config_.lease;
  for (const auto* r : pending) {
    open.batch.items.push_back(*r);
    open.ids.insert(r->id);
    leased_[r->id] = open.batch.batch_id;
  }
  ReviewBatch out = open.batch;
  open_.emplace(out.batch_id, std::move(open));
  return out;
}

void ReviewStore::append_locked(std::span<const ReviewRecord> lines) {
  std::string payload;
  for (const auto& l : lines) payload += serialize_review(l) + "\n";
  std::size_t written = 0;
  while (written < payload.size()) {
    ssize_t n = ::write(log_fd_, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ReviewError(ReviewError::Kind::bad_log, std::string("review log write failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  ::fsync(log_fd_);
}

SubmitAck ReviewStore::submit_reviews(const std::string& batch_id, const Decisions& decisions,
                                      std::int64_t elapsed_ms) {
  if (elapsed_ms < 0) throw ReviewError(ReviewError::Kind::bad_request, "elapsed_ms must be non-negative");
  std::map<std::string, ReviewDecision> payload;
  for (const auto& [id, d] : decisions) {
    if (!payload.emplace(id, d).second)
      throw ReviewError(ReviewError::Kind::bad_request, "decision given twice for " + id);
  }

  std::lock_guard lock(mutex_);
  if (auto c = closed_.find(batch_id); c != closed_.end()) {
    if (c->second.decisions == payload && c->second.elapsed_ms == elapsed_ms) return {0, true};
    throw ReviewError(ReviewError::Kind::batch_closed, "batch " + batch_id + " was already submitted");
  }
  const auto now = clock_();
  expire_locked(now);
  if (expired_.count(batch_id)) throw ReviewError(ReviewError::Kind::lease_expired, "lease on " + batch_id + " expired");
  auto it = open_.find(batch_id);
  if (it == open_.end()) throw ReviewError(ReviewError::Kind::unknown_batch, "unknown batch " + batch_id);

  const auto& open = it->second;
  for (const auto& [id, d] : payload) {
    if (!open.ids.count(id)) throw ReviewError(ReviewError::Kind::foreign_record, "record " + id + " is not in " + batch_id);
  }
  if (payload.size() != open.ids.size())
    throw ReviewError(ReviewError::Kind::incomplete_batch,
                      std::to_string(open.ids.size() - payload.size()) + " records in " + batch_id + " lack a decision");

  const std::string stamp = iso8601_utc(now);
  std::vector<ReviewRecord> lines;
  for (const auto& item : open.batch.items) {
    lines.push_back({item.id, open.batch.assigned_to, batch_id, payload.at(item.id), elapsed_ms, stamp});
  }
  append_locked(lines);
  for (const auto& l : lines) {
    apply_locked(l);
    leased_.erase(l.augmentation_id);
  }
  open_.erase(it);
  return {lines.size(), false};
}

AcceptanceMetrics ReviewStore::acceptance_metrics(const std::optional<std::string>& method,
                                                  const std::optional<std::string>& intent) const {
  std::lock_guard lock(mutex_);
  AcceptanceMetrics m;
  for (const auto& [key, t] : tallies_) {
    if (intent && key.first != *intent) continue;
    if (method && key.second != *method) continue;
    m.reviewed += t.reviewed;
    m.accepted += t.accepted;
  }
  if (m.reviewed > 0) m.accept_rate_pct = round_percent(m.accepted, m.reviewed);
  std::vector<std::int64_t> ms;
  for (const auto& [id, b] : closed_) {
    if (intent && b.intent != *intent) continue;
    if (method && !b.methods.count(*method)) continue;
    ms.push_back(b.elapsed_ms);
  }
  m.batches = ms.size();
  m.mean_batch_minutes = mean_minutes(ms);
  return m;
}

std::vector<ReviewRecord> ReviewStore::log_records() const {
  std::lock_guard lock(mutex_);
  return log_;
}

}  // namespace seedaug
