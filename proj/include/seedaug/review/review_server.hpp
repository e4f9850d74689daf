#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "seedaug/review/review_store.hpp"

namespace httplib {
class Server;
}

namespace seedaug {

nlohmann::ordered_json batch_to_json(const ReviewBatch& batch, const ReviewServiceConfig& config);
nlohmann::ordered_json metrics_to_json(const AcceptanceMetrics& m);
int http_status_for(ReviewError::Kind kind);

// JSON API over a ReviewStore:
//   GET  /api/batches/next?annotator=ID[&intent=..][&method=..]
//   POST /api/reviews   {batch_id, decisions:[{id, decision}], elapsed_ms}
//   GET  /api/metrics[?method=..][&intent=..]
//   GET  /api/health
// plus an optional static mount at / for the review UI bundle.
class ReviewServer {
 public:
  explicit ReviewServer(ReviewStore& store, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void start();   // listen() on a background thread
  void stop();
  int port() const { return port_; }

 private:
  ReviewStore& store_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace seedaug
