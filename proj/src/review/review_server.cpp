#include "seedaug/review/review_server.hpp"

#include <httplib.h>

#include "seedaug/core/method.hpp"
#include "seedaug/core/corpus_io.hpp"

namespace seedaug {

namespace {
using json = nlohmann::ordered_json;

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  auto v = req.get_param_value(key);
  if (v.empty()) return std::nullopt;
  return v;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, status, json{{"error", json{{"code", code}, {"message", message}}}});
}

std::string iso(std::chrono::system_clock::time_point t) { return iso8601_utc(t); }

}  // namespace

int http_status_for(ReviewError::Kind kind) {
  switch (kind) {
    case ReviewError::Kind::no_work_available:
    case ReviewError::Kind::unknown_batch:
      return 404;
    case ReviewError::Kind::unknown_annotator:
      return 403;
    case ReviewError::Kind::lease_expired:
    case ReviewError::Kind::batch_closed:
      return 409;
    case ReviewError::Kind::bad_log:
      return 500;
    default:
      return 400;
  }
}

json batch_to_json(const ReviewBatch& batch, const ReviewServiceConfig& config) {
  json items = json::array();
  for (const auto& r : batch.items) items.push_back(json::parse(serialize_record(r)));
  json seeds = json::array();
  if (auto it = config.seeds.find(batch.intent); it != config.seeds.end())
    for (const auto& s : it->second) seeds.push_back(s);
  return json{{"batch_id", batch.batch_id},       {"intent", batch.intent},
              {"assigned_to", batch.assigned_to}, {"issued_at", iso(batch.issued_at)},
              {"expires_at", iso(batch.expires_at)}, {"seeds", seeds},
              {"items", items}};
}

json metrics_to_json(const AcceptanceMetrics& m) {
  json j{{"reviewed", m.reviewed}, {"accepted", m.accepted}, {"batches", m.batches}};
  j["accept_rate_pct"] = m.accept_rate_pct ? json(*m.accept_rate_pct) : json(nullptr);
  j["mean_batch_minutes"] = m.mean_batch_minutes ? json(*m.mean_batch_minutes) : json(nullptr);
  return j;
}

ReviewServer::ReviewServer(ReviewStore& store, std::optional<std::filesystem::path> static_dir)
    : store_(store), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;

  srv.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json{{"ok", true}});
  });

  srv.Get("/api/batches/next", [this](const httplib::Request& req, httplib::Response& res) {
    auto annotator = param(req, "annotator");
    if (!annotator) return send_error(res, 400, "bad_request", "annotator query parameter is required");
    try {
      auto batch = store_.next_batch(*annotator, param(req, "intent"), param(req, "method"));
      send_json(res, 200, batch_to_json(batch, store_.config()));
    } catch (const ReviewError& e) {
      send_error(res, http_status_for(e.kind()), to_string(e.kind()), e.what());
    }
  });

  srv.Post("/api/reviews", [this](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) return send_error(res, 400, "bad_request", "body must be a JSON object");
    auto id = body.find("batch_id");
    auto ds = body.find("decisions");
    auto ms = body.find("elapsed_ms");
    if (id == body.end() || !id->is_string()) return send_error(res, 400, "bad_request", "batch_id must be a string");
    if (ds == body.end() || !ds->is_array()) return send_error(res, 400, "bad_request", "decisions must be an array");
    if (ms == body.end() || !ms->is_number_integer())
      return send_error(res, 400, "bad_request", "elapsed_ms must be an integer");
    Decisions decisions;
    for (const auto& d : *ds) {
      if (!d.is_object() || !d.contains("id") || !d["id"].is_string() || !d.contains("decision") ||
          !d["decision"].is_string())
        return send_error(res, 400, "bad_request", "each decision needs string id and decision");
      auto parsed = parse_decision(d["decision"].get<std::string>());
      if (!parsed) return send_error(res, 400, "bad_request", "decision must be accept or reject");
      decisions.emplace_back(d["id"].get<std::string>(), *parsed);
    }
    try {
      auto ack = store_.submit_reviews(id->get<std::string>(), decisions, ms->get<std::int64_t>());
      send_json(res, 200, json{{"ok", true}, {"recorded", ack.recorded}, {"replay", ack.replay}});
    } catch (const ReviewError& e) {
      send_error(res, http_status_for(e.kind()), to_string(e.kind()), e.what());
    }
  });

  srv.Get("/api/metrics", [this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, metrics_to_json(store_.acceptance_metrics(param(req, "method"), param(req, "intent"))));
  });

  if (static_dir) {
    if (!srv.set_mount_point("/", static_dir->string()))
      throw Error("static directory does not exist: " + static_dir->string());
  }

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send_error(res, 500, "internal", what);
  });
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port_;
}

void ReviewServer::listen() { server_->listen_after_bind(); }

void ReviewServer::start() {
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
}

void ReviewServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace seedaug
