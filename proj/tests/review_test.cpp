#include <doctest.h>

#include <httplib.h>

#include <chrono>
#include <random>
#include <thread>

#include <json.hpp>

#include "seedaug/core/corpus_io.hpp"
#include "seedaug/metrics/metrics_error.hpp"
#include "seedaug/review/review_server.hpp"
#include "seedaug/review/review_store.hpp"
#include "support/test_util.hpp"

using namespace seedaug;
using namespace std::chrono_literals;

namespace {

AugmentationRecord make(const std::string& intent, std::size_t i, MethodId m = MethodId::typo,
                        std::size_t round = 0) {
  AugmentationRecord r;
  r.id = intent + "#" + std::to_string(10000 + i).substr(1);
  r.utterance = Utterance::derived(Utterance::seed("seed for " + intent, intent),
                                   intent + " text " + std::to_string(i), m);
  r.method = m;
  r.round_index = round;
  return r;
}

std::vector<AugmentationRecord> corpus(const std::string& intent, std::size_t n, MethodId m = MethodId::typo) {
  std::vector<AugmentationRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(make(intent, i, m, (n - i) % 7));
  return out;
}

struct FakeClock {
  std::chrono::system_clock::time_point now = std::chrono::system_clock::time_point{} + 1000h;
  ReviewStore::Clock fn() {
    return [this] { return now; };
  }
};

Decisions decide(const ReviewBatch& b, std::size_t accept_first) {
  Decisions d;
  for (std::size_t i = 0; i < b.items.size(); ++i)
    d.emplace_back(b.items[i].id, i < accept_first ? ReviewDecision::accept : ReviewDecision::reject);
  return d;
}

ReviewError::Kind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ReviewError& e) {
    return e.kind();
  }
  FAIL("expected ReviewError");
  return ReviewError::Kind::bad_request;
}

}  // namespace

TEST_CASE("batches cap at the configured size and keep one intent") {
  testutil::TempDir dir;
  auto recs = corpus("a", 120);
  auto more = corpus("b", 30);
  recs.insert(recs.end(), more.begin(), more.end());
  ReviewStore store(recs, dir / "log.jsonl");

  auto b1 = store.next_batch("ann");
  CHECK(b1.items.size() == 50);
  CHECK(b1.intent == "a");
  for (std::size_t i = 1; i < b1.items.size(); ++i) CHECK(b1.items[i - 1].round_index <= b1.items[i].round_index);
  for (const auto& r : b1.items) CHECK(r.utterance.intent == "a");

  auto b2 = store.next_batch("ann");
  std::set<std::string> seen;
  for (const auto& r : b1.items) seen.insert(r.id);
  for (const auto& r : b2.items) CHECK(seen.insert(r.id).second);
  CHECK(b2.items.size() == 50);
  CHECK(store.next_batch("ann").items.size() == 20);

  auto bb = store.next_batch("ann", std::string("b"));
  CHECK(bb.items.size() == 30);
  CHECK(kind_of([&] { store.next_batch("ann"); }) == ReviewError::Kind::no_work_available);
  CHECK(kind_of([&] { store.next_batch(""); }) == ReviewError::Kind::bad_request);
}

TEST_CASE("method filter") {
  testutil::TempDir dir;
  auto recs = corpus("a", 10, MethodId::eda);
  auto t = corpus("a", 5, MethodId::typo);
  for (auto& r : t) r.id += "t";
  recs.insert(recs.end(), t.begin(), t.end());
  ReviewStore store(recs, dir / "log.jsonl");
  auto b = store.next_batch("ann", std::nullopt, std::string("typo"));
  CHECK(b.items.size() == 5);
  for (const auto& r : b.items) CHECK(r.method == MethodId::typo);
}

TEST_CASE("registration") {
  testutil::TempDir dir;
  ReviewServiceConfig cfg;
  cfg.require_registration = true;
  cfg.annotators = {"alice"};
  ReviewStore store(corpus("a", 5), dir / "log.jsonl", cfg);
  CHECK(kind_of([&] { store.next_batch("mallory"); }) == ReviewError::Kind::unknown_annotator);
  CHECK(store.next_batch("alice").items.size() == 5);
}

TEST_CASE("submission timing, closure and idempotent replay") {
  testutil::TempDir dir;
  ReviewStore store(corpus("a", 50), dir / "log.jsonl");
  auto b = store.next_batch("ann");
  auto d = decide(b, 40);
  auto ack = store.submit_reviews(b.batch_id, d, 90000);
  CHECK(ack.recorded == 50);
  CHECK_FALSE(ack.replay);
  auto m = store.acceptance_metrics();
  CHECK(m.reviewed == 50);
  CHECK(m.accepted == 40);
  CHECK(m.batches == 1);
  CHECK(*m.mean_batch_minutes == 1.5);
  CHECK(*m.accept_rate_pct == 80.0);

  auto again = store.submit_reviews(b.batch_id, d, 90000);
  CHECK(again.replay);
  CHECK(again.recorded == 0);
  CHECK(store.log_records().size() == 50);
  CHECK(read_review_log(dir / "log.jsonl").size() == 50);

  auto changed = d;
  changed[0].second = ReviewDecision::reject;
  CHECK(kind_of([&] { store.submit_reviews(b.batch_id, changed, 90000); }) == ReviewError::Kind::batch_closed);
  CHECK(kind_of([&] { store.next_batch("ann"); }) == ReviewError::Kind::no_work_available);

  auto text = testutil::read_text(dir / "log.jsonl");
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
  for (const auto& r : store.log_records()) {
    CHECK(r.elapsed_ms == 90000);
    CHECK(r.batch_id == b.batch_id);
    CHECK(r.timestamp.size() == 24);
    CHECK(r.timestamp.back() == 'Z');
  }
}

TEST_CASE("submission errors") {
  testutil::TempDir dir;
  FakeClock clock;
  ReviewStore store(corpus("a", 60), dir / "log.jsonl", {}, clock.fn());
  auto b = store.next_batch("ann");
  auto other = store.next_batch("ann");
  REQUIRE(b.items.size() == 50);
  auto d = decide(b, 10);

  CHECK(kind_of([&] { store.submit_reviews("b999", d, 1); }) == ReviewError::Kind::unknown_batch);
  auto partial = d;
  partial.pop_back();
  CHECK(kind_of([&] { store.submit_reviews(b.batch_id, partial, 1); }) == ReviewError::Kind::incomplete_batch);
  auto foreign = d;
  foreign.back().first = other.items[0].id;
  CHECK(kind_of([&] { store.submit_reviews(b.batch_id, foreign, 1); }) == ReviewError::Kind::foreign_record);
  auto twice = d;
  twice.back().first = twice.front().first;
  CHECK(kind_of([&] { store.submit_reviews(b.batch_id, twice, 1); }) == ReviewError::Kind::bad_request);
  CHECK(kind_of([&] { store.submit_reviews(b.batch_id, d, -5); }) == ReviewError::Kind::bad_request);
  CHECK(store.log_records().empty());

  clock.now += 31min;
  CHECK(kind_of([&] { store.submit_reviews(b.batch_id, d, 1); }) == ReviewError::Kind::lease_expired);
  // expired leases return every record to the pool
  auto again = store.next_batch("ann");
  CHECK(again.items.size() == 50);
  auto rest = store.next_batch("ann");
  CHECK(rest.items.size() == 10);
  CHECK(store.submit_reviews(again.batch_id, decide(again, 0), 1).recorded == 50);
}

TEST_CASE("lease boundary") {
  testutil::TempDir dir;
  FakeClock clock;
  ReviewServiceConfig cfg;
  cfg.lease = 10min;
  ReviewStore store(corpus("a", 3), dir / "log.jsonl", cfg, clock.fn());
  auto b = store.next_batch("ann");
  CHECK(b.expires_at - b.issued_at == 10min);
  clock.now += 9min;
  CHECK(kind_of([&] { store.next_batch("other"); }) == ReviewError::Kind::no_work_available);
  CHECK(store.submit_reviews(b.batch_id, decide(b, 3), 5).recorded == 3);
}

TEST_CASE("overlap mode serves a record to each annotator once") {
  testutil::TempDir dir;
  ReviewServiceConfig cfg;
  cfg.allow_overlap = true;
  ReviewStore store(corpus("a", 4), dir / "log.jsonl", cfg);
  auto b = store.next_batch("alice");
  store.submit_reviews(b.batch_id, decide(b, 4), 1);
  CHECK(kind_of([&] { store.next_batch("alice"); }) == ReviewError::Kind::no_work_available);
  auto c = store.next_batch("bob");
  CHECK(c.items.size() == 4);
  store.submit_reviews(c.batch_id, decide(c, 1), 1);
  auto m = store.acceptance_metrics();
  CHECK(m.reviewed == 8);
  CHECK(m.accepted == 5);
}

TEST_CASE("restart replays the log") {
  testutil::TempDir dir;
  auto recs = corpus("a", 90);
  AcceptanceMetrics before;
  std::string last_batch;
  {
    ReviewStore store(recs, dir / "log.jsonl");
    auto b1 = store.next_batch("ann");
    store.submit_reviews(b1.batch_id, decide(b1, 40), 120000);
    auto b2 = store.next_batch("ann");
    store.submit_reviews(b2.batch_id, decide(b2, 33), 60000);
    last_batch = b2.batch_id;
    before = store.acceptance_metrics();
    CHECK(before.reviewed == 90);
    CHECK(before.accepted == 73);
    CHECK(*before.accept_rate_pct == 81.1);
    CHECK(*before.mean_batch_minutes == 1.5);
  }
  ReviewStore reopened(recs, dir / "log.jsonl");
  CHECK(reopened.acceptance_metrics() == before);
  CHECK(kind_of([&] { reopened.next_batch("ann"); }) == ReviewError::Kind::no_work_available);
  // new batch ids do not collide with replayed ones
  auto more = recs;
  more.push_back(make("a", 500));
  ReviewStore bigger(more, dir / "log.jsonl");
  auto b = bigger.next_batch("ann");
  CHECK(b.batch_id != last_batch);
  CHECK(b.batch_id != "b1");
}

TEST_CASE("partial trailing line is dropped on startup") {
  testutil::TempDir dir;
  auto recs = corpus("a", 5);
  {
    ReviewStore store(recs, dir / "log.jsonl");
    auto b = store.next_batch("ann");
    store.submit_reviews(b.batch_id, decide(b, 2), 1000);
  }
  {
    std::ofstream out(dir / "log.jsonl", std::ios::app | std::ios::binary);
    out << R"({"augmentation_id":"a#00)";
  }
  ReviewStore store(recs, dir / "log.jsonl");
  CHECK(store.log_records().size() == 5);
  auto text = testutil::read_text(dir / "log.jsonl");
  CHECK(text.back() == '\n');
  CHECK(read_review_log(dir / "log.jsonl").size() == 5);
}

TEST_CASE("bad logs are refused") {
  testutil::TempDir dir;
  testutil::write_text(dir / "log.jsonl", "not json\n");
  CHECK(kind_of([&] { ReviewStore s(corpus("a", 2), dir / "log.jsonl"); }) == ReviewError::Kind::bad_log);
  ReviewRecord r{"ghost#0001", "ann", "b1", ReviewDecision::accept, 10, "2026-01-01T00:00:00.000Z"};
  testutil::write_text(dir / "log.jsonl", serialize_review(r) + "\n");
  CHECK(kind_of([&] { ReviewStore s(corpus("a", 2), dir / "log.jsonl"); }) == ReviewError::Kind::bad_log);
  auto dup = corpus("a", 2);
  dup.push_back(dup[0]);
  CHECK(kind_of([&] { ReviewStore s(dup, dir / "fresh.jsonl"); }) == ReviewError::Kind::bad_log);
}

TEST_CASE("review log lines round-trip") {
  ReviewRecord r{"a#0001", "ann", "b7", ReviewDecision::reject, 1234, "2026-03-04T05:06:07.089Z"};
  auto line = serialize_review(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(parse_review(line, 1) == r);
  CHECK_THROWS(parse_review(R"({"augmentation_id":"a","annotator":"x","decision":"maybe","elapsed_ms":1,"timestamp":"t"})", 3));
  CHECK_THROWS(parse_review(R"({"augmentation_id":"a","annotator":"x","decision":"accept","elapsed_ms":-1,"timestamp":"t"})", 3));
  CHECK(iso8601_utc(std::chrono::system_clock::time_point{} + 86400s + 1500ms) == "1970-01-02T00:00:01.500Z");
}

TEST_CASE("incremental metrics equal a from-scratch recomputation") {
  testutil::TempDir dir;
  std::vector<AugmentationRecord> recs;
  const std::vector<MethodId> methods = {MethodId::eda, MethodId::typo, MethodId::knn};
  for (int intent = 0; intent < 4; ++intent)
    for (std::size_t i = 0; i < 60; ++i) {
      auto r = make("i" + std::to_string(intent), i, methods[(i + intent) % 3], i % 5);
      recs.push_back(r);
    }
  std::mt19937_64 g(99);
  ReviewStore store(recs, dir / "log.jsonl");
  for (;;) {
    ReviewBatch b;
    try {
      b = store.next_batch("ann");
    } catch (const ReviewError&) {
      break;
    }
    Decisions d;
    for (const auto& r : b.items) d.emplace_back(r.id, g() % 4 ? ReviewDecision::accept : ReviewDecision::reject);
    store.submit_reviews(b.batch_id, d, static_cast<std::int64_t>(g() % 300000));
  }
  auto log = read_review_log(dir / "log.jsonl");
  CHECK(log.size() == recs.size());
  std::vector<std::optional<std::string>> ms = {std::nullopt, "eda", "typo", "knn", "lm_decode"};
  std::vector<std::optional<std::string>> is = {std::nullopt, "i0", "i3", "zzz"};
  for (const auto& m : ms)
    for (const auto& i : is) CHECK(store.acceptance_metrics(m, i) == metrics_from_log(log, recs, m, i));
  auto none = store.acceptance_metrics(std::string("lm_decode"));
  CHECK(none.reviewed == 0);
  CHECK_FALSE(none.accept_rate_pct);
  CHECK_FALSE(none.mean_batch_minutes);
  CHECK_THROWS_AS(metrics_from_log(log, std::vector<AugmentationRecord>{}, std::nullopt, std::nullopt), MetricsError);
}

TEST_CASE("concurrent batch requests never share a record") {
  testutil::TempDir dir;
  std::vector<AugmentationRecord> recs;
  for (int k = 0; k < 8; ++k) {
    auto c = corpus("i" + std::to_string(k), 75);
    recs.insert(recs.end(), c.begin(), c.end());
  }
  ReviewStore store(recs, dir / "log.jsonl");
  std::mutex m;
  std::vector<std::string> ids;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&, t] {
      for (;;) {
        try {
          auto b = store.next_batch("ann" + std::to_string(t));
          std::lock_guard lock(m);
          for (const auto& r : b.items) ids.push_back(r.id);
        } catch (const ReviewError&) {
          return;
        }
      }
    });
  for (auto& th : threads) th.join();
  std::set<std::string> uniq(ids.begin(), ids.end());
  CHECK(ids.size() == recs.size());
  CHECK(uniq.size() == ids.size());
}

// ---- HTTP ----

namespace {

struct Running {
  testutil::TempDir dir;
  std::unique_ptr<ReviewStore> store;
  std::unique_ptr<ReviewServer> server;
  std::unique_ptr<httplib::Client> client;

  explicit Running(std::vector<AugmentationRecord> recs, ReviewServiceConfig cfg = {},
                   std::optional<std::filesystem::path> static_dir = std::nullopt) {
    store = std::make_unique<ReviewStore>(std::move(recs), dir / "log.jsonl", cfg);
    server = std::make_unique<ReviewServer>(*store, static_dir);
    int port = server->bind("127.0.0.1", 0);
    server->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  ~Running() { server->stop(); }

  nlohmann::json post(const nlohmann::json& body, int expect) {
    auto res = client->Post("/api/reviews", body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expect);
    return nlohmann::json::parse(res->body);
  }
  nlohmann::json get(const std::string& path, int expect) {
    auto res = client->Get(path);
    REQUIRE(res);
    CHECK(res->status == expect);
    return nlohmann::json::parse(res->body);
  }
};

}  // namespace

TEST_CASE("http: health, batch, submit, metrics") {
  ReviewServiceConfig cfg;
  cfg.seeds["a"] = {"seed one", "seed two"};
  Running srv(corpus("a", 50), cfg);
  CHECK(srv.get("/api/health", 200) == nlohmann::json{{"ok", true}});

  auto batch = srv.get("/api/batches/next?annotator=ann&intent=a", 200);
  CHECK(batch["intent"] == "a");
  CHECK(batch["assigned_to"] == "ann");
  CHECK(batch["items"].size() == 50);
  CHECK(batch["seeds"] == nlohmann::json::array({"seed one", "seed two"}));
  CHECK(batch["issued_at"].is_string());
  CHECK(batch["items"][0]["method"] == "typo");

  nlohmann::json decisions = nlohmann::json::array();
  for (std::size_t i = 0; i < batch["items"].size(); ++i)
    decisions.push_back({{"id", batch["items"][i]["id"]}, {"decision", i < 38 ? "accept" : "reject"}});
  nlohmann::json body{{"batch_id", batch["batch_id"]}, {"decisions", decisions}, {"elapsed_ms", 90000}};
  auto ack = srv.post(body, 200);
  CHECK(ack["ok"] == true);
  CHECK(ack["recorded"] == 50);
  CHECK(srv.post(body, 200)["replay"] == true);

  auto m = srv.get("/api/metrics", 200);
  CHECK(m["reviewed"] == 50);
  CHECK(m["accepted"] == 38);
  CHECK(m["accept_rate_pct"] == 76.0);
  CHECK(m["mean_batch_minutes"] == 1.5);
  auto none = srv.get("/api/metrics?method=eda", 200);
  CHECK(none["reviewed"] == 0);
  CHECK(none["accept_rate_pct"].is_null());
}

TEST_CASE("http: error statuses") {
  ReviewServiceConfig cfg;
  cfg.require_registration = true;
  cfg.annotators = {"ann"};
  Running srv(corpus("a", 3), cfg);
  CHECK(srv.get("/api/batches/next", 400)["error"]["code"] == "bad_request");
  CHECK(srv.get("/api/batches/next?annotator=eve", 403)["error"]["code"] == "unknown_annotator");
  CHECK(srv.get("/api/batches/next?annotator=ann&intent=none", 404)["error"]["code"] == "no_work_available");

  auto batch = srv.get("/api/batches/next?annotator=ann", 200);
  nlohmann::json one = nlohmann::json::array({{{"id", batch["items"][0]["id"]}, {"decision", "accept"}}});
  CHECK(srv.post({{"batch_id", batch["batch_id"]}, {"decisions", one}, {"elapsed_ms", 5}}, 400)["error"]["code"] ==
        "incomplete_batch");
  CHECK(srv.post({{"batch_id", "b77"}, {"decisions", one}, {"elapsed_ms", 5}}, 404)["error"]["code"] ==
        "unknown_batch");
  CHECK(srv.post({{"batch_id", batch["batch_id"]}, {"decisions", "x"}, {"elapsed_ms", 5}}, 400).contains("error"));
  nlohmann::json odd = nlohmann::json::array({{{"id", "a#0000"}, {"decision", "maybe"}}});
  CHECK(srv.post({{"batch_id", batch["batch_id"]}, {"decisions", odd}, {"elapsed_ms", 5}}, 400).contains("error"));
  auto res = srv.client->Post("/api/reviews", "{nope", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  nlohmann::json all = nlohmann::json::array();
  for (const auto& it : batch["items"]) all.push_back({{"id", it["id"]}, {"decision", "accept"}});
  srv.post({{"batch_id", batch["batch_id"]}, {"decisions", all}, {"elapsed_ms", 5}}, 200);
  all[0]["decision"] = "reject";
  CHECK(srv.post({{"batch_id", batch["batch_id"]}, {"decisions", all}, {"elapsed_ms", 5}}, 409)["error"]["code"] ==
        "batch_closed");
}

TEST_CASE("http: status mapping") {
  CHECK(http_status_for(ReviewError::Kind::no_work_available) == 404);
  CHECK(http_status_for(ReviewError::Kind::unknown_batch) == 404);
  CHECK(http_status_for(ReviewError::Kind::unknown_annotator) == 403);
  CHECK(http_status_for(ReviewError::Kind::lease_expired) == 409);
  CHECK(http_status_for(ReviewError::Kind::batch_closed) == 409);
  CHECK(http_status_for(ReviewError::Kind::foreign_record) == 400);
  CHECK(http_status_for(ReviewError::Kind::incomplete_batch) == 400);
  CHECK(http_status_for(ReviewError::Kind::bad_log) == 500);
}

TEST_CASE("http: static bundle") {
  testutil::TempDir web;
  testutil::write_text(web / "index.html", "<html>review</html>");
  Running srv(corpus("a", 1), {}, web.path());
  auto res = srv.client->Get("/index.html");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == "<html>review</html>");
  ReviewStore store(corpus("a", 1), web / "log.jsonl");
  CHECK_THROWS_AS(ReviewServer(store, web / "missing"), Error);
}
