#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include <json.hpp>

#include "seedaug/core/text.hpp"
#include "seedaug/metrics/bleu.hpp"
#include "seedaug/metrics/metrics_error.hpp"
#include "seedaug/metrics/mtld.hpp"
#include "seedaug/metrics/naive_bayes.hpp"
#include "seedaug/metrics/report.hpp"
#include "seedaug/review/review_types.hpp"
#include "support/oracles.hpp"

using namespace seedaug;

namespace {

TokenSequence ts(std::vector<std::string> t) { return TokenSequence{std::move(t)}; }
TokenSequence tk(const std::string& s) { return tokenize(s); }

std::vector<std::string> random_tokens(std::mt19937_64& g, std::size_t n, std::size_t vocab) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(g() % vocab));
  return out;
}

}  // namespace

// ---- MTLD ----

TEST_CASE("mtld hand values") {
  CHECK(mtld(ts({"a", "a", "a", "a"})) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mtld(ts({"a", "b", "a", "b", "a", "b"})) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(mtld(ts({"a", "b"})) == 2.0);
  CHECK(mtld(ts({})) == 0.0);
  std::vector<std::string> uniq;
  for (int i = 0; i < 37; ++i) uniq.push_back("t" + std::to_string(i));
  CHECK(mtld(ts(uniq)) == 37.0);
}

TEST_CASE("mtld partial factor") {
  // a a b: forward a(1) a a(.5) -> factor, then b (ttr 1) -> partial 0 -> 3/1
  // backward b a(1) b a a(.667) -> factor -> 3/1
  CHECK(mtld(ts({"a", "a", "b"})) == doctest::Approx(3.0));
  // a b c a a: forward ttr 1,1,1,.75,.6 -> factor at 5 -> 5/1
  // backward a a -> factor; a c b (ttr 1) partial 0 -> 5/1
  CHECK(mtld(ts({"a", "b", "c", "a", "a"})) == doctest::Approx(5.0));
  // a b a: forward ttr 1,1,.667 -> factor -> 3; backward a b a same -> 3
  CHECK(mtld(ts({"a", "b", "a"})) == doctest::Approx(3.0));
  // a b c a b: ttr 1,1,1,.75,.6 -> factor at 5 -> 5
  // a b c a: trailing .75 -> (1-.75)/(1-.72) = 0.892857.. -> 4/0.892857
  CHECK(mtld(ts({"a", "b", "c", "a"})) == doctest::Approx(4.0 / (0.25 / 0.28)).epsilon(1e-12));
}

TEST_CASE("mtld matches the oracle on random corpora") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = random_tokens(g, 1 + g() % 300, 2 + g() % 60);
    CHECK(std::abs(mtld(ts(t)) - oracle::mtld(t)) <= 1e-9);
  }
}

TEST_CASE("mtld properties") {
  std::mt19937_64 g(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = random_tokens(g, 1 + g() % 100, 2 + g() % 30);
    std::vector<std::string> r(t.rbegin(), t.rend());
    CHECK(mtld(ts(t)) == doctest::Approx(mtld(ts(r))).epsilon(1e-12));
  }
  for (std::size_t n = 4; n < 60; ++n) {
    std::vector<std::string> uniq, constant(n, "x");
    for (std::size_t i = 0; i < n; ++i) uniq.push_back("u" + std::to_string(i));
    CHECK(mtld(ts(uniq)) > mtld(ts(constant)));
  }
  MtldConfig strict{0.9};
  CHECK(mtld(ts({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "a"}), strict) ==
        doctest::Approx(oracle::mtld({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "a"}, 0.9)));
}

// ---- BLEU ----

TEST_CASE("bleu hand values") {
  std::vector<TokenSequence> refs = {tk("a b c e")};
  CHECK(sentence_bleu(tk("a b c d"), refs) == doctest::Approx(0.59460).epsilon(1e-4));
  CHECK(std::abs(sentence_bleu(tk("a b c d"), refs) - std::pow(0.75 * (2.0 / 3.0) * 0.5 * 0.5, 0.25)) < 1e-12);
  std::vector<TokenSequence> same = {tk("book a flight to boston")};
  CHECK(sentence_bleu(tk("book a flight to boston"), same) == doctest::Approx(1.0));
  CHECK(sentence_bleu(tk("zebra"), same) == 0.0);
  CHECK_THROWS_AS(sentence_bleu(tk(""), same), MetricsError);
  CHECK_THROWS_AS(sentence_bleu(tk("a"), std::vector<TokenSequence>{}), MetricsError);
}

TEST_CASE("bleu brevity penalty uses the closest reference, shorter on ties") {
  // candidate length 3; references of length 2 and 4 are equally close -> r = 2, no penalty
  std::vector<TokenSequence> refs = {tk("a b"), tk("a b c d")};
  CHECK(sentence_bleu(tk("a b c"), refs) == doctest::Approx(oracle::bleu({"a", "b", "c"}, {{"a", "b"}, {"a", "b", "c", "d"}})));
  std::vector<TokenSequence> longer = {tk("a b c d e f")};
  double got = sentence_bleu(tk("a b c"), longer);
  CHECK(got == doctest::Approx(std::exp(1.0 - 6.0 / 3.0)).epsilon(1e-12));
  CHECK(got == doctest::Approx(oracle::bleu({"a", "b", "c"}, {{"a", "b", "c", "d", "e", "f"}})).epsilon(1e-12));
}

TEST_CASE("bleu matches the oracle and its properties on random inputs") {
  std::mt19937_64 g(13);
  for (int trial = 0; trial < 300; ++trial) {
    auto cand = random_tokens(g, 1 + g() % 8, 6);
    std::vector<std::vector<std::string>> refs;
    std::vector<TokenSequence> rts;
    for (std::size_t k = 0; k < 1 + g() % 5; ++k) {
      refs.push_back(random_tokens(g, 1 + g() % 8, 6));
      rts.push_back(ts(refs.back()));
    }
    double s = sentence_bleu(ts(cand), rts);
    CHECK(std::abs(s - oracle::bleu(cand, refs)) < 1e-12);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0 + 1e-12);
    auto rev = rts;
    std::reverse(rev.begin(), rev.end());
    CHECK(sentence_bleu(ts(cand), rev) == doctest::Approx(s).epsilon(1e-12));
    rts.push_back(ts(cand));
    CHECK(sentence_bleu(ts(cand), rts) == doctest::Approx(1.0));
  }
}

TEST_CASE("incremental reference set equals batch scoring") {
  std::mt19937_64 g(14);
  BleuReferenceSet set;
  std::vector<TokenSequence> refs;
  for (int i = 0; i < 40; ++i) {
    auto r = ts(random_tokens(g, 1 + g() % 10, 12));
    set.add(r);
    refs.push_back(r);
    auto c = ts(random_tokens(g, 1 + g() % 10, 12));
    CHECK(set.score(c) == sentence_bleu(c, refs));
  }
  CHECK(set.size() == 40);
}

// ---- naive Bayes ----

TEST_CASE("naive bayes matches hand log sums") {
  std::vector<Utterance> corpus = {
      Utterance::seed("book a flight", "book"),       Utterance::seed("book a ticket", "book"),
      Utterance::seed("reserve a seat", "book"),      Utterance::seed("book flight now", "book"),
      Utterance::seed("cancel my flight", "cancel"),  Utterance::seed("cancel the ticket", "cancel"),
      Utterance::seed("drop my booking", "cancel"),   Utterance::seed("cancel it", "cancel"),
      Utterance::seed("flight status", "status"),     Utterance::seed("is my flight late", "status"),
      Utterance::seed("status of my ticket", "status"), Utterance::seed("when do we land", "status"),
  };
  auto nb = NaiveBayesClassifier::train(corpus);

  // Independent counts.
  std::map<std::string, std::map<std::string, int>> counts;
  std::map<std::string, int> totals, docs;
  std::set<std::string> vocab;
  for (const auto& u : corpus) {
    docs[u.intent]++;
    for (const auto& t : tokenize(u.text).tokens) {
      counts[u.intent][t]++;
      totals[u.intent]++;
      vocab.insert(t);
    }
  }
  CHECK(nb.vocab_size() == vocab.size());
  const double V = static_cast<double>(vocab.size());
  for (const std::string text : {"book my flight", "cancel flight", "zzz unknown", "is the ticket late now"}) {
    auto joint = nb.log_joint(text);
    std::string best;
    double best_score = -1e300;
    for (const auto& [intent, d] : docs) {
      double s = std::log(d / 12.0);
      for (const auto& t : tokenize(text).tokens) {
        if (!vocab.count(t)) continue;
        s += std::log((counts[intent][t] + 1.0) / (totals[intent] + V));
      }
      CHECK(std::abs(joint.at(intent) - s) < 1e-9);
      if (s > best_score) {
        best_score = s;
        best = intent;
      }
    }
    CHECK(nb.classify(text) == best);
  }
  // all-OOV input: equal priors, so the smallest intent name wins
  CHECK(nb.classify("zzz") == "book");
}

TEST_CASE("naive bayes basics") {
  std::vector<Utterance> disjoint = {Utterance::seed("alpha beta", "a"), Utterance::seed("beta gamma", "a"),
                                     Utterance::seed("delta eps", "b"), Utterance::seed("eps zeta", "b")};
  auto nb = NaiveBayesClassifier::train(disjoint);
  CHECK(accuracy(nb, disjoint).fraction() == 1.0);
  std::vector<Utterance> test = {Utterance::seed("gamma alpha", "a"), Utterance::seed("zeta", "b")};
  auto acc = accuracy(nb, test);
  CHECK(acc.correct == 2);
  CHECK(acc.total == 2);

  auto single = NaiveBayesClassifier::train(std::vector<Utterance>{Utterance::seed("x y", "only")});
  CHECK(single.classify("anything at all") == "only");
  CHECK(single.classify("x") == "only");

  CHECK_THROWS_AS(NaiveBayesClassifier::train(std::vector<Utterance>{}), MetricsError);
  std::vector<Utterance> foreign = {Utterance::seed("x", "c")};
  CHECK_THROWS_AS(accuracy(nb, foreign), MetricsError);
  CHECK_THROWS_AS(accuracy(nb, std::vector<Utterance>{}), MetricsError);
}

TEST_CASE("naive bayes keeps its decisions when the corpus is duplicated") {
  // Not a theorem under add-one smoothing, but holds on separable fixtures.
  std::vector<Utterance> corpus = {Utterance::seed("book a flight", "book"), Utterance::seed("book a seat", "book"),
                                   Utterance::seed("cancel my flight", "cancel"),
                                   Utterance::seed("cancel booking", "cancel"), Utterance::seed("flight status", "status"),
                                   Utterance::seed("status please", "status")};
  auto doubled = corpus;
  doubled.insert(doubled.end(), corpus.begin(), corpus.end());
  auto a = NaiveBayesClassifier::train(corpus);
  auto b = NaiveBayesClassifier::train(doubled);
  for (const std::string q : {"book", "cancel flight", "status", "book flight", "a seat please", "my booking"})
    CHECK(a.classify(q) == b.classify(q));
}

// ---- report ----

namespace {

AugmentationRecord rec(const std::string& id, const std::string& text, MethodId m,
                       std::optional<MethodId> strategy = std::nullopt) {
  AugmentationRecord r;
  r.id = id;
  r.utterance = Utterance::derived(Utterance::seed("seed text", "x"), text, m);
  r.method = m;
  r.strategy = strategy;
  return r;
}

ReviewRecord review(const std::string& id, ReviewDecision d, const std::string& batch, std::int64_t ms) {
  return ReviewRecord{id, "ann", batch, d, ms, "2026-01-01T00:00:00.000Z"};
}

}  // namespace

TEST_CASE("rounding conventions") {
  CHECK(round_percent(73, 90) == 81.1);
  CHECK(round_percent(1, 3) == 33.3);
  CHECK(round_percent(2, 3) == 66.7);
  CHECK(round_to(1.005 * 1000, 0) == 1005);
  CHECK(round_to(1.5, 0) == 2.0);
}

TEST_CASE("report rows, rates and timing") {
  std::vector<AugmentationRecord> records;
  std::vector<ReviewRecord> reviews;
  for (int i = 0; i < 90; ++i) {
    records.push_back(rec("t" + std::to_string(i), "typo text " + std::to_string(i), MethodId::typo));
    reviews.push_back(review("t" + std::to_string(i), i < 73 ? ReviewDecision::accept : ReviewDecision::reject,
                             i < 50 ? "b1" : "b2", i < 50 ? 90000 : 30000));
  }
  records.push_back(rec("e0", "eda text", MethodId::eda));
  records.push_back(rec("m0", "mixed text", MethodId::typo, MethodId::mix_all));
  auto report = build_report(records, reviews, {{"typo", 87.5}, {"baseline", 62.9}});
  REQUIRE(report.rows.size() == 4);
  CHECK(report.rows[0].method == "eda");
  CHECK(report.rows[1].method == "typo");
  CHECK(report.rows[2].method == "mix_all");
  CHECK(report.rows[3].method == "baseline");
  const auto& typo = report.rows[1];
  CHECK(typo.num_augment == 90);
  CHECK(typo.accept_rate_pct == 81.1);
  CHECK(typo.time_spent_min == 1.0);  // (1.5 + 0.5) / 2
  CHECK(typo.accuracy_pct == 87.5);
  CHECK(typo.reviewed == 90);
  CHECK(typo.accepted == 73);
  CHECK_FALSE(report.rows[0].accept_rate_pct);
  CHECK_FALSE(report.rows[0].time_spent_min);
  CHECK(report.rows[3].num_augment == 0);
  CHECK_FALSE(report.rows[3].diversity_mtld);
  CHECK(report.total_augment == 92);
  std::size_t sum = 0;
  for (const auto& r : report.rows) sum += r.num_augment;
  CHECK(sum == report.total_augment);

  std::vector<std::string> all;
  for (int i = 0; i < 90; ++i)
    for (auto& t : tokenize("typo text " + std::to_string(i)).tokens) all.push_back(t);
  CHECK(*typo.diversity_mtld == doctest::Approx(std::round(oracle::mtld(all) * 10) / 10));

  auto j = nlohmann::json::parse(report_to_json(report));
  CHECK(j["rows"][0]["accept_rate_pct"].is_null());
  CHECK(j["rows"][1]["accept_rate_pct"] == 81.1);
  CHECK(j["total_augment"] == 92);
  CHECK(j["metadata"]["diversity_scope"].is_string());
}

TEST_CASE("report table follows the column order") {
  std::vector<AugmentationRecord> records = {rec("a", "one two", MethodId::eda)};
  auto table = report_to_table(build_report(records, {}, {}));
  auto first_line = table.substr(0, table.find('\n'));
  std::vector<std::string> cols = {"Method", "# Augment", "Diversity", "Accuracy", "Time Spent", "Accept Rate"};
  std::size_t pos = 0;
  for (const auto& c : cols) {
    auto p = first_line.find(c, pos);
    CHECK(p != std::string::npos);
    pos = p + c.size();
  }
  CHECK(table.find("Total") != std::string::npos);
  CHECK(table.find("---") != std::string::npos);
}

TEST_CASE("report rejects dangling reviews") {
  std::vector<AugmentationRecord> records = {rec("a", "one two", MethodId::eda)};
  std::vector<ReviewRecord> reviews = {review("zzz", ReviewDecision::accept, "b1", 1)};
  try {
    build_report(records, reviews, {});
    FAIL("expected DanglingReview");
  } catch (const MetricsError& e) {
    CHECK(e.kind() == MetricsError::Kind::dangling_review);
  }
}
