#include "seedaug/metrics/naive_bayes.hpp"

#include <cmath>

#include "seedaug/core/text.hpp"
#include "seedaug/metrics/metrics_error.hpp"

namespace seedaug {

NaiveBayesClassifier NaiveBayesClassifier::train(std::span<const Utterance> corpus) {
  if (corpus.empty()) throw MetricsError(MetricsError::Kind::empty_corpus, "training corpus is empty");
  NaiveBayesClassifier m;
  for (const auto& u : corpus) {
    auto& cls = m.classes_[u.intent];
    ++cls.documents;
    ++m.documents_;
    for (auto& tok : tokenize(u.text).tokens) {
      ++cls.tokens;
      ++cls.counts[tok];
      ++m.vocab_[tok];
    }
  }
  return m;
}

double NaiveBayesClassifier::log_prior(const std::string& intent) const {
  const auto& cls = classes_.at(intent);
  return std::log(static_cast<double>(cls.documents) / static_cast<double>(documents_));
}

double NaiveBayesClassifier::log_likelihood(const std::string& intent, const std::string& token) const {
  const auto& cls = classes_.at(intent);
  auto it = cls.counts.find(token);
  const double count = it == cls.counts.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((count + 1.0) / static_cast<double>(cls.tokens + vocab_.size()));
}

std::map<std::string, double> NaiveBayesClassifier::log_joint(std::string_view text) const {
  auto tokens = tokenize(text).tokens;
  std::map<std::string, double> out;
  for (const auto& [intent, cls] : classes_) {
    double score = log_prior(intent);
    for (const auto& tok : tokens) {
      if (vocab_.count(tok)) score += log_likelihood(intent, tok);
    }
    out.emplace(intent, score);
  }
  return out;
}

std::string NaiveBayesClassifier::classify(std::string_view text) const {
  const std::string* best = nullptr;
  double best_score = 0.0;
  for (const auto& [intent, score] : log_joint(text)) {
    if (!best || score > best_score) {
      best = &intent;
      best_score = score;
    }
  }
  return *best;
}

std::vector<std::string> NaiveBayesClassifier::intents() const {
  std::vector<std::string> out;
  for (const auto& [intent, cls] : classes_) out.push_back(intent);
  return out;
}

AccuracyResult accuracy(const NaiveBayesClassifier& model, std::span<const Utterance> test) {
  if (test.empty()) throw MetricsError(MetricsError::Kind::empty_corpus, "test corpus is empty");
  AccuracyResult r;
  for (const auto& u : test) {
    if (!model.knows_intent(u.intent))
      throw MetricsError(MetricsError::Kind::unknown_intent_in_test, "intent not in training data: " + u.intent);
  }
  for (const auto& u : test) {
    ++r.total;
    if (model.classify(u.text) == u.intent) ++r.correct;
  }
  return r;
}

}  // namespace seedaug
