#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seedaug/core/types.hpp"

namespace seedaug {

// Multinomial naive Bayes over lowercased unigrams with add-one smoothing
// over the training vocabulary. The downstream-accuracy proxy: good enough
// to compare augmentation sets against each other, nothing more.
class NaiveBayesClassifier {
 public:
  // Throws MetricsError(empty_corpus).
  static NaiveBayesClassifier train(std::span<const Utterance> corpus);

  // Argmax of the log joint; ties resolve to the smallest intent name.
  std::string classify(std::string_view text) const;

  // log P(intent) + sum over in-vocabulary tokens of log P(token | intent).
  std::map<std::string, double> log_joint(std::string_view text) const;

  double log_prior(const std::string& intent) const;
  double log_likelihood(const std::string& intent, const std::string& token) const;

  bool knows_intent(const std::string& intent) const { return classes_.count(intent) != 0; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::vector<std::string> intents() const;

 private:
  struct ClassStats {
    std::size_t documents = 0;
    std::size_t tokens = 0;
    std::unordered_map<std::string, std::size_t> counts;
  };

  std::map<std::string, ClassStats> classes_;
  std::unordered_map<std::string, std::size_t> vocab_;
  std::size_t documents_ = 0;
};

struct AccuracyResult {
  std::size_t correct = 0;
  std::size_t total = 0;
  double fraction() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

// Throws MetricsError(unknown_intent_in_test) when a test intent was never
// seen in training, and MetricsError(empty_corpus) for an empty test set.
AccuracyResult accuracy(const NaiveBayesClassifier& model, std::span<const Utterance> test);

}  // namespace seedaug
