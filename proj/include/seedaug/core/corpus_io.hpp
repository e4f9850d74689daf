#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "seedaug/core/error.hpp"
#include "seedaug/core/types.hpp"

namespace seedaug {

class CorpusError : public Error {
 public:
  enum class Kind { malformed_line, duplicate_seed, empty_intent, io };

  CorpusError(Kind kind, std::size_t line, std::string message)
      : Error(std::move(message)), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  // 1-based line number; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

// Seed files are JSONL with one {"intent": ..., "text": ...} per line.
// Blank lines are skipped.
SeedSet parse_seed_set(std::istream& in);
SeedSet load_seed_set(const std::filesystem::path& path);

// Flat list of labeled utterances in seed-file format (used for
// train/test corpora, where repeated texts are allowed).
std::vector<Utterance> load_labeled_corpus(const std::filesystem::path& path);

std::string serialize_record(const AugmentationRecord& record);
AugmentationRecord parse_record(std::string_view line, std::size_t line_no);

std::string serialize_records(std::span<const AugmentationRecord> records);
void write_augmentations(std::span<const AugmentationRecord> records,
                         const std::filesystem::path& path);
std::vector<AugmentationRecord> parse_augmentations(std::istream& in);
std::vector<AugmentationRecord> load_augmentations(const std::filesystem::path& path);

}  // namespace seedaug
