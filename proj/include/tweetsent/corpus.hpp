#ifndef TWEETSENT_CORPUS_HPP
#define TWEETSENT_CORPUS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tweetsent {

// Index order is fixed: it drives one-hot encoding and confusion-matrix
// layout everywhere else.
enum class SentimentLabel { Positive = 0, Negative = 1, Neutral = 2 };

inline constexpr std::array<SentimentLabel, 3> kAllLabels = {
    SentimentLabel::Positive, SentimentLabel::Negative, SentimentLabel::Neutral};

const char* to_string(SentimentLabel label);
std::optional<SentimentLabel> sentiment_from_string(std::string_view s);

// The seven source datasets, in the canonical order used for merging and
// for manifest output.
enum class DatasetId {
  StsTest = 0,
  Hcr,
  Omd,
  SsTwitter,
  Sanders,
  Semeval,
  StsGold,
};

inline constexpr int kDatasetCount = 7;

const char* to_string(DatasetId id);
std::optional<DatasetId> dataset_from_string(std::string_view s);

struct RawRecord {
  DatasetId source;
  std::string text;       // non-empty after trim
  std::string raw_label;  // uninterpreted source label string
};

struct LabeledTweet {
  DatasetId source;
  std::string text;
  SentimentLabel label;
};

struct LabelCounts {
  std::int64_t positive = 0;
  std::int64_t negative = 0;
  std::int64_t neutral = 0;
  std::int64_t dropped = 0;

  std::int64_t retained() const { return positive + negative + neutral; }
  std::int64_t total() const { return retained() + dropped; }
  void add(SentimentLabel label);
};

struct CorpusManifest {
  // Slot per dataset in canonical order; `present` marks sources that
  // contributed at least one input record.
  std::array<LabelCounts, kDatasetCount> per_source{};
  std::array<bool, kDatasetCount> present{};
  LabelCounts total;

  // JSON with fixed key order: each present source then "total", each
  // holding {positive, negative, neutral, dropped}.
  std::string to_json() const;
};

struct DatasetSplit {
  std::vector<LabeledTweet> train;
  std::vector<LabeledTweet> test;
  std::uint64_t seed = 0;
  double test_fraction = 0.0;
};

// Reads one CSV file under the source's schema (see docs/datasets.md).
// RFC-4180 quoting, UTF-8, header row required. Throws on missing file,
// missing schema columns, or malformed rows (row number reported).
std::vector<RawRecord> load_dataset(const std::string& path, DatasetId source);

// Case-insensitive mapping of a source's label vocabulary onto the three
// retained classes. nullopt means the record is dropped.
std::optional<SentimentLabel> normalize_label(std::string_view raw_label,
                                              DatasetId source);

// Harmonizes labels, drops out-of-scope ones, and merges. Output order is
// canonical source order, then input row order within a source.
std::pair<std::vector<LabeledTweet>, CorpusManifest> build_corpus(
    const std::vector<RawRecord>& records);

// Fisher-Yates shuffle (Rng, see rng.hpp) then split: the last
// round(test_fraction * N) elements form the test set.
DatasetSplit shuffle_split(const std::vector<LabeledTweet>& corpus,
                           double test_fraction, std::uint64_t seed);

// The per-dataset variant: each source's tweets are shuffled and split
// separately (sources in canonical order, one shared generator), then
// concatenated.
DatasetSplit shuffle_split_per_source(const std::vector<LabeledTweet>& corpus,
                                      double test_fraction, std::uint64_t seed);

}  // namespace tweetsent

#endif  // TWEETSENT_CORPUS_HPP
