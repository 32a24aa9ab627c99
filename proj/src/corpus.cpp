#include "tweetsent/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tweetsent/io_util.hpp"
#include "tweetsent/rng.hpp"

namespace tweetsent {

namespace {

const std::array<const char*, 3> kLabelNames = {"positive", "negative",
                                                "neutral"};
const std::array<const char*, kDatasetCount> kDatasetNames = {
    "sts_test", "hcr", "omd", "ss_twitter", "sanders", "semeval", "sts_gold"};

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t row_number;  // 1-based, header is row 1
};

// Minimal RFC-4180 reader: quoted fields, doubled-quote escapes, embedded
// commas and newlines, CRLF or LF endings.
std::vector<CsvRow> parse_csv(const std::string& content,
                              const std::string& path) {
  std::vector<CsvRow> rows;
  std::size_t i = 0;
  std::size_t n = content.size();
  if (n >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;  // BOM

  std::vector<std::string> fields;
  std::string field;
  std::size_t row_number = 1;
  bool in_quotes = false;
  bool row_started = false;

  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(CsvRow{std::move(fields), row_number});
    fields.clear();
    ++row_number;
    row_started = false;
  };

  while (i < n) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && content[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          in_quotes = false;
          ++i;
          if (i < n && content[i] != ',' && content[i] != '\n' &&
              content[i] != '\r') {
            throw std::runtime_error(path + ": row " +
                                     std::to_string(row_number) +
                                     ": malformed quoted field");
          }
        }
      } else {
        field += c;
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw std::runtime_error(path + ": row " +
                                   std::to_string(row_number) +
                                   ": quote inside unquoted field");
        }
        in_quotes = true;
        row_started = true;
        ++i;
        break;
      case ',':
        end_field();
        row_started = true;
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        if (row_started || !field.empty() || !fields.empty()) end_row();
        ++i;
        break;
      default:
        field += c;
        row_started = true;
        ++i;
        break;
    }
  }
  if (in_quotes) {
    throw std::runtime_error(path + ": row " + std::to_string(row_number) +
                             ": unterminated quoted field");
  }
  if (row_started || !field.empty() || !fields.empty()) end_row();
  return rows;
}

struct SourceSchema {
  const char* text_column;
  const char* label_column;
};

// Column layouts are documented in docs/datasets.md.
SourceSchema schema_for(DatasetId source) {
  switch (source) {
    case DatasetId::StsTest:
      return {"text", "polarity"};
    case DatasetId::StsGold:
      return {"tweet", "polarity"};
    case DatasetId::Hcr:
    case DatasetId::Omd:
    case DatasetId::SsTwitter:
    case DatasetId::Sanders:
    case DatasetId::Semeval:
      return {"text", "sentiment"};
  }
  throw std::logic_error("unknown dataset id");
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name, const std::string& path) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (to_lower_ascii(trim(header[k])) == name) return k;
  }
  throw std::runtime_error(path + ": header is missing column '" + name + "'");
}

}  // namespace

const char* to_string(SentimentLabel label) {
  return kLabelNames[static_cast<int>(label)];
}

std::optional<SentimentLabel> sentiment_from_string(std::string_view s) {
  const std::string t = to_lower_ascii(trim(s));
  for (int k = 0; k < 3; ++k) {
    if (t == kLabelNames[k]) return static_cast<SentimentLabel>(k);
  }
  return std::nullopt;
}

const char* to_string(DatasetId id) { return kDatasetNames[static_cast<int>(id)]; }

std::optional<DatasetId> dataset_from_string(std::string_view s) {
  const std::string t = to_lower_ascii(trim(s));
  for (int k = 0; k < kDatasetCount; ++k) {
    if (t == kDatasetNames[k]) return static_cast<DatasetId>(k);
  }
  return std::nullopt;
}

void LabelCounts::add(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::Positive: ++positive; break;
    case SentimentLabel::Negative: ++negative; break;
    case SentimentLabel::Neutral: ++neutral; break;
  }
}

std::string CorpusManifest::to_json() const {
  nlohmann::ordered_json j;
  auto counts_json = [](const LabelCounts& c) {
    nlohmann::ordered_json o;
    o["positive"] = c.positive;
    o["negative"] = c.negative;
    o["neutral"] = c.neutral;
    o["dropped"] = c.dropped;
    return o;
  };
  for (int k = 0; k < kDatasetCount; ++k) {
    if (present[k]) j[kDatasetNames[k]] = counts_json(per_source[k]);
  }
  j["total"] = counts_json(total);
  return j.dump(2) + "\n";
}

std::vector<RawRecord> load_dataset(const std::string& path, DatasetId source) {
  const std::string content = read_file(path);
  const std::vector<CsvRow> rows = parse_csv(content, path);
  if (rows.empty()) {
    throw std::runtime_error(path + ": empty file (header row required)");
  }
  const SourceSchema schema = schema_for(source);
  const std::vector<std::string>& header = rows[0].fields;
  const std::size_t text_col = find_column(header, schema.text_column, path);
  const std::size_t label_col = find_column(header, schema.label_column, path);

  std::vector<RawRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw std::runtime_error(
          path + ": row " + std::to_string(row.row_number) + ": expected " +
          std::to_string(header.size()) + " fields, found " +
          std::to_string(row.fields.size()));
    }
    const std::string& text = row.fields[text_col];
    if (trim(text).empty()) {
      throw std::runtime_error(path + ": row " +
                               std::to_string(row.row_number) +
                               ": empty text field");
    }
    records.push_back(RawRecord{source, text, row.fields[label_col]});
  }
  return records;
}

std::optional<SentimentLabel> normalize_label(std::string_view raw_label,
                                              DatasetId source) {
  const std::string t = to_lower_ascii(trim(raw_label));
  if (auto label = sentiment_from_string(t)) return label;
  // STS polarity codes: 0 negative, 2 neutral, 4 positive.
  if (source == DatasetId::StsTest || source == DatasetId::StsGold) {
    if (t == "0") return SentimentLabel::Negative;
    if (t == "2") return SentimentLabel::Neutral;
    if (t == "4") return SentimentLabel::Positive;
  }
  // Everything else (irrelevant, other, mixed, unsure, objective, unknown
  // strings) is dropped.
  return std::nullopt;
}

std::pair<std::vector<LabeledTweet>, CorpusManifest> build_corpus(
    const std::vector<RawRecord>& records) {
  std::vector<LabeledTweet> tweets;
  CorpusManifest manifest;
  for (int s = 0; s < kDatasetCount; ++s) {
    const DatasetId source = static_cast<DatasetId>(s);
    for (const RawRecord& rec : records) {
      if (rec.source != source) continue;
      manifest.present[s] = true;
      if (auto label = normalize_label(rec.raw_label, source)) {
        manifest.per_source[s].add(*label);
        manifest.total.add(*label);
        tweets.push_back(LabeledTweet{source, rec.text, *label});
      } else {
        ++manifest.per_source[s].dropped;
        ++manifest.total.dropped;
      }
    }
  }
  return {std::move(tweets), manifest};
}

namespace {

std::size_t test_count_for(std::size_t n, double fraction) {
  return static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
}

void check_split_args(std::size_t n, double fraction) {
  if (n == 0) throw std::invalid_argument("shuffle_split: empty corpus");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument(
        "shuffle_split: test fraction must be in (0,1)");
  }
}

}  // namespace

DatasetSplit shuffle_split(const std::vector<LabeledTweet>& corpus,
                           double test_fraction, std::uint64_t seed) {
  check_split_args(corpus.size(), test_fraction);
  std::vector<LabeledTweet> shuffled = corpus;
  Rng rng(seed);
  rng.shuffle(shuffled);
  const std::size_t test_n = test_count_for(shuffled.size(), test_fraction);
  DatasetSplit split;
  split.seed = seed;
  split.test_fraction = test_fraction;
  split.train.assign(shuffled.begin(),
                     shuffled.end() - static_cast<std::ptrdiff_t>(test_n));
  split.test.assign(shuffled.end() - static_cast<std::ptrdiff_t>(test_n),
                    shuffled.end());
  return split;
}

DatasetSplit shuffle_split_per_source(const std::vector<LabeledTweet>& corpus,
                                      double test_fraction,
                                      std::uint64_t seed) {
  check_split_args(corpus.size(), test_fraction);
  DatasetSplit split;
  split.seed = seed;
  split.test_fraction = test_fraction;
  Rng rng(seed);
  for (int s = 0; s < kDatasetCount; ++s) {
    std::vector<LabeledTweet> group;
    for (const LabeledTweet& t : corpus) {
      if (t.source == static_cast<DatasetId>(s)) group.push_back(t);
    }
    if (group.empty()) continue;
    rng.shuffle(group);
    const std::size_t test_n = test_count_for(group.size(), test_fraction);
    split.train.insert(split.train.end(), group.begin(),
                       group.end() - static_cast<std::ptrdiff_t>(test_n));
    split.test.insert(split.test.end(),
                      group.end() - static_cast<std::ptrdiff_t>(test_n),
                      group.end());
  }
  return split;
}

}  // namespace tweetsent
