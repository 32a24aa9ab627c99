#ifndef TWEETSENT_EVAL_HPP
#define TWEETSENT_EVAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tweetsent/corpus.hpp"

namespace tweetsent {

// Rows = gold label, columns = predicted label, index order
// (Positive, Negative, Neutral).
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, 3>, 3> m{};

  std::int64_t& at(SentimentLabel gold, SentimentLabel pred) {
    return m[static_cast<int>(gold)][static_cast<int>(pred)];
  }
  std::int64_t at(SentimentLabel gold, SentimentLabel pred) const {
    return m[static_cast<int>(gold)][static_cast<int>(pred)];
  }
  std::int64_t total() const;
  std::int64_t row_sum(int gold) const;
  std::int64_t col_sum(int pred) const;
};

ConfusionMatrix confusion(
    const std::vector<std::pair<SentimentLabel, SentimentLabel>>& pairs);

// Per-class accuracy is the recall of that class (diagonal over gold row
// sum). Zero-denominator cases are defined as 0.
struct EvalReport {
  double overall_accuracy = 0.0;
  std::array<double, 3> recall{};     // "Pos/Neg/Neu accuracy"
  std::array<double, 3> precision{};
  std::array<double, 3> f1{};
  double macro_f1 = 0.0;
  std::array<std::int64_t, 3> support{};  // gold row sums
  std::int64_t total = 0;
};

EvalReport report(const ConfusionMatrix& m);  // throws on an empty matrix

// Round-half-up to two decimals: 0.675 renders as "0.68".
std::string format_rate_2dp(double value);

// Fixed-column text table, columns Model / Overall / Pos / Neg / Neu.
std::string render_comparison(
    const std::vector<std::pair<std::string, EvalReport>>& rows);

inline std::string compare(const std::pair<std::string, EvalReport>& a,
                           const std::pair<std::string, EvalReport>& b) {
  return render_comparison({a, b});
}

// Machine-readable dump with stable key order, and its inverse.
std::string report_to_json(const std::string& model_name, const EvalReport& r);
std::pair<std::string, EvalReport> report_from_json(const std::string& text);

}  // namespace tweetsent

#endif  // TWEETSENT_EVAL_HPP
