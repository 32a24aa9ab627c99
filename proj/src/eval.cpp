#include "tweetsent/eval.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tweetsent {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t n = 0;
  for (const auto& row : m) {
    for (std::int64_t v : row) n += v;
  }
  return n;
}

std::int64_t ConfusionMatrix::row_sum(int gold) const {
  return m[gold][0] + m[gold][1] + m[gold][2];
}

std::int64_t ConfusionMatrix::col_sum(int pred) const {
  return m[0][pred] + m[1][pred] + m[2][pred];
}

ConfusionMatrix confusion(
    const std::vector<std::pair<SentimentLabel, SentimentLabel>>& pairs) {
  ConfusionMatrix cm;
  for (const auto& [gold, pred] : pairs) ++cm.at(gold, pred);
  return cm;
}

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0
                  : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport report(const ConfusionMatrix& m) {
  EvalReport r;
  r.total = m.total();
  if (r.total == 0) throw std::invalid_argument("report: empty confusion matrix");

  std::int64_t diag = 0;
  for (int c = 0; c < 3; ++c) {
    const std::int64_t tp = m.m[c][c];
    diag += tp;
    r.support[c] = m.row_sum(c);
    r.recall[c] = ratio(tp, m.row_sum(c));
    r.precision[c] = ratio(tp, m.col_sum(c));
    const double pr = r.precision[c] + r.recall[c];
    r.f1[c] = pr == 0.0 ? 0.0 : 2.0 * r.precision[c] * r.recall[c] / pr;
  }
  r.overall_accuracy = ratio(diag, r.total);
  r.macro_f1 = (r.f1[0] + r.f1[1] + r.f1[2]) / 3.0;
  return r;
}

std::string format_rate_2dp(double value) {
  const long hundredths = static_cast<long>(std::floor(value * 100.0 + 0.5));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%ld.%02ld", hundredths / 100,
                hundredths % 100);
  return buf;
}

std::string render_comparison(
    const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t name_width = 5;  // "Model"
  for (const auto& [name, r] : rows) name_width = std::max(name_width, name.size());

  auto pad = [](const std::string& s, std::size_t width) {
    std::string out = s;
    while (out.size() < width) out += ' ';
    return out;
  };
  auto line = [&](const std::string& name, const std::string& overall,
                  const std::string& pos, const std::string& neg,
                  const std::string& neu) {
    std::string out = pad(name, name_width) + "  " + pad(overall, 7) + "  " +
                      pad(pos, 4) + "  " + pad(neg, 4) + "  " + neu;
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };

  std::string out = line("Model", "Overall", "Pos", "Neg", "Neu");
  for (const auto& [name, r] : rows) {
    out += line(name, format_rate_2dp(r.overall_accuracy),
                format_rate_2dp(r.recall[0]), format_rate_2dp(r.recall[1]),
                format_rate_2dp(r.recall[2]));
  }
  return out;
}

namespace {

const std::array<const char*, 3> kClassKeys = {"positive", "negative",
                                               "neutral"};

}  // namespace

std::string report_to_json(const std::string& model_name, const EvalReport& r) {
  nlohmann::ordered_json j;
  j["model"] = model_name;
  j["total"] = r.total;
  j["overall_accuracy"] = r.overall_accuracy;
  for (int c = 0; c < 3; ++c) {
    nlohmann::ordered_json cls;
    cls["support"] = r.support[c];
    cls["accuracy"] = r.recall[c];
    cls["precision"] = r.precision[c];
    cls["f1"] = r.f1[c];
    j[kClassKeys[c]] = cls;
  }
  j["macro_f1"] = r.macro_f1;
  return j.dump(2) + "\n";
}

std::pair<std::string, EvalReport> report_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EvalReport r;
  r.total = j.at("total").get<std::int64_t>();
  r.overall_accuracy = j.at("overall_accuracy").get<double>();
  for (int c = 0; c < 3; ++c) {
    const auto& cls = j.at(kClassKeys[c]);
    r.support[c] = cls.at("support").get<std::int64_t>();
    r.recall[c] = cls.at("accuracy").get<double>();
    r.precision[c] = cls.at("precision").get<double>();
    r.f1[c] = cls.at("f1").get<double>();
  }
  r.macro_f1 = j.at("macro_f1").get<double>();
  return {j.at("model").get<std::string>(), r};
}

}  // namespace tweetsent
