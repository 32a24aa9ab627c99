#ifndef TWEETSENT_VADER_HPP
#define TWEETSENT_VADER_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tweetsent/corpus.hpp"

namespace tweetsent {

// token -> valence, valence in [-4, 4].
struct Lexicon {
  std::unordered_map<std::string, double> valences;
  int rejected_lines = 0;  // unparsable or out-of-range entries

  double valence(const std::string& token) const {
    auto it = valences.find(token);
    return it == valences.end() ? 0.0 : it->second;
  }
};

// Tab-separated "token<TAB>valence" lines; extra trailing fields are
// ignored so the published VADER lexicon file can be used as-is.
// Duplicate tokens: last wins. Bad lines are rejected and counted.
Lexicon load_lexicon(const std::string& path);

// One token per line, '#' comments allowed.
std::unordered_set<std::string> load_word_list(const std::string& path);

struct RuleConfig {
  double booster_increment = 0.293;   // adjacent booster word
  double negation_scalar = -0.74;     // negator within the window
  double allcaps_increment = 0.733;   // all-caps emphasis
  double exclaim_increment = 0.292;   // per '!', capped at 4 marks
  int exclaim_cap = 4;
  double alpha = 15.0;                // compound normalization constant
  double threshold = 0.05;            // +- class boundary
  int negation_window = 3;            // tokens looked back for a negator

  std::unordered_set<std::string> boosters;  // defaults from data/boosters.txt
  std::unordered_set<std::string> negators;  // defaults from data/negators.txt

  static RuleConfig defaults();
};

struct VaderScore {
  double compound = 0.0;  // in (-1, 1)
  SentimentLabel label = SentimentLabel::Neutral;
};

// S / sqrt(S^2 + alpha): odd, strictly increasing, bounded by (-1, 1).
double compound_from_sum(double sum, double alpha);

SentimentLabel label_from_compound(double compound, double threshold);

// Scores raw (un-normalized) text. Tokens are whitespace-split with case
// and punctuation preserved; per-token valence comes from the lexicon
// (lower-cased lookup), then booster, negation, and all-caps rules apply
// in that order; the valence sum picks up the exclamation emphasis before
// normalization into the compound score.
VaderScore score(std::string_view text, const Lexicon& lexicon,
                 const RuleConfig& rules);

// (gold, predicted) pairs, in corpus order. Uses the tweets' text as
// given: pass raw text for a faithful baseline comparison.
std::vector<std::pair<SentimentLabel, SentimentLabel>> classify_corpus(
    const std::vector<LabeledTweet>& tweets, const Lexicon& lexicon,
    const RuleConfig& rules);

}  // namespace tweetsent

#endif  // TWEETSENT_VADER_HPP
