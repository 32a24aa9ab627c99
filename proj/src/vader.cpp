#include "tweetsent/vader.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "tweetsent/io_util.hpp"

namespace tweetsent {

namespace {

const char* const kDefaultBoosters[] = {
    "absolutely", "amazingly",  "completely", "deeply",    "entirely",
    "especially", "exceptionally", "extremely", "hugely",  "incredibly",
    "majorly",    "really",     "remarkably", "so",        "super",
    "totally",    "truly",      "utterly",    "very"};

const char* const kDefaultNegators[] = {
    "ain't",     "aint",      "aren't",   "arent",    "can't",    "cannot",
    "cant",      "couldn't",  "couldnt",  "didn't",   "didnt",    "doesn't",
    "doesnt",    "don't",     "dont",     "hardly",   "isn't",    "isnt",
    "neither",   "never",     "no",       "none",     "nor",      "not",
    "nothing",   "nowhere",   "scarcely", "shouldn't", "shouldnt", "wasn't",
    "wasnt",     "weren't",   "werent",   "without",  "won't",    "wont",
    "wouldn't",  "wouldnt"};

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    std::size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool is_all_caps(const std::string& token) {
  bool has_alpha = false;
  for (char c : token) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalpha(u)) {
      has_alpha = true;
      if (!std::isupper(u)) return false;
    }
  }
  return has_alpha;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

Lexicon load_lexicon(const std::string& path) {
  Lexicon lex;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields[0].empty()) {
      ++lex.rejected_lines;
      continue;
    }
    double valence = 0.0;
    const std::string value = trim(fields[1]);
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, valence);
    if (ec != std::errc() || ptr != end || !std::isfinite(valence) ||
        valence < -4.0 || valence > 4.0) {
      ++lex.rejected_lines;
      continue;
    }
    lex.valences[fields[0]] = valence;  // last wins
  }
  return lex;
}

std::unordered_set<std::string> load_word_list(const std::string& path) {
  std::unordered_set<std::string> words;
  for (const std::string& line : read_lines(path)) {
    const std::string word = trim(line);
    if (word.empty() || word[0] == '#') continue;
    words.insert(word);
  }
  return words;
}

RuleConfig RuleConfig::defaults() {
  RuleConfig config;
  for (const char* w : kDefaultBoosters) config.boosters.insert(w);
  for (const char* w : kDefaultNegators) config.negators.insert(w);
  return config;
}

double compound_from_sum(double sum, double alpha) {
  return sum / std::sqrt(sum * sum + alpha);
}

SentimentLabel label_from_compound(double compound, double threshold) {
  if (compound >= threshold) return SentimentLabel::Positive;
  if (compound <= -threshold) return SentimentLabel::Negative;
  return SentimentLabel::Neutral;
}

VaderScore score(std::string_view text, const Lexicon& lexicon,
                 const RuleConfig& rules) {
  const std::vector<std::string> tokens = whitespace_tokens(text);

  // All-caps emphasis only applies when the text mixes cases.
  bool any_caps = false;
  bool any_lower = false;
  for (const std::string& tok : tokens) {
    if (is_all_caps(tok)) {
      any_caps = true;
    } else {
      for (char c : tok) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
          any_lower = true;
          break;
        }
      }
    }
  }
  const bool caps_differential = any_caps && any_lower;

  std::vector<std::string> lowered;
  lowered.reserve(tokens.size());
  for (const std::string& tok : tokens) lowered.push_back(to_lower_ascii(tok));

  double sum = 0.0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    double valence = lexicon.valence(lowered[k]);
    if (valence == 0.0) continue;
    if (k > 0 && rules.boosters.count(lowered[k - 1]) > 0) {
      valence += sign_of(valence) * rules.booster_increment;
    }
    const std::size_t window = static_cast<std::size_t>(rules.negation_window);
    const std::size_t lo = k > window ? k - window : 0;
    for (std::size_t b = lo; b < k; ++b) {
      if (rules.negators.count(lowered[b]) > 0) {
        valence *= rules.negation_scalar;
        break;
      }
    }
    if (caps_differential && is_all_caps(tokens[k])) {
      valence += sign_of(valence) * rules.allcaps_increment;
    }
    sum += valence;
  }

  int exclaims = 0;
  for (char c : text) {
    if (c == '!') ++exclaims;
  }
  exclaims = std::min(exclaims, rules.exclaim_cap);
  sum += sign_of(sum) * rules.exclaim_increment * exclaims;

  VaderScore result;
  result.compound = compound_from_sum(sum, rules.alpha);
  result.label = label_from_compound(result.compound, rules.threshold);
  return result;
}

std::vector<std::pair<SentimentLabel, SentimentLabel>> classify_corpus(
    const std::vector<LabeledTweet>& tweets, const Lexicon& lexicon,
    const RuleConfig& rules) {
  std::vector<std::pair<SentimentLabel, SentimentLabel>> pairs;
  pairs.reserve(tweets.size());
  for (const LabeledTweet& tweet : tweets) {
    pairs.emplace_back(tweet.label, score(tweet.text, lexicon, rules).label);
  }
  return pairs;
}

}  // namespace tweetsent
