#ifndef TWEETSENT_NORMALIZE_HPP
#define TWEETSENT_NORMALIZE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace tweetsent {

enum class EmoticonClass { Smiley, Laugh, Love, Wink, Frown, Cry };

// "EMOT_SMILEY", "EMOT_LAUGH", ...
const char* emoticon_keyword(EmoticonClass c);

// Ordered emoticon -> class table. Matching is byte-wise,
// longest-pattern-first; ties resolved by table order.
class EmoticonTable {
 public:
  struct Entry {
    std::string pattern;
    EmoticonClass cls;
  };

  // The table shipped with the toolkit (see data/emoticons.tsv).
  static const EmoticonTable& builtin();

  // One "<emoticon><TAB><CLASS>" mapping per line, '#' comments allowed.
  static EmoticonTable load(const std::string& path);

  void add(std::string pattern, EmoticonClass cls);
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;  // kept sorted longest-first
};

struct NormalizedText {
  std::string text;
};

struct TokenSequence {
  std::vector<std::string> tokens;
};

// Individual rewrite rules, exposed for direct use and testing. Each is a
// pure string -> string function; `normalize` chains them in a fixed order.
std::string replace_hashtags(std::string_view text);
std::string replace_handles(std::string_view text);
std::string replace_urls(std::string_view text);
std::string replace_emoticons(std::string_view text, const EmoticonTable& table);
std::string replace_emoticons(std::string_view text);
std::string annotate_punctuation(std::string_view text);
std::string squeeze_repeats(std::string_view text);

// Full pipeline: urls -> handles -> hashtags -> emoticons -> squeeze ->
// punctuation -> lowercase (rewritten keywords excepted) -> collapse
// whitespace runs and trim. Idempotent.
NormalizedText normalize(std::string_view text, const EmoticonTable& table);
NormalizedText normalize(std::string_view text);

// Splits normalized text on single spaces; never yields empty tokens.
TokenSequence tokenize(const NormalizedText& n);

}  // namespace tweetsent

#endif  // TWEETSENT_NORMALIZE_HPP
