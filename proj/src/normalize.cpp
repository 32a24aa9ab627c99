#include "tweetsent/normalize.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "tweetsent/io_util.hpp"

namespace tweetsent {

namespace {

// Word constituents: ASCII alphanumerics, '_', and any byte >= 0x80
// (multi-byte UTF-8 sequences are opaque word material, never punctuation).
bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

bool is_punct_byte(unsigned char c) {
  return !is_word_byte(c) && !is_space_byte(c);
}

bool has_prefix_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    unsigned char a = static_cast<unsigned char>(text[pos + k]);
    if (std::tolower(a) != static_cast<unsigned char>(prefix[k])) return false;
  }
  return true;
}

// Rewrites '<sigil><word>' to '<keyword_prefix><word>'. When
// `word_start_only` is set the sigil must not be preceded by a word byte.
std::string replace_sigil(std::string_view text, char sigil,
                          std::string_view keyword_prefix, bool word_start_only) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == sigil && i + 1 < text.size() &&
        is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      bool at_word_start =
          i == 0 || !is_word_byte(static_cast<unsigned char>(text[i - 1]));
      if (!word_start_only || at_word_start) {
        out += keyword_prefix;
        ++i;
        while (i < text.size() &&
               is_word_byte(static_cast<unsigned char>(text[i]))) {
          out += text[i++];
        }
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

const std::array<const char*, 6> kEmoticonKeywords = {
    "EMOT_SMILEY", "EMOT_LAUGH", "EMOT_LOVE",
    "EMOT_WINK",   "EMOT_FROWN", "EMOT_CRY"};

bool is_protected_token(std::string_view tok) {
  if (tok == "URL" || tok == "PUNC_EXCL" || tok == "PUNC_QUES") return true;
  if (tok.starts_with("HASH_") || tok.starts_with("HNDL_")) return true;
  for (const char* kw : kEmoticonKeywords) {
    if (tok == kw) return true;
  }
  return false;
}

// Collapses whitespace runs to single spaces and trims both ends.
std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space_byte(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::string lowercase_except_keywords(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_byte(static_cast<unsigned char>(text[i])))
      ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !is_space_byte(static_cast<unsigned char>(text[j])))
      ++j;
    std::string_view tok = text.substr(i, j - i);
    if (!out.empty()) out += ' ';
    if (is_protected_token(tok)) {
      out += tok;
    } else {
      for (char c : tok) {
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    i = j;
  }
  return out;
}

}  // namespace

const char* emoticon_keyword(EmoticonClass c) {
  return kEmoticonKeywords[static_cast<int>(c)];
}

const EmoticonTable& EmoticonTable::builtin() {
  static const EmoticonTable table = [] {
    EmoticonTable t;
    for (const char* p : {":)", ":-)", "(:", "=)", ":]"})
      t.add(p, EmoticonClass::Smiley);
    for (const char* p : {":D", ":-D", "=D", "xD", "XD"})
      t.add(p, EmoticonClass::Laugh);
    for (const char* p : {"<3", ":*", ":-*"}) t.add(p, EmoticonClass::Love);
    for (const char* p : {";)", ";-)", ";]"}) t.add(p, EmoticonClass::Wink);
    for (const char* p : {":(", ":-(", "):", "=(", ":["})
      t.add(p, EmoticonClass::Frown);
    for (const char* p : {":'(", ":’(", ";("}) t.add(p, EmoticonClass::Cry);
    return t;
  }();
  return table;
}

EmoticonTable EmoticonTable::load(const std::string& path) {
  EmoticonTable t;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw std::runtime_error(path + ": line " + std::to_string(ln + 1) +
                               ": expected '<emoticon><TAB><CLASS>'");
    }
    static const std::array<const char*, 6> names = {"SMILEY", "LAUGH", "LOVE",
                                                     "WINK",   "FROWN", "CRY"};
    const std::string cls = trim(fields[1]);
    auto it = std::find(names.begin(), names.end(), cls);
    if (it == names.end()) {
      throw std::runtime_error(path + ": line " + std::to_string(ln + 1) +
                               ": unknown emoticon class '" + cls + "'");
    }
    t.add(fields[0], static_cast<EmoticonClass>(it - names.begin()));
  }
  return t;
}

void EmoticonTable::add(std::string pattern, EmoticonClass cls) {
  // Insert keeping longest-first order; equal lengths keep insertion order.
  auto pos = std::find_if(entries_.begin(), entries_.end(),
                          [&](const Entry& e) {
                            return e.pattern.size() < pattern.size();
                          });
  entries_.insert(pos, Entry{std::move(pattern), cls});
}

std::string replace_hashtags(std::string_view text) {
  // '#' not followed by a word byte is untouched; no word-start requirement.
  return replace_sigil(text, '#', "HASH_", /*word_start_only=*/false);
}

std::string replace_handles(std::string_view text) {
  // Only '@' at a word start opens a handle, so e-mail addresses survive.
  return replace_sigil(text, '@', "HNDL_", /*word_start_only=*/true);
}

std::string replace_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool scheme = has_prefix_ci(text, i, "http://") ||
                  has_prefix_ci(text, i, "https://");
    bool www = false;
    if (!scheme && has_prefix_ci(text, i, "www.")) {
      www = i == 0 || !is_word_byte(static_cast<unsigned char>(text[i - 1]));
    }
    if (scheme || www) {
      while (i < text.size() &&
             !is_space_byte(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
      out += "URL";
      continue;
    }
    out += text[i++];
  }
  return out;
}

std::string replace_emoticons(std::string_view text, const EmoticonTable& table) {
  const auto& entries = table.entries();
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const EmoticonTable::Entry* hit = nullptr;
    for (const auto& e : entries) {
      const std::string& p = e.pattern;
      if (p.size() > text.size() - i) continue;
      if (text.compare(i, p.size(), p) != 0) continue;
      // Patterns with word-byte edges ("xD") must sit at word boundaries.
      if (is_word_byte(static_cast<unsigned char>(p.front())) && i > 0 &&
          is_word_byte(static_cast<unsigned char>(text[i - 1]))) {
        continue;
      }
      if (is_word_byte(static_cast<unsigned char>(p.back())) &&
          i + p.size() < text.size() &&
          is_word_byte(static_cast<unsigned char>(text[i + p.size()]))) {
        continue;
      }
      hit = &e;
      break;
    }
    if (hit != nullptr) {
      out += ' ';
      out += emoticon_keyword(hit->cls);
      out += ' ';
      i += hit->pattern.size();
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::string replace_emoticons(std::string_view text) {
  return replace_emoticons(text, EmoticonTable::builtin());
}

std::string annotate_punctuation(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (!is_punct_byte(c)) {
      out += static_cast<char>(c);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() &&
           is_punct_byte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    const std::string_view run = text.substr(i, j - i);
    const bool left_word =
        i > 0 && is_word_byte(static_cast<unsigned char>(text[i - 1]));
    const bool right_word =
        j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]));
    if (run == "'" && left_word && right_word) {
      out += '\'';  // intra-word apostrophe ("don't")
    } else {
      // One token per distinct sentiment mark, first-appearance order;
      // everything else in the run is dropped.
      std::string marks;
      for (char rc : run) {
        if (rc == '!' && marks.find('!') == std::string::npos) marks += '!';
        if (rc == '?' && marks.find('?') == std::string::npos) marks += '?';
      }
      out += ' ';
      for (char m : marks) {
        out += (m == '!') ? "PUNC_EXCL" : "PUNC_QUES";
        out += ' ';
      }
    }
    i = j;
  }
  return collapse_whitespace(out);
}

std::string squeeze_repeats(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    std::size_t n = out.size();
    if (n >= 2 && out[n - 1] == c && out[n - 2] == c) continue;
    out += c;
  }
  return out;
}

NormalizedText normalize(std::string_view text, const EmoticonTable& table) {
  std::string s = replace_urls(text);
  s = replace_handles(s);
  s = replace_hashtags(s);
  s = replace_emoticons(s, table);
  s = squeeze_repeats(s);
  s = annotate_punctuation(s);
  s = lowercase_except_keywords(s);
  return NormalizedText{std::move(s)};
}

NormalizedText normalize(std::string_view text) {
  return normalize(text, EmoticonTable::builtin());
}

TokenSequence tokenize(const NormalizedText& n) {
  TokenSequence seq;
  if (n.text.empty()) return seq;
  for (auto& tok : split(n.text, ' ')) {
    if (!tok.empty()) seq.tokens.push_back(std::move(tok));
  }
  return seq;
}

}  // namespace tweetsent
