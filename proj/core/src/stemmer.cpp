#include "ideatrace/stemmer.hpp"

#include <array>
#include <cstddef>

namespace ideatrace {

namespace {

// Lowercase y counts as a vowel; the prelude rewrites consonant-y to 'Y',
// which is not in this set.
bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_vwxy(char c) { return is_vowel(c) || c == 'w' || c == 'x' || c == 'Y'; }

bool ends_with(const std::string& w, std::string_view suf) {
  return w.size() >= suf.size() &&
         w.compare(w.size() - suf.size(), suf.size(), suf) == 0;
}

// First position after a vowel followed by a non-vowel, scanning from
// `from`; w.size() if there is none.
std::size_t region_after(const std::string& w, std::size_t from) {
  for (std::size_t i = from; i + 1 < w.size(); ++i) {
    if (is_vowel(w[i]) && !is_vowel(w[i + 1])) return i + 2;
  }
  return w.size();
}

// True if the prefix of length m ends in a short syllable.
bool short_syllable(const std::string& w, std::size_t m) {
  if (m >= 3 && !is_vwxy(w[m - 1]) && is_vowel(w[m - 2]) && !is_vowel(w[m - 3]))
    return true;
  return m == 2 && is_vowel(w[0]) && !is_vowel(w[1]);
}

bool contains_vowel(const std::string& w, std::size_t end) {
  for (std::size_t i = 0; i < end; ++i) {
    if (is_vowel(w[i])) return true;
  }
  return false;
}

bool ends_double(const std::string& w) {
  static constexpr std::string_view doubles[] = {"bb", "dd", "ff", "gg", "mm",
                                                 "nn", "pp", "rr", "tt"};
  for (auto d : doubles) {
    if (ends_with(w, d)) return true;
  }
  return false;
}

struct FixedForm {
  std::string_view word;
  std::string_view stem;
};

// Irregular forms handled before the algorithm proper.
constexpr FixedForm kException1[] = {
    {"skis", "ski"},     {"skies", "sky"},    {"dying", "die"},
    {"lying", "lie"},    {"tying", "tie"},    {"idly", "idl"},
    {"gently", "gentl"}, {"ugly", "ugli"},    {"early", "earli"},
    {"only", "onli"},    {"singly", "singl"}, {"sky", "sky"},
    {"news", "news"},    {"howe", "howe"},    {"atlas", "atlas"},
    {"cosmos", "cosmos"},{"bias", "bias"},    {"andes", "andes"},
};

// Words left alone once step 1a has run.
constexpr std::string_view kException2[] = {
    "inning", "outing",  "canning", "herring",
    "earring", "proceed", "exceed",  "succeed",
};

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

constexpr Rule kStep2[] = {
    {"ational", "ate"},  {"fulness", "ful"}, {"iveness", "ive"},
    {"ization", "ize"},  {"ousness", "ous"}, {"biliti", "ble"},
    {"lessli", "less"},  {"tional", "tion"}, {"alism", "al"},
    {"aliti", "al"},     {"ation", "ate"},   {"entli", "ent"},
    {"fulli", "ful"},    {"iviti", "ive"},   {"ousli", "ous"},
    {"abli", "able"},    {"alli", "al"},     {"anci", "ance"},
    {"enci", "ence"},    {"izer", "ize"},    {"ator", "ate"},
    {"bli", "ble"},      {"ogi", "og"},      {"li", ""},
};

constexpr Rule kStep3[] = {
    {"ational", "ate"}, {"tional", "tion"}, {"alize", "al"},
    {"icate", "ic"},    {"iciti", "ic"},    {"ative", ""},
    {"ical", "ic"},     {"ness", ""},       {"ful", ""},
};

constexpr std::string_view kStep4[] = {
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion",
    "ism",   "ate",  "iti",  "ous",  "ive",  "ize",  "al",  "er",  "ic",
};

bool valid_li_ending(char c) {
  return c == 'c' || c == 'd' || c == 'e' || c == 'g' || c == 'h' ||
         c == 'k' || c == 'm' || c == 'n' || c == 'r' || c == 't';
}

}  // namespace

std::string stem_english(std::string_view input) {
  for (const auto& e : kException1) {
    if (input == e.word) return std::string(e.stem);
  }
  if (input.size() <= 2) return std::string(input);

  std::string w(input);

  // Prelude: drop a leading apostrophe, mark consonant-y as 'Y'.
  if (w.front() == '\'') w.erase(0, 1);
  if (!w.empty() && w.front() == 'y') w.front() = 'Y';
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == 'y' && is_vowel(w[i - 1])) w[i] = 'Y';
  }

  // R1/R2 as fixed offsets; the word only ever shrinks at the tail.
  std::size_t p1;
  if (w.starts_with("gener") || w.starts_with("arsen")) {
    p1 = 5;
  } else if (w.starts_with("commun")) {
    p1 = 6;
  } else {
    p1 = region_after(w, 0);
  }
  std::size_t p2 = region_after(w, p1);

  auto in_r1 = [&](std::size_t start) { return start >= p1; };
  auto in_r2 = [&](std::size_t start) { return start >= p2; };

  // Step 0: possessive endings.
  for (std::string_view suf : {"'s'", "'s", "'"}) {
    if (ends_with(w, suf)) {
      w.resize(w.size() - suf.size());
      break;
    }
  }

  // Step 1a.
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ied") || ends_with(w, "ies")) {
    if (w.size() > 4) {
      w.resize(w.size() - 2);  // -> i
    } else {
      w.resize(w.size() - 1);  // -> ie
    }
  } else if (ends_with(w, "ss") || ends_with(w, "us")) {
    // keep
  } else if (ends_with(w, "s")) {
    if (w.size() >= 3 && contains_vowel(w, w.size() - 2)) w.pop_back();
  }

  for (std::string_view e : kException2) {
    if (w == e) return w;
  }

  // Step 1b.
  {
    std::string_view matched;
    for (std::string_view suf : {"eedly", "ingly", "edly", "eed", "ing", "ed"}) {
      if (ends_with(w, suf)) {
        matched = suf;
        break;
      }
    }
    if (matched == "eed" || matched == "eedly") {
      if (in_r1(w.size() - matched.size())) {
        w.resize(w.size() - matched.size());
        w += "ee";
      }
    } else if (!matched.empty()) {
      std::size_t start = w.size() - matched.size();
      if (contains_vowel(w, start)) {
        w.resize(start);
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
          w.push_back('e');
        } else if (ends_double(w)) {
          w.pop_back();
        } else if (w.size() == p1 && short_syllable(w, w.size())) {
          w.push_back('e');
        }
      }
    }
  }

  // Step 1c: final y/Y -> i after a non-vowel that is not the first letter.
  if (w.size() >= 3 && (w.back() == 'y' || w.back() == 'Y') &&
      !is_vowel(w[w.size() - 2])) {
    w.back() = 'i';
  }

  // Step 2.
  for (const auto& rule : kStep2) {
    if (!ends_with(w, rule.suffix)) continue;
    std::size_t start = w.size() - rule.suffix.size();
    if (in_r1(start)) {
      if (rule.suffix == "ogi") {
        if (start >= 1 && w[start - 1] == 'l') {
          w.resize(start);
          w += rule.replacement;
        }
      } else if (rule.suffix == "li") {
        if (start >= 1 && valid_li_ending(w[start - 1])) {
          w.resize(start);
        }
      } else {
        w.resize(start);
        w += rule.replacement;
      }
    }
    break;  // longest match only; no fallback on a failed condition
  }

  // Step 3.
  for (const auto& rule : kStep3) {
    if (!ends_with(w, rule.suffix)) continue;
    std::size_t start = w.size() - rule.suffix.size();
    if (in_r1(start)) {
      if (rule.suffix == "ative") {
        if (in_r2(start)) w.resize(start);
      } else {
        w.resize(start);
        w += rule.replacement;
      }
    }
    break;
  }

  // Step 4.
  for (std::string_view suf : kStep4) {
    if (!ends_with(w, suf)) continue;
    std::size_t start = w.size() - suf.size();
    if (in_r2(start)) {
      if (suf == "ion") {
        if (start >= 1 && (w[start - 1] == 's' || w[start - 1] == 't')) {
          w.resize(start);
        }
      } else {
        w.resize(start);
      }
    }
    break;
  }

  // Step 5.
  if (!w.empty() && w.back() == 'e') {
    std::size_t start = w.size() - 1;
    if (in_r2(start) || (in_r1(start) && !short_syllable(w, start))) {
      w.pop_back();
    }
  } else if (!w.empty() && w.back() == 'l') {
    std::size_t start = w.size() - 1;
    if (in_r2(start) && start >= 1 && w[start - 1] == 'l') w.pop_back();
  }

  for (char& c : w) {
    if (c == 'Y') c = 'y';
  }
  return w;
}

}  // namespace ideatrace
