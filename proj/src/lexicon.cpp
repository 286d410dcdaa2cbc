#include "lexicon.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace culturenov::lexicon {
namespace {

using namespace std::string_view_literals;

// Function words with no content: determiners, pronouns, prepositions,
// conjunctions, auxiliaries, particles.
constexpr std::array kStopwords = {
    "a"sv,       "an"sv,      "the"sv,     "this"sv,    "that"sv,    "these"sv,   "those"sv,
    "i"sv,       "me"sv,      "my"sv,      "we"sv,      "our"sv,     "you"sv,     "your"sv,
    "he"sv,      "him"sv,     "his"sv,     "she"sv,     "her"sv,     "it"sv,      "its"sv,
    "they"sv,    "them"sv,    "their"sv,   "what"sv,    "which"sv,   "who"sv,     "whom"sv,
    "whose"sv,   "of"sv,      "in"sv,      "on"sv,      "at"sv,      "by"sv,      "for"sv,
    "with"sv,    "about"sv,   "against"sv, "between"sv, "into"sv,    "through"sv, "during"sv,
    "before"sv,  "after"sv,   "above"sv,   "below"sv,   "to"sv,      "from"sv,    "up"sv,
    "down"sv,    "out"sv,     "off"sv,     "over"sv,    "under"sv,   "onto"sv,    "upon"sv,
    "per"sv,     "via"sv,     "and"sv,     "but"sv,     "or"sv,      "nor"sv,     "so"sv,
    "if"sv,      "because"sv, "as"sv,      "until"sv,   "while"sv,   "than"sv,    "then"sv,
    "is"sv,      "am"sv,      "are"sv,     "was"sv,     "were"sv,    "be"sv,      "been"sv,
    "being"sv,   "have"sv,    "has"sv,     "had"sv,     "having"sv,  "do"sv,      "does"sv,
    "did"sv,     "doing"sv,   "will"sv,    "would"sv,   "shall"sv,   "should"sv,  "can"sv,
    "could"sv,   "may"sv,     "might"sv,   "must"sv,    "not"sv,     "no"sv,      "there"sv,
    "here"sv,    "when"sv,    "where"sv,   "why"sv,     "how"sv,     "all"sv,     "any"sv,
    "both"sv,    "each"sv,    "few"sv,     "more"sv,    "most"sv,    "other"sv,   "some"sv,
    "such"sv,    "own"sv,     "same"sv,    "too"sv,     "very"sv,    "just"sv,    "also"sv,
    "itself"sv,  "yourself"sv, "ourselves"sv, "themselves"sv, "myself"sv, "s"sv, "t"sv,
};

constexpr std::array kNumberWords = {
    "one"sv,    "two"sv,     "three"sv,  "four"sv,   "five"sv,    "six"sv,    "seven"sv,
    "eight"sv,  "nine"sv,    "ten"sv,    "eleven"sv, "twelve"sv,  "twenty"sv, "thirty"sv,
    "forty"sv,  "fifty"sv,   "hundred"sv, "dozen"sv,
};

struct Entry {
  std::string_view word;
  Pos pos;
};

// Coarse cooking-domain lexicon. Entries are base forms; inflected forms are
// resolved by stripping suffixes before lookup.
constexpr std::array kLexicon = {
    // verbs
    Entry{"add"sv, Pos::Verb},      Entry{"bake"sv, Pos::Verb},     Entry{"beat"sv, Pos::Verb},
    Entry{"blend"sv, Pos::Verb},    Entry{"boil"sv, Pos::Verb},     Entry{"braise"sv, Pos::Verb},
    Entry{"bring"sv, Pos::Verb},    Entry{"broil"sv, Pos::Verb},    Entry{"brown"sv, Pos::Verb},
    Entry{"brush"sv, Pos::Verb},    Entry{"chill"sv, Pos::Verb},    Entry{"chop"sv, Pos::Verb},
    Entry{"coat"sv, Pos::Verb},     Entry{"combine"sv, Pos::Verb},  Entry{"cook"sv, Pos::Verb},
    Entry{"cool"sv, Pos::Verb},     Entry{"cover"sv, Pos::Verb},    Entry{"cut"sv, Pos::Verb},
    Entry{"dice"sv, Pos::Verb},     Entry{"drain"sv, Pos::Verb},    Entry{"drizzle"sv, Pos::Verb},
    Entry{"fill"sv, Pos::Verb},     Entry{"fluff"sv, Pos::Verb},    Entry{"fold"sv, Pos::Verb},
    Entry{"fry"sv, Pos::Verb},      Entry{"garnish"sv, Pos::Verb},  Entry{"grate"sv, Pos::Verb},
    Entry{"grill"sv, Pos::Verb},    Entry{"heat"sv, Pos::Verb},     Entry{"knead"sv, Pos::Verb},
    Entry{"layer"sv, Pos::Verb},    Entry{"let"sv, Pos::Verb},      Entry{"make"sv, Pos::Verb},
    Entry{"marinate"sv, Pos::Verb}, Entry{"mash"sv, Pos::Verb},     Entry{"melt"sv, Pos::Verb},
    Entry{"mix"sv, Pos::Verb},      Entry{"place"sv, Pos::Verb},    Entry{"pour"sv, Pos::Verb},
    Entry{"preheat"sv, Pos::Verb},  Entry{"prepare"sv, Pos::Verb},  Entry{"put"sv, Pos::Verb},
    Entry{"reduce"sv, Pos::Verb},   Entry{"remove"sv, Pos::Verb},   Entry{"repeat"sv, Pos::Verb},
    Entry{"rinse"sv, Pos::Verb},    Entry{"roast"sv, Pos::Verb},    Entry{"roll"sv, Pos::Verb},
    Entry{"saute"sv, Pos::Verb},    Entry{"season"sv, Pos::Verb},   Entry{"serve"sv, Pos::Verb},
    Entry{"set"sv, Pos::Verb},      Entry{"shake"sv, Pos::Verb},    Entry{"simmer"sv, Pos::Verb},
    Entry{"slice"sv, Pos::Verb},    Entry{"soak"sv, Pos::Verb},     Entry{"spoon"sv, Pos::Verb},
    Entry{"spread"sv, Pos::Verb},   Entry{"sprinkle"sv, Pos::Verb}, Entry{"stand"sv, Pos::Verb},
    Entry{"steam"sv, Pos::Verb},    Entry{"stir"sv, Pos::Verb},     Entry{"strain"sv, Pos::Verb},
    Entry{"stuff"sv, Pos::Verb},    Entry{"take"sv, Pos::Verb},     Entry{"toss"sv, Pos::Verb},
    Entry{"transfer"sv, Pos::Verb}, Entry{"turn"sv, Pos::Verb},     Entry{"use"sv, Pos::Verb},
    Entry{"wash"sv, Pos::Verb},     Entry{"whisk"sv, Pos::Verb},    Entry{"wrap"sv, Pos::Verb},
    // adjectives
    Entry{"big"sv, Pos::Adj},       Entry{"brown"sv, Pos::Adj},     Entry{"cold"sv, Pos::Adj},
    Entry{"crisp"sv, Pos::Adj},     Entry{"dry"sv, Pos::Adj},       Entry{"fine"sv, Pos::Adj},
    Entry{"fresh"sv, Pos::Adj},     Entry{"golden"sv, Pos::Adj},    Entry{"good"sv, Pos::Adj},
    Entry{"green"sv, Pos::Adj},     Entry{"hot"sv, Pos::Adj},       Entry{"large"sv, Pos::Adj},
    Entry{"light"sv, Pos::Adj},     Entry{"little"sv, Pos::Adj},    Entry{"low"sv, Pos::Adj},
    Entry{"medium"sv, Pos::Adj},    Entry{"new"sv, Pos::Adj},       Entry{"red"sv, Pos::Adj},
    Entry{"remaining"sv, Pos::Adj}, Entry{"small"sv, Pos::Adj},     Entry{"soft"sv, Pos::Adj},
    Entry{"sweet"sv, Pos::Adj},     Entry{"tender"sv, Pos::Adj},    Entry{"thick"sv, Pos::Adj},
    Entry{"thin"sv, Pos::Adj},      Entry{"warm"sv, Pos::Adj},      Entry{"white"sv, Pos::Adj},
    Entry{"whole"sv, Pos::Adj},     Entry{"yellow"sv, Pos::Adj},
    // adverbs
    Entry{"again"sv, Pos::Adv},     Entry{"almost"sv, Pos::Adv},    Entry{"already"sv, Pos::Adv},
    Entry{"aside"sv, Pos::Adv},     Entry{"away"sv, Pos::Adv},      Entry{"meanwhile"sv, Pos::Adv},
    Entry{"now"sv, Pos::Adv},       Entry{"often"sv, Pos::Adv},     Entry{"once"sv, Pos::Adv},
    Entry{"only"sv, Pos::Adv},      Entry{"still"sv, Pos::Adv},     Entry{"together"sv, Pos::Adv},
    Entry{"twice"sv, Pos::Adv},     Entry{"well"sv, Pos::Adv},
    // nouns that would otherwise trip the suffix heuristics
    Entry{"bed"sv, Pos::Noun},      Entry{"breed"sv, Pos::Noun},    Entry{"dressing"sv, Pos::Noun},
    Entry{"filling"sv, Pos::Noun},  Entry{"frosting"sv, Pos::Noun}, Entry{"icing"sv, Pos::Noun},
    Entry{"pudding"sv, Pos::Noun},  Entry{"seasoning"sv, Pos::Noun}, Entry{"seed"sv, Pos::Noun},
    Entry{"shed"sv, Pos::Noun},     Entry{"stuffing"sv, Pos::Noun}, Entry{"topping"sv, Pos::Noun},
    Entry{"wedding"sv, Pos::Noun},  Entry{"glass"sv, Pos::Noun},    Entry{"lemon"sv, Pos::Noun},
    Entry{"family"sv, Pos::Noun},   Entry{"jelly"sv, Pos::Noun},    Entry{"chili"sv, Pos::Noun},
    Entry{"curry"sv, Pos::Noun},    Entry{"belly"sv, Pos::Noun},
};

struct Irregular {
  std::string_view form;
  std::string_view base;
};

constexpr std::array kIrregularVerbs = {
    Irregular{"made"sv, "make"sv},    Irregular{"brought"sv, "bring"sv},
    Irregular{"took"sv, "take"sv},    Irregular{"taken"sv, "take"sv},
    Irregular{"ate"sv, "eat"sv},      Irregular{"eaten"sv, "eat"sv},
    Irregular{"froze"sv, "freeze"sv}, Irregular{"frozen"sv, "freeze"sv},
    Irregular{"left"sv, "leave"sv},   Irregular{"stood"sv, "stand"sv},
    Irregular{"kept"sv, "keep"sv},    Irregular{"gave"sv, "give"sv},
    Irregular{"given"sv, "give"sv},   Irregular{"ground"sv, "grind"sv},
};

}  // namespace

bool is_stopword(std::string_view word) {
  static const std::unordered_set<std::string_view> set(kStopwords.begin(), kStopwords.end());
  return set.contains(word);
}

bool is_number_word(std::string_view word) {
  return std::find(kNumberWords.begin(), kNumberWords.end(), word) != kNumberWords.end();
}

std::optional<Pos> lookup(std::string_view word) {
  // First entry wins, so "brown" resolves as a verb.
  static const auto table = [] {
    std::unordered_map<std::string_view, Pos> m;
    for (const auto& e : kLexicon) m.emplace(e.word, e.pos);
    return m;
  }();
  if (auto it = table.find(word); it != table.end()) return it->second;
  return std::nullopt;
}

std::optional<std::string_view> irregular_verb(std::string_view word) {
  for (const auto& e : kIrregularVerbs) {
    if (e.form == word) return e.base;
  }
  return std::nullopt;
}

}  // namespace culturenov::lexicon
