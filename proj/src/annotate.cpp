#include "culturenov/annotate.hpp"

#include <algorithm>
#include <cctype>

#include "culturenov/error.hpp"
#include "lexicon.hpp"

namespace culturenov {
namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_ascii_alnum(unsigned char c) { return std::isalnum(c) != 0; }
bool is_word_byte(unsigned char c) { return is_ascii_alnum(c) || c >= 0x80 || c == '\''; }
bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool looks_numeric(std::string_view w) {
  return !w.empty() && std::any_of(w.begin(), w.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c)) != 0;
         }) && std::all_of(w.begin(), w.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' || c == ',' ||
                  c == '/';
         });
}

// Plural / third-person "s" family.
std::string strip_s(std::string w) {
  const auto n = w.size();
  if (n > 4 && ends_with(w, "ies")) return w.substr(0, n - 3) + "y";
  if (ends_with(w, "sses")) return w.substr(0, n - 2);
  if (ends_with(w, "xes") || ends_with(w, "zes") || ends_with(w, "ches") || ends_with(w, "shes")) {
    return w.substr(0, n - 2);
  }
  if (n > 4 && ends_with(w, "oes")) return w.substr(0, n - 2);
  if (n >= 4 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return w.substr(0, n - 1);
  }
  return w;
}

std::string undouble(std::string stem) {
  const auto n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      std::string_view("lsfz").find(stem[n - 1]) == std::string_view::npos) {
    stem.pop_back();
  }
  return stem;
}

std::string strip_verb(std::string w) {
  if (auto base = lexicon::irregular_verb(w)) return std::string(*base);
  const auto n = w.size();
  if (n >= 6 && ends_with(w, "ing")) {
    auto stem = w.substr(0, n - 3);
    if (lexicon::lookup(stem + "e") == Pos::Verb) return stem + "e";
    return undouble(std::move(stem));
  }
  if (n >= 5 && ends_with(w, "ied")) return w.substr(0, n - 3) + "y";
  if (n >= 5 && ends_with(w, "ed")) {
    auto stem = w.substr(0, n - 2);
    if (lexicon::lookup(stem + "e") == Pos::Verb) return stem + "e";
    return undouble(std::move(stem));
  }
  return strip_s(std::move(w));
}

std::string lemmatize_once(std::string_view w, Pos pos) {
  switch (pos) {
    case Pos::Noun: return strip_s(std::string(w));
    case Pos::Verb: return strip_verb(std::string(w));
    default: return std::string(w);
  }
}

// Trim leading/trailing ASCII punctuation and drop a possessive "'s".
std::string clean_surface(std::string_view raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && std::ispunct(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::ispunct(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string out = to_lower(raw.substr(b, e - b));
  if (ends_with(out, "'s")) out.resize(out.size() - 2);
  std::erase(out, '\'');
  return out;
}

std::string sanitize_lemma(std::string_view raw) {
  std::string out = to_lower(raw);
  for (char& c : out) {
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  }
  return out;
}

void require_text(std::string_view raw_text) {
  if (std::all_of(raw_text.begin(), raw_text.end(),
                  [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; })) {
    throw Error(ErrorKind::EmptyDocument, "text is empty after trimming");
  }
}

std::vector<AnnotatedToken> require_survivors(std::vector<AnnotatedToken> out) {
  if (out.empty()) throw Error(ErrorKind::EmptyAfterFilter, "no token survived the POS filter");
  return out;
}

}  // namespace

std::string_view to_string(AnnotationProvider provider) noexcept {
  return provider == AnnotationProvider::Naive ? "naive" : "preannotated";
}

AnnotationProvider parse_provider(std::string_view name) {
  const auto lower = to_lower(name);
  if (lower == "naive") return AnnotationProvider::Naive;
  if (lower == "preannotated") return AnnotationProvider::Preannotated;
  throw Error(ErrorKind::InvalidArgument, "unknown annotation provider '" + std::string(name) + "'");
}

bool is_stopword(std::string_view lower_word) { return lexicon::is_stopword(lower_word); }

std::vector<std::string> naive_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto cleaned = clean_surface(cur);
    if (!cleaned.empty()) out.push_back(std::move(cleaned));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    const bool numeric_join = (c == '.' || c == ',') && !cur.empty() &&
                              std::isdigit(static_cast<unsigned char>(cur.back())) &&
                              i + 1 < text.size() &&
                              std::isdigit(static_cast<unsigned char>(text[i + 1]));
    if (is_word_byte(c) || numeric_join) {
      cur.push_back(static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::string lemmatize(std::string_view lower_word, Pos pos) {
  // Iterate to a fixpoint so lemmatize(lemmatize(w)) == lemmatize(w).
  std::string cur(lower_word);
  for (;;) {
    auto next = lemmatize_once(cur, pos);
    if (next == cur || next.empty()) return cur;
    cur = std::move(next);
  }
}

Pos guess_pos(std::string_view w) {
  if (w.empty()) return Pos::Other;
  if (looks_numeric(w) || lexicon::is_number_word(w)) return Pos::Num;
  if (lexicon::is_stopword(w)) return Pos::Other;
  if (auto p = lexicon::lookup(w)) return *p;
  if (auto p = lexicon::lookup(strip_s(std::string(w)))) return *p;
  if (lexicon::lookup(strip_verb(std::string(w))) == Pos::Verb) return Pos::Verb;
  if (w.size() >= 5 && ends_with(w, "ly")) return Pos::Adv;
  if (w.size() >= 5 && (ends_with(w, "ing") || ends_with(w, "ed"))) return Pos::Verb;
  for (std::string_view suf : {"ous", "ful", "ive", "able", "ible", "ish", "less"}) {
    if (w.size() >= suf.size() + 3 && ends_with(w, suf)) return Pos::Adj;
  }
  return Pos::Noun;
}

std::vector<AnnotatedToken> annotate_naive(std::string_view raw_text) {
  require_text(raw_text);
  std::vector<AnnotatedToken> out;
  for (auto& word : naive_tokenize(raw_text)) {
    // Alternate guess/lemmatize until the lemma re-tags to itself; this makes
    // the pipeline idempotent when fed its own output.
    std::string cur = word;
    Pos pos = guess_pos(cur);
    while (is_content_pos(pos)) {
      auto next = lemmatize(cur, pos);
      if (lexicon::is_stopword(next)) {
        pos = Pos::Other;
        break;
      }
      const Pos next_pos = guess_pos(next);
      if (next == cur && next_pos == pos) break;
      cur = std::move(next);
      pos = next_pos;
    }
    if (is_content_pos(pos)) out.push_back({std::move(cur), pos});
  }
  return require_survivors(std::move(out));
}

std::vector<AnnotatedToken> annotate_pretokenized(std::span<const RawToken> tokens) {
  std::vector<AnnotatedToken> out;
  for (const auto& raw : tokens) {
    const Pos pos = parse_pos(raw.tag);
    if (!is_content_pos(pos)) continue;
    std::string lemma;
    if (raw.lemma && !raw.lemma->empty()) {
      lemma = sanitize_lemma(*raw.lemma);
    } else {
      lemma = lemmatize(clean_surface(raw.text), pos);
    }
    if (!lemma.empty()) out.push_back({std::move(lemma), pos});
  }
  return require_survivors(std::move(out));
}

std::vector<AnnotatedToken> annotate_pretagged(std::string_view raw_text,
                                               std::span<const std::string> tags) {
  require_text(raw_text);
  std::vector<RawToken> tokens;
  std::size_t i = 0;
  while (i < raw_text.size()) {
    while (i < raw_text.size() && std::isspace(static_cast<unsigned char>(raw_text[i]))) ++i;
    const auto start = i;
    while (i < raw_text.size() && !std::isspace(static_cast<unsigned char>(raw_text[i]))) ++i;
    if (i > start) tokens.push_back({std::string(raw_text.substr(start, i - start)), {}, {}});
  }
  if (tokens.size() != tags.size()) {
    throw Error(ErrorKind::InvalidArgument, "got " + std::to_string(tags.size()) + " tags for " +
                                                std::to_string(tokens.size()) + " tokens");
  }
  for (std::size_t k = 0; k < tokens.size(); ++k) tokens[k].tag = tags[k];
  return annotate_pretokenized(tokens);
}

std::vector<AnnotatedToken> annotate(std::string_view raw_text, AnnotationProvider provider,
                                     std::span<const std::string> tags) {
  if (provider == AnnotationProvider::Naive) return annotate_naive(raw_text);
  return annotate_pretagged(raw_text, tags);
}

}  // namespace culturenov
