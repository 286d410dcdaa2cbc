#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "culturenov/corpus.hpp"

namespace culturenov {

enum class AnnotationProvider {
  Preannotated,  // tags (and optionally lemmas) come with the input
  Naive,         // built-in tokenizer, stoplist, lexicon POS guesser, suffix lemmatizer
};

std::string_view to_string(AnnotationProvider provider) noexcept;
AnnotationProvider parse_provider(std::string_view name);

/// One externally tagged token as it appears in pre-annotated input.
struct RawToken {
  std::string text;                  // surface form, may be empty when lemma is given
  std::optional<std::string> lemma;  // taken verbatim (lowercased) when present
  std::string tag;                   // UPOS-style tag name
};

/// Built-in pipeline: lowercase, tokenize, drop stopwords, guess POS, lemmatize.
/// Throws EmptyDocument for blank text and EmptyAfterFilter if nothing survives.
std::vector<AnnotatedToken> annotate_naive(std::string_view raw_text);

/// Whitespace-split `raw_text`, pair each piece with the corresponding tag.
/// Missing lemmas are produced by the naive lemmatizer using the supplied tag.
std::vector<AnnotatedToken> annotate_pretagged(std::string_view raw_text,
                                               std::span<const std::string> tags);

std::vector<AnnotatedToken> annotate_pretokenized(std::span<const RawToken> tokens);

/// Dispatch on the provider. `tags` is only read for Preannotated.
std::vector<AnnotatedToken> annotate(std::string_view raw_text, AnnotationProvider provider,
                                     std::span<const std::string> tags = {});

// Building blocks of the naive pipeline, exposed for testing.
std::vector<std::string> naive_tokenize(std::string_view raw_text);
std::string lemmatize(std::string_view lower_word, Pos pos);
Pos guess_pos(std::string_view lower_word);
bool is_stopword(std::string_view lower_word);

}  // namespace culturenov
