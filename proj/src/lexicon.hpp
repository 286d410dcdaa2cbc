#pragma once

#include <optional>
#include <string_view>

#include "culturenov/corpus.hpp"

namespace culturenov::lexicon {

bool is_stopword(std::string_view word);
bool is_number_word(std::string_view word);
std::optional<Pos> lookup(std::string_view word);
/// Irregular verb form -> base form ("made" -> "make").
std::optional<std::string_view> irregular_verb(std::string_view word);

}  // namespace culturenov::lexicon
