#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "culturenov/corpus.hpp"
#include "culturenov/io.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(CULTURENOV_TEST_DATA) / name;
}

inline nlohmann::json load_json(const std::string& name) {
  return nlohmann::json::parse(culturenov::io::read_file(data_path(name)));
}

inline culturenov::Document make_doc(std::string id, const std::vector<std::string>& lemmas,
                                     std::set<std::string> ingredients = {}) {
  culturenov::Document d;
  d.id = std::move(id);
  for (const auto& l : lemmas) d.body_tokens.push_back({l, culturenov::Pos::Noun});
  d.raw_token_count = static_cast<std::int64_t>(lemmas.size());
  d.ingredients = std::move(ingredients);
  return d;
}

inline culturenov::TokenDistribution dist_of(const std::vector<std::string>& lemmas) {
  return culturenov::TokenDistribution::from_counts(culturenov::count_tokens(lemmas));
}

}  // namespace testing
