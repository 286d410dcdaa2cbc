#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "culturenov/corpus_io.hpp"
#include "culturenov/dataset.hpp"
#include "culturenov/error.hpp"
#include "helpers.hpp"

using namespace culturenov;

namespace {

struct Fixture {
  CountryRegistry registry = CountryRegistry::load(testing::data_path("registry.json"));
  std::vector<DishSpec> dishes = load_dish_specs(testing::data_path("dishes.json"));
  std::vector<Document> docs;

  Fixture() {
    docs = load_corpus_jsonl(testing::data_path("recipes.jsonl"), AnnotationProvider::Preannotated).docs;
    assign_countries(docs, registry);
  }

  const DishSpec& dish(const std::string& name) const {
    return *std::find_if(dishes.begin(), dishes.end(), [&](const auto& d) { return d.canonical_name == name; });
  }
};

Document titled(std::string id, std::string title, std::optional<std::string> country) {
  auto d = testing::make_doc(std::move(id), {"x"});
  d.title = std::move(title);
  d.country = std::move(country);
  return d;
}

}  // namespace

TEST_CASE("whole-word matching") {
  CHECK(contains_whole_word("Best French Toast", "french"));
  CHECK_FALSE(contains_whole_word("Frenchy Toast", "french"));
  CHECK(contains_whole_word("Fluffy Pancakes", "pancake", true));
  CHECK(contains_whole_word("Peach Dishes", "dish", true));
  CHECK_FALSE(contains_whole_word("Fluffy Pancakes", "pancake"));
  CHECK_FALSE(contains_whole_word("Pancakeria", "pancake", true));
  CHECK(contains_whole_word("Chicken Tikka, spicy", "chicken tikka"));
}

TEST_CASE("country detection") {
  const Fixture f;
  CHECK(detect_country("Easy Italian Pizza", f.registry) == std::optional<std::string>("IT"));
  CHECK(detect_country("pizza from japan", f.registry) == std::optional<std::string>("JP"));
  CHECK_FALSE(detect_country("Pizza", f.registry).has_value());
  // "United Kingdom" (14 chars) beats "French" (6)
  CHECK(detect_country("United Kingdom French Toast", f.registry) == std::optional<std::string>("GB"));
  // equal lengths: "Mexico" vs "Indian" -> smallest ISO wins
  CHECK(detect_country("Indian Mexico Bowl", f.registry) == std::optional<std::string>("IN"));
}

TEST_CASE("dish matching with aliases and exclusions") {
  const Fixture f;
  const auto& pancake = f.dish("pancake");
  CHECK(match_dish("French Pancakes", pancake));
  CHECK_FALSE(match_dish("Pancake Mix Cookies", pancake));
  CHECK(match_dish("Enchiladas Suizas", f.dish("enchilada")));
  CHECK_FALSE(match_dish("Crepes", pancake));
}

TEST_CASE("title overrides win over detection") {
  const Fixture f;
  const auto d = titled("x", "French Bistro Chicken Tikka Curry", "FR");
  CHECK(effective_country(d, f.dish("curry")) == std::optional<std::string>("IN"));
  CHECK(effective_country(d, f.dish("pizza")) == std::optional<std::string>("FR"));
}

TEST_CASE("dish spec parsing") {
  const auto specs = parse_dish_specs(R"([{"name":"Pho","aliases":["pho bo"]}])");
  REQUIRE(specs.size() == 1);
  CHECK(std::find(specs[0].aliases.begin(), specs[0].aliases.end(), "Pho") != specs[0].aliases.end());
  CHECK_THROWS_AS(parse_dish_specs(R"([{"name":"a"},{"name":"a"}])"), Error);
  CHECK_THROWS_AS(parse_dish_specs(R"([{"aliases":[]}])"), Error);
  CHECK_THROWS_AS(parse_dish_specs("nope"), Error);
  CHECK_THROWS_AS(load_dish_specs(testing::data_path("no_such_file.json")), Error);
}

TEST_CASE("fixture splits") {
  const Fixture f;
  struct Expect {
    const char* dish;
    const char* origin;
    std::size_t knowledge, variations, held_out;
  };
  const Expect expected[] = {
      {"pancake", "FR", 7, 4, 3}, {"pizza", "IT", 2, 2, 0},   {"sushi", "JP", 2, 2, 0},
      {"taco", "MX", 2, 2, 0},    {"curry", "IN", 2, 2, 0},   {"crepe", "FR", 2, 2, 0},
      {"risotto", "IT", 2, 2, 0}, {"ramen", "JP", 2, 2, 0},   {"enchilada", "MX", 2, 2, 0},
      {"samosa", "IN", 3, 3, 1}};
  REQUIRE(f.dishes.size() == std::size(expected));
  for (const auto& e : expected) {
    CAPTURE(e.dish);
    const auto& dish = f.dish(e.dish);
    const auto origins = dish_origins(f.docs, dish);
    REQUIRE(origins == std::vector<std::string>{e.origin});
    const auto s = build_split(f.docs, dish, e.origin, 0.3, 11);
    CHECK(s.knowledge.size() == e.knowledge);
    CHECK(s.variations.size() == e.variations);
    CHECK(s.held_out.size() == e.held_out);
    for (const auto& id : s.knowledge) {
      CHECK_FALSE(std::binary_search(s.variations.begin(), s.variations.end(), id));
    }
  }
}

TEST_CASE("splits are deterministic and seed-dependent") {
  const Fixture f;
  const auto& dish = f.dish("pancake");
  const auto a = plan_split(f.docs, dish, "FR", 0.3, 1);
  const auto b = plan_split(f.docs, dish, "FR", 0.3, 1);
  CHECK(a.knowledge == b.knowledge);
  CHECK(a.held_out == b.held_out);
  bool differs = false;
  for (std::uint64_t seed = 2; seed < 12 && !differs; ++seed) {
    differs = plan_split(f.docs, dish, "FR", 0.3, seed).held_out != a.held_out;
  }
  CHECK(differs);

  // corpus order does not leak into the split
  auto reversed = f.docs;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(plan_split(reversed, dish, "FR", 0.3, 1).held_out == a.held_out);

  CHECK_THROWS_AS(plan_split(f.docs, dish, "FR", 1.0, 1), Error);
  CHECK(plan_split(f.docs, dish, "FR", 0.0, 1).held_out.empty());
}

TEST_CASE("eligibility floors") {
  std::vector<Document> docs{titled("1", "Pho", "VN"), titled("2", "Pho", "VN"), titled("3", "Pho", "FR")};
  const auto specs = parse_dish_specs(R"([{"name":"pho"}])");
  try {
    build_split(docs, specs[0], "VN");
    FAIL("expected IneligibleDish");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IneligibleDish);
  }
  docs.push_back(titled("4", "Pho", "US"));
  CHECK(build_split(docs, specs[0], "VN").eligible());
  // unknown countries are neither knowledge nor variation
  docs.push_back(titled("5", "Pho", std::nullopt));
  CHECK(plan_split(docs, specs[0], "VN", 0.3, 0).variations.size() == 2);
}

TEST_CASE("top ingredients keep ties") {
  const std::map<std::string, int> counts{{"a", 5}, {"b", 3}, {"c", 3}, {"d", 1}, {"e", 1},
                                          {"f", 1}, {"g", 1}, {"h", 1}, {"i", 1}, {"j", 1}};
  // round(0.2 * 10) = 2, and "c" ties with the cutoff
  CHECK(top_ingredients(counts, 0.2) == std::vector<std::string>{"a", "b", "c"});
  CHECK(top_ingredients({{"x", 1}, {"y", 2}}, 0.2) == std::vector<std::string>{"y"});
  CHECK(top_ingredients({}, 0.2).empty());
}

TEST_CASE("greedy modularity on two cliques") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 6);
  auto link = [&](int i, int j, double v) { w(i, j) = w(j, i) = v; };
  link(0, 1, 1); link(0, 2, 1); link(1, 2, 1);
  link(3, 4, 1); link(3, 5, 1); link(4, 5, 1);
  link(2, 3, 0.1);
  const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  const auto labels = greedy_modularity_labels(w, names);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[1] == labels[2]);
  CHECK(labels[3] == labels[4]);
  CHECK(labels[4] == labels[5]);
  CHECK(labels[0] != labels[3]);
  const std::vector<int> single(6, 0);
  CHECK(modularity(w, single) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("fixture clustering matches the exhaustive oracle") {
  const Fixture f;
  const auto expected = testing::load_json("cluster_expected.json");
  const auto result = country_clusters(f.docs);
  REQUIRE(result.countries == expected["countries"].get<std::vector<std::string>>());
  for (Eigen::Index i = 0; i < result.similarity.rows(); ++i) {
    for (Eigen::Index j = 0; j < result.similarity.cols(); ++j) {
      CHECK(result.similarity(i, j) == doctest::Approx(expected["similarity"][i][j].get<double>()).epsilon(1e-12));
    }
  }

  // every partition's modularity agrees with the oracle
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < result.countries.size(); ++i) index[result.countries[i]] = static_cast<int>(i);
  for (const auto& p : expected["partitions"]) {
    std::vector<int> labels(result.countries.size());
    int g = 0;
    for (const auto& group : p["partition"]) {
      for (const auto& c : group) labels[static_cast<std::size_t>(index[c.get<std::string>()])] = g;
      ++g;
    }
    CHECK(modularity(result.similarity, labels) == doctest::Approx(p["modularity"].get<double>()).epsilon(1e-12));
  }

  std::vector<std::vector<std::string>> got;
  double sum = 0.0;
  for (const auto& c : result.clusters) {
    got.push_back(c.members);
    sum += c.modularity;
  }
  CHECK(got == expected["best"]["partition"].get<std::vector<std::vector<std::string>>>());
  CHECK(std::abs(result.modularity - expected["best"]["modularity"].get<double>()) < 1e-9);
  CHECK(std::abs(sum - result.modularity) < 1e-9);
}
