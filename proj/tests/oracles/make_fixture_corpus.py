#!/usr/bin/env python3
"""Generates the 50-recipe synthetic corpus and its 10-dish spec file.

Five countries, each with its own cooking vocabulary and pantry. Every dish
has recipes from its origin plus a few foreign takes. Output is deterministic.
Usage: make_fixture_corpus.py <out_dir>
"""
import json
import random
import sys

COUNTRIES = {
    "FR": {"demonym": "French", "words": ["butter", "cream", "shallot", "tarragon", "gently", "golden", "whisk"],
           "pantry": ["butter", "cream", "shallot", "flour", "egg", "thyme"]},
    "IT": {"demonym": "Italian", "words": ["olive", "basil", "parmesan", "garlic", "slowly", "fresh", "simmer"],
           "pantry": ["olive oil", "basil", "parmesan", "garlic", "tomato", "flour"]},
    "JP": {"demonym": "Japanese", "words": ["soy", "mirin", "dashi", "ginger", "lightly", "steam", "seaweed"],
           "pantry": ["soy sauce", "mirin", "dashi", "ginger", "rice", "scallion"]},
    "MX": {"demonym": "Mexican", "words": ["chili", "lime", "cilantro", "cumin", "smoky", "char", "tortilla"],
           "pantry": ["chili", "lime", "cilantro", "cumin", "corn", "tomato"]},
    "IN": {"demonym": "Indian", "words": ["turmeric", "cardamom", "ghee", "masala", "fragrant", "temper", "lentil"],
           "pantry": ["turmeric", "cardamom", "ghee", "garam masala", "ginger", "rice"]},
}
# Staples in every recipe of a country; shared staples link cuisines.
CORE = {"FR": ["butter", "flour"], "IT": ["flour", "tomato"], "MX": ["tomato", "corn"],
        "JP": ["rice", "soy sauce"], "IN": ["rice", "ginger"]}
COMMON = ["cook", "stir", "serve", "heat", "pan", "salt", "pepper", "water", "minute", "bowl"]

# name, origin, origin docs, foreign countries, declared origin?
DISHES = [
    ("pancake", "FR", 10, ["JP"], True),
    ("pizza", "IT", 2, ["MX", "JP"], True),
    ("sushi", "JP", 2, ["MX", "FR"], False),
    ("taco", "MX", 2, ["IN", "IT"], False),
    ("curry", "IN", 2, ["JP", "MX"], True),
    ("crepe", "FR", 2, ["IT", "IN"], False),
    ("risotto", "IT", 2, ["FR", "JP"], True),
    ("ramen", "JP", 2, ["IN", "MX"], False),
    ("enchilada", "MX", 2, ["FR", "IT"], True),
    ("samosa", "IN", 4, ["MX", "JP"], True),
]
BASE = {
    "pancake": ["batter", "flip", "griddle"], "pizza": ["dough", "oven", "cheese"],
    "sushi": ["fish", "vinegar", "roll"], "taco": ["shell", "beef", "salsa"],
    "curry": ["sauce", "onion", "chicken"], "crepe": ["batter", "thin", "fold"],
    "risotto": ["arborio", "stock", "ladle"], "ramen": ["noodle", "broth", "egg"],
    "enchilada": ["tortilla", "bake", "cheese"], "samosa": ["pastry", "potato", "fry"],
}


def tokens_for(rng, dish, country):
    words = BASE[dish] * 2 + rng.sample(COUNTRIES[country]["words"], 4) + rng.sample(COMMON, 3)
    rng.shuffle(words)
    return words[: rng.randint(9, len(words))]


def pos_of(word):
    if word.endswith("ly"):
        return "ADV"
    if word in {"golden", "fresh", "smoky", "fragrant", "thin"}:
        return "ADJ"
    if word in {"whisk", "simmer", "steam", "char", "temper", "cook", "stir", "serve", "heat", "flip",
                "roll", "bake", "fry", "fold", "ladle"}:
        return "VERB"
    return "NOUN"


def main():
    out_dir = sys.argv[1]
    rng = random.Random(20240601)
    lines = []
    counter = 0

    def emit(title, country, dish, tok_country, explicit):
        nonlocal counter
        counter += 1
        words = tokens_for(rng, dish, tok_country)
        text = "The " + " ".join(words) + "."
        tokens = [{"text": "The", "pos": "DET"}] + [{"text": w, "lemma": w, "pos": pos_of(w)} for w in words]
        core = CORE[tok_country]
        pantry = [p for p in COUNTRIES[tok_country]["pantry"] if p not in core]
        ingredients = sorted(set(core + rng.sample(pantry, 3) + [BASE[dish][0]]))
        lines.append({"id": f"r{counter:03d}", "title": title, "country": country if explicit else "UNKNOWN",
                      "product": dish, "ingredients": ingredients, "text": text, "tokens": tokens})

    specs = []
    for dish, origin, n_origin, foreign, declared in DISHES:
        plural = dish + "s"
        for i in range(n_origin):
            explicit = i % 2 == 0
            title = f"{'Classic' if explicit else COUNTRIES[origin]['demonym']} {plural.title() if i % 3 == 0 else dish.title()}"
            emit(title, origin, dish, origin, explicit)
        for c in foreign:
            emit(f"{COUNTRIES[c]['demonym']} {dish.title()}", c, dish, c, False)
        spec = {"name": dish, "aliases": [], "exclude": []}
        if declared:
            spec["origins"] = [origin]
        specs.append(spec)

    # Title override: an Indian curry whose title names France.
    for r in lines:
        if r["product"] == "curry" and r["country"] == "UNKNOWN" and r["title"].startswith("Indian"):
            r["title"] = "French Bistro Chicken Tikka Curry"
    curry = next(s for s in specs if s["name"] == "curry")
    curry["overrides"] = [{"title_pattern": "chicken tikka", "country": "IN"}]

    # An excluded title that would otherwise match "pancake".
    emit("Pancake Mix Cookies", "FR", "pancake", "FR", True)
    lines[-1]["product"] = "NONE"
    next(s for s in specs if s["name"] == "pancake")["exclude"] = ["pancake mix"]
    next(s for s in specs if s["name"] == "enchilada")["aliases"] = ["enchiladas suizas"]

    with open(f"{out_dir}/recipes.jsonl", "w") as f:
        for r in lines:
            f.write(json.dumps(r) + "\n")
    with open(f"{out_dir}/dishes.json", "w") as f:
        json.dump(specs, f, indent=1)
        f.write("\n")
    print(len(lines), "recipes", file=sys.stderr)


if __name__ == "__main__":
    main()
