#include "culturenov/corpus_io.hpp"

#include <json.hpp>

#include <cctype>
#include <unordered_set>

#include "culturenov/error.hpp"
#include "culturenov/io.hpp"

namespace culturenov {
namespace {

using Json = nlohmann::json;

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

LoadedCorpus parse_corpus_jsonl(std::string_view text, AnnotationProvider provider,
                                std::string_view source_name) {
  LoadedCorpus out;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& line : io::lines(text)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const auto where = std::string(source_name) + ":" + std::to_string(line_no);

    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::ParseError, where + ": " + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorKind::ParseError, where + ": expected a JSON object");

    Document doc;
    try {
      doc.id = obj.at("id").is_string() ? obj.at("id").get<std::string>()
                                        : obj.at("id").dump();
      doc.title = obj.value("title", std::string{});
      if (auto it = obj.find("country"); it != obj.end() && it->is_string() && !it->get<std::string>().empty()) {
        const auto c = upper(it->get<std::string>());
        if (c != "UNKNOWN") doc.country = c;
      }
      if (auto it = obj.find("product"); it != obj.end() && it->is_string()) {
        const auto p = it->get<std::string>();
        if (!p.empty() && p != "NONE") doc.product = p;
      }
      if (auto it = obj.find("ingredients"); it != obj.end() && it->is_array()) {
        for (const auto& ing : *it) {
          auto norm = normalize_ingredient(ing.get<std::string>());
          if (!norm.empty()) doc.ingredients.insert(std::move(norm));
        }
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::ParseError, where + ": " + e.what());
    }
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorKind::ParseError, where + ": duplicate document id '" + doc.id + "'");
    }

    try {
      if (provider == AnnotationProvider::Preannotated) {
        auto it = obj.find("tokens");
        if (it == obj.end() || !it->is_array()) {
          throw Error(ErrorKind::ParseError, where + ": preannotated input needs a \"tokens\" array");
        }
        std::vector<RawToken> raw;
        raw.reserve(it->size());
        for (const auto& t : *it) {
          RawToken rt;
          rt.text = t.value("text", std::string{});
          if (auto l = t.find("lemma"); l != t.end() && l->is_string()) rt.lemma = l->get<std::string>();
          rt.tag = t.at("pos").get<std::string>();
          raw.push_back(std::move(rt));
        }
        doc.raw_token_count = static_cast<std::int64_t>(raw.size());
        doc.body_tokens = annotate_pretokenized(raw);
      } else {
        auto it = obj.find("text");
        if (it == obj.end() || !it->is_string()) {
          throw Error(ErrorKind::ParseError, where + ": naive annotation needs a \"text\" string");
        }
        const auto& body = it->get_ref<const std::string&>();
        doc.raw_token_count = static_cast<std::int64_t>(naive_tokenize(body).size());
        doc.body_tokens = annotate_naive(body);
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::ParseError, where + ": " + e.what());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyAfterFilter && e.kind() != ErrorKind::EmptyDocument) throw;
      out.dropped.push_back({doc.id, line_no, std::string(to_string(e.kind()))});
      continue;
    }
    out.docs.push_back(std::move(doc));
  }
  return out;
}

LoadedCorpus load_corpus_jsonl(const std::filesystem::path& path, AnnotationProvider provider) {
  return parse_corpus_jsonl(io::read_file(path), provider, path.string());
}

}  // namespace culturenov
