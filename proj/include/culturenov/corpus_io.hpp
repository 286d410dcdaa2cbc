#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "culturenov/annotate.hpp"
#include "culturenov/corpus.hpp"

namespace culturenov {

struct DroppedDocument {
  std::string id;
  std::size_t line = 0;
  std::string reason;
};

struct LoadedCorpus {
  std::vector<Document> docs;  // input order
  std::vector<DroppedDocument> dropped;
};

/// Reads the recipe JSONL interchange:
///   {"id","title","country","product","ingredients":[...],"text":"..."}        (naive)
///   {"id","title",...,"tokens":[{"lemma"|"text","pos"}, ...]}                   (preannotated)
/// Documents the POS filter empties are dropped and listed in `dropped`.
/// Throws ParseError (with source and line) on malformed lines or duplicate ids.
LoadedCorpus parse_corpus_jsonl(std::string_view text, AnnotationProvider provider,
                                std::string_view source_name = "<memory>");
LoadedCorpus load_corpus_jsonl(const std::filesystem::path& path, AnnotationProvider provider);

}  // namespace culturenov
