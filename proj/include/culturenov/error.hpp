#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace culturenov {

enum class ErrorKind {
  // corpus_model
  EmptyAfterFilter,
  EmptyDocument,
  EmptyCorpus,
  // novelty_metrics
  InsufficientKB,
  // cultural_distances
  MissingCoordinates,
  ParseError,
  ConflictingEntry,
  UnknownCountry,
  MissingPair,
  // dataset_builder
  IneligibleDish,
  // stats
  ConstantSeries,
  LengthMismatch,
  AllTied,
  DuplicateIds,
  RankDeficient,
  InsufficientObservations,
  // generic
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace culturenov
