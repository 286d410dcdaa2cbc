#include "culturenov/error.hpp"

namespace culturenov {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::InsufficientKB: return "InsufficientKB";
    case ErrorKind::MissingCoordinates: return "MissingCoordinates";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConflictingEntry: return "ConflictingEntry";
    case ErrorKind::UnknownCountry: return "UnknownCountry";
    case ErrorKind::MissingPair: return "MissingPair";
    case ErrorKind::IneligibleDish: return "IneligibleDish";
    case ErrorKind::ConstantSeries: return "ConstantSeries";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::AllTied: return "AllTied";
    case ErrorKind::DuplicateIds: return "DuplicateIds";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::InsufficientObservations: return "InsufficientObservations";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace culturenov
