#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace culturenov {

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

/// Inglehart-Welzel map coordinates.
struct IwCoordinates {
  double traditional = 0.0;
  double survival = 0.0;
};

struct CountryRecord {
  std::string iso;
  std::string name;
  std::vector<std::string> demonyms;
  std::optional<LatLon> capital;
  std::optional<IwCoordinates> iw;
};

/// Country records keyed by ISO code.
class CountryRegistry {
 public:
  CountryRegistry() = default;
  /// Throws InvalidArgument on duplicate ISO codes or out-of-range coordinates.
  explicit CountryRegistry(std::vector<CountryRecord> records);

  /// JSON array of {"iso","name","demonyms":[...],"capital":[lat,lon],"iw":[t,s]}.
  static CountryRegistry from_json_text(std::string_view text);
  static CountryRegistry load(const std::filesystem::path& path);

  const CountryRecord* find(std::string_view iso) const;
  /// Throws UnknownCountry.
  const CountryRecord& at(std::string_view iso) const;
  bool contains(std::string_view iso) const { return find(iso) != nullptr; }
  const std::vector<CountryRecord>& records() const noexcept { return records_; }

 private:
  std::vector<CountryRecord> records_;  // sorted by iso
};

/// Euclidean distance on the Inglehart-Welzel plane. Throws MissingCoordinates.
double iw_distance(const CountryRecord& a, const CountryRecord& b);
/// Haversine great-circle distance between capitals in km. Throws MissingCoordinates.
double geo_distance(const CountryRecord& a, const CountryRecord& b);
double haversine_km(LatLon a, LatLon b);

enum class DistanceKind { Iw, Geo, Linguistic, Religious };
std::string_view to_string(DistanceKind kind) noexcept;

/// Symmetric sparse country-pair distances. Self-pairs are always 0.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(DistanceKind kind) : kind_(kind) {}

  DistanceKind kind() const noexcept { return kind_; }
  /// Throws ConflictingEntry if the unordered pair already holds a different value.
  void set(const std::string& a, const std::string& b, double distance);
  std::optional<double> find(const std::string& a, const std::string& b) const;
  /// Throws MissingPair.
  double at(const std::string& a, const std::string& b) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::pair<std::string, std::string>, double>& entries() const noexcept {
    return entries_;
  }

  /// CSV with header iso_a,iso_b,distance; rows sorted by key.
  std::string to_csv() const;

 private:
  DistanceKind kind_;
  std::map<std::pair<std::string, std::string>, double> entries_;
};

/// Parses the iso_a,iso_b,distance CSV. An empty input yields an empty matrix.
/// Throws ParseError, ConflictingEntry, or UnknownCountry (against `registry`).
DistanceMatrix parse_distance_csv(std::string_view text, DistanceKind kind,
                                  const CountryRegistry& registry,
                                  std::string_view source_name = "<memory>");
DistanceMatrix load_distance_matrix(const std::filesystem::path& path, DistanceKind kind,
                                    const CountryRegistry& registry);

/// All pairwise distances computable from the registry (pairs lacking coordinates skipped).
DistanceMatrix registry_matrix(const CountryRegistry& registry, DistanceKind kind);

}  // namespace culturenov
