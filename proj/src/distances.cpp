#include "culturenov/distances.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "culturenov/error.hpp"
#include "culturenov/io.hpp"

namespace culturenov {
namespace {

using Json = nlohmann::json;

void validate(const CountryRecord& r) {
  if (r.iso.empty()) throw Error(ErrorKind::InvalidArgument, "country record without iso");
  if (r.capital) {
    const auto [lat, lon] = *r.capital;
    if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
      throw Error(ErrorKind::InvalidArgument, "capital of " + r.iso + " is out of range");
    }
  }
}

std::pair<std::string, std::string> unordered_key(const std::string& a, const std::string& b) {
  return a <= b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

CountryRegistry::CountryRegistry(std::vector<CountryRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const auto& a, const auto& b) { return a.iso < b.iso; });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate(records_[i]);
    if (i > 0 && records_[i].iso == records_[i - 1].iso) {
      throw Error(ErrorKind::InvalidArgument, "duplicate iso '" + records_[i].iso + "'");
    }
  }
}

CountryRegistry CountryRegistry::from_json_text(std::string_view text) {
  std::vector<CountryRecord> records;
  try {
    const auto doc = Json::parse(text);
    if (!doc.is_array()) throw Error(ErrorKind::ParseError, "registry must be a JSON array");
    for (const auto& item : doc) {
      CountryRecord r;
      r.iso = item.at("iso").get<std::string>();
      r.name = item.value("name", r.iso);
      if (auto it = item.find("demonyms"); it != item.end() && it->is_array()) {
        r.demonyms = it->get<std::vector<std::string>>();
      }
      if (auto it = item.find("capital"); it != item.end() && !it->is_null()) {
        const auto v = it->get<std::vector<double>>();
        if (v.size() != 2) throw Error(ErrorKind::ParseError, "capital of " + r.iso + " needs [lat, lon]");
        r.capital = LatLon{v[0], v[1]};
      }
      if (auto it = item.find("iw"); it != item.end() && !it->is_null()) {
        const auto v = it->get<std::vector<double>>();
        if (v.size() != 2) throw Error(ErrorKind::ParseError, "iw of " + r.iso + " needs [t, s]");
        r.iw = IwCoordinates{v[0], v[1]};
      }
      records.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("registry: ") + e.what());
  }
  return CountryRegistry(std::move(records));
}

CountryRegistry CountryRegistry::load(const std::filesystem::path& path) {
  try {
    return from_json_text(io::read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

const CountryRecord* CountryRegistry::find(std::string_view iso) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), iso,
                             [](const CountryRecord& r, std::string_view k) { return r.iso < k; });
  return (it != records_.end() && it->iso == iso) ? &*it : nullptr;
}

const CountryRecord& CountryRegistry::at(std::string_view iso) const {
  if (const auto* r = find(iso)) return *r;
  throw Error(ErrorKind::UnknownCountry, "'" + std::string(iso) + "' is not in the registry");
}

double iw_distance(const CountryRecord& a, const CountryRecord& b) {
  if (!a.iw || !b.iw) {
    throw Error(ErrorKind::MissingCoordinates, "IW coordinates missing for " + (a.iw ? b.iso : a.iso));
  }
  return std::hypot(a.iw->traditional - b.iw->traditional, a.iw->survival - b.iw->survival);
}

double haversine_km(LatLon a, LatLon b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double phi1 = a.lat * kRad;
  const double phi2 = b.lat * kRad;
  const double dphi = (b.lat - a.lat) * kRad;
  const double dlambda = (b.lon - a.lon) * kRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double geo_distance(const CountryRecord& a, const CountryRecord& b) {
  if (!a.capital || !b.capital) {
    throw Error(ErrorKind::MissingCoordinates,
                "capital coordinates missing for " + (a.capital ? b.iso : a.iso));
  }
  return haversine_km(*a.capital, *b.capital);
}

std::string_view to_string(DistanceKind kind) noexcept {
  switch (kind) {
    case DistanceKind::Iw: return "iw";
    case DistanceKind::Geo: return "geo";
    case DistanceKind::Linguistic: return "linguistic";
    case DistanceKind::Religious: return "religious";
  }
  return "unknown";
}

void DistanceMatrix::set(const std::string& a, const std::string& b, double distance) {
  if (!(distance >= 0.0) || !std::isfinite(distance)) {
    throw Error(ErrorKind::InvalidArgument, "distance " + a + "-" + b + " must be finite and >= 0");
  }
  if (a == b) {
    if (distance != 0.0) {
      throw Error(ErrorKind::ConflictingEntry, "self-distance of " + a + " must be 0");
    }
    return;
  }
  auto [it, inserted] = entries_.emplace(unordered_key(a, b), distance);
  if (!inserted && it->second != distance) {
    throw Error(ErrorKind::ConflictingEntry, a + "," + b + " given as both " +
                                                 io::format_double(it->second) + " and " +
                                                 io::format_double(distance));
  }
}

std::optional<double> DistanceMatrix::find(const std::string& a, const std::string& b) const {
  if (a == b) return 0.0;
  auto it = entries_.find(unordered_key(a, b));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double DistanceMatrix::at(const std::string& a, const std::string& b) const {
  if (auto d = find(a, b)) return *d;
  throw Error(ErrorKind::MissingPair, std::string(to_string(kind_)) + " distance " + a + "-" + b);
}

std::string DistanceMatrix::to_csv() const {
  std::string out = "iso_a,iso_b,distance\n";
  for (const auto& [k, v] : entries_) out += io::csv_row({k.first, k.second, io::format_double(v)});
  return out;
}

DistanceMatrix parse_distance_csv(std::string_view text, DistanceKind kind,
                                  const CountryRegistry& registry, std::string_view source_name) {
  DistanceMatrix m(kind);
  const auto rows = io::lines(text);
  std::size_t line_no = 0;
  bool header_seen = false;
  auto fail = [&](ErrorKind k, const std::string& msg) {
    throw Error(k, std::string(source_name) + ":" + std::to_string(line_no) + ": " + msg);
  };
  for (const auto& raw : rows) {
    ++line_no;
    if (io::trim(raw).empty()) continue;
    auto fields = io::split_csv_line(raw);
    for (auto& f : fields) f = io::trim(f);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"iso_a", "iso_b", "distance"}) {
        fail(ErrorKind::ParseError, "expected header iso_a,iso_b,distance");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) fail(ErrorKind::ParseError, "expected 3 fields");
    for (int i = 0; i < 2; ++i) {
      if (!registry.contains(fields[i])) fail(ErrorKind::UnknownCountry, "unknown iso '" + fields[i] + "'");
    }
    double d = 0.0;
    try {
      std::size_t used = 0;
      d = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ErrorKind::ParseError, "bad distance '" + fields[2] + "'");
    }
    try {
      m.set(fields[0], fields[1], d);
    } catch (const Error& e) {
      fail(e.kind() == ErrorKind::InvalidArgument ? ErrorKind::ParseError : e.kind(), e.what());
    }
  }
  return m;
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path, DistanceKind kind,
                                    const CountryRegistry& registry) {
  return parse_distance_csv(io::read_file(path), kind, registry, path.string());
}

DistanceMatrix registry_matrix(const CountryRegistry& registry, DistanceKind kind) {
  if (kind != DistanceKind::Iw && kind != DistanceKind::Geo) {
    throw Error(ErrorKind::InvalidArgument, "only IW and GEO matrices derive from the registry");
  }
  DistanceMatrix m(kind);
  const auto& recs = registry.records();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    for (std::size_t j = i + 1; j < recs.size(); ++j) {
      const auto& a = recs[i];
      const auto& b = recs[j];
      if (kind == DistanceKind::Iw && a.iw && b.iw) m.set(a.iso, b.iso, iw_distance(a, b));
      if (kind == DistanceKind::Geo && a.capital && b.capital) m.set(a.iso, b.iso, geo_distance(a, b));
    }
  }
  return m;
}

}  // namespace culturenov
