#pragma once

// Location files and validation of a location set against a reference
// distance table.
//
// A location file is UTF-8 JSON:
//
//   {
//     "version": 1,
//     "locations": [
//       {"iso": "MG", "name": "Antananarivo", "lat": -18.91, "lon": 47.5255},
//       ...
//     ]
//   }

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rixp/csv.hpp"
#include "rixp/error.hpp"
#include "rixp/geo.hpp"

namespace rixp {

inline constexpr int kLocationFileVersion = 1;

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace detail

// Parses and validates a location file. The result is sorted by ISO code.
inline LocationSet parse_locations(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, column] = detail::line_column(text, offset);
    throw ParseError("malformed location file", line, column);
  }
  if (!doc.is_object()) throw ValidationError("location file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "version" && key != "locations") {
      throw ValidationError("unexpected top-level field '" + key + "'");
    }
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw ValidationError("missing integer 'version'");
  }
  if (doc["version"].get<long long>() != kLocationFileVersion) {
    throw ValidationError("unsupported location file version " + doc["version"].dump());
  }
  if (!doc.contains("locations") || !doc["locations"].is_array()) {
    throw ValidationError("missing 'locations' array");
  }

  LocationSet set;
  std::size_t index = 0;
  for (const auto& entry : doc["locations"]) {
    ++index;
    std::string label = "entry " + std::to_string(index);
    if (!entry.is_object()) throw ValidationError(label + ": not an object");
    if (entry.contains("iso") && entry["iso"].is_string()) {
      label += " (" + entry["iso"].get<std::string>() + ")";
    }
    for (const auto& [key, _] : entry.items()) {
      if (key != "iso" && key != "name" && key != "lat" && key != "lon") {
        throw ValidationError(label + ": unexpected field '" + key + "'");
      }
    }
    for (const char* key : {"iso", "name"}) {
      if (!entry.contains(key) || !entry[key].is_string()) {
        throw ValidationError(label + ": missing string '" + key + "'");
      }
    }
    for (const char* key : {"lat", "lon"}) {
      if (!entry.contains(key) || !entry[key].is_number()) {
        throw ValidationError(label + ": missing number '" + key + "'");
      }
    }
    const auto iso = entry["iso"].get<std::string>();
    if (!is_iso_code(iso)) {
      throw ValidationError(label + ": ISO code must be two uppercase letters, got '" + iso + "'");
    }
    try {
      set.push_back({iso, entry["name"].get<std::string>(),
                     Coordinate(entry["lat"].get<double>(), entry["lon"].get<double>())});
    } catch (const InputDomainError& e) {
      throw ValidationError(label + ": " + e.what());
    }
  }
  validate_locations(set);
  return sorted_by_iso(std::move(set));
}

inline LocationSet load_locations(const std::filesystem::path& path) {
  return parse_locations(detail::read_file(path));
}

inline std::string serialize_locations(const LocationSet& set) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["version"] = kLocationFileVersion;
  doc["locations"] = ordered_json::array();
  for (const auto& loc : set) {
    ordered_json e;
    e["iso"] = loc.iso_code;
    e["name"] = loc.name;
    e["lat"] = loc.coordinate.latitude_deg();
    e["lon"] = loc.coordinate.longitude_deg();
    doc["locations"].push_back(std::move(e));
  }
  return doc.dump(2) + "\n";
}

inline void save_locations(const LocationSet& set, const std::filesystem::path& path) {
  detail::write_file_atomically(path, serialize_locations(set));
}

struct PairCheck {
  std::string from;
  std::string to;
  double computed_km;
  double reference_km;
  double relative_error;
  bool within_tolerance;
};

struct ReferenceReport {
  double tolerance;
  double max_relative_error = 0.0;
  bool pass = true;
  std::vector<PairCheck> pairs;
};

// Compares computed distances against every off-diagonal cell of the
// reference (both (i, j) and (j, i), so asymmetric published tables are
// checked in full).
inline ReferenceReport validate_against_reference(const LocationSet& set,
                                                  const LabeledMatrix& reference,
                                                  double tolerance) {
  if (!std::isfinite(tolerance) || tolerance < 0.0) {
    throw InputDomainError("tolerance must be a non-negative fraction");
  }
  const DistanceMatrix computed = build_distance_matrix(set);
  auto ref_codes = reference.codes;
  auto our_codes = computed.codes();
  std::sort(ref_codes.begin(), ref_codes.end());
  std::sort(our_codes.begin(), our_codes.end());
  if (ref_codes != our_codes) {
    throw ValidationError("reference ISO codes do not match the location set");
  }

  ReferenceReport report;
  report.tolerance = tolerance;
  for (const auto& a : reference.codes) {
    for (const auto& b : reference.codes) {
      if (a == b) continue;
      const double ref = reference.values(reference.index_of(a), reference.index_of(b));
      const double got = computed.km(a, b);
      double rel = 0.0;
      if (ref != got) {
        rel = ref == 0.0 ? std::numeric_limits<double>::infinity() : std::fabs(got - ref) / ref;
      }
      const bool ok = rel <= tolerance;
      report.pass = report.pass && ok;
      report.max_relative_error = std::max(report.max_relative_error, rel);
      report.pairs.push_back({a, b, got, ref, rel, ok});
    }
  }
  return report;
}

}  // namespace rixp
