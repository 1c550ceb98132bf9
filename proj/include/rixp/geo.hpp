#pragma once

// Geographic coordinates, locations and great-circle distances on a
// spherical Earth of radius 6371.1 km.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "rixp/error.hpp"
#include "rixp/matrix.hpp"

namespace rixp {

inline constexpr double kEarthRadiusKm = 6371.1;
inline constexpr double kMaxSurfaceDistanceKm = std::numbers::pi * kEarthRadiusKm;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Latitude/longitude in decimal degrees. Always finite and in range.
class Coordinate {
public:
  Coordinate(double latitude_deg, double longitude_deg)
      : latitude_deg_(latitude_deg), longitude_deg_(longitude_deg) {
    if (!std::isfinite(latitude_deg) || latitude_deg < -90.0 || latitude_deg > 90.0) {
      throw InputDomainError("latitude out of range [-90, 90]: " + std::to_string(latitude_deg));
    }
    if (!std::isfinite(longitude_deg) || longitude_deg < -180.0 || longitude_deg > 180.0) {
      throw InputDomainError("longitude out of range [-180, 180]: " +
                             std::to_string(longitude_deg));
    }
  }

  double latitude_deg() const noexcept { return latitude_deg_; }
  double longitude_deg() const noexcept { return longitude_deg_; }

  friend bool operator==(const Coordinate&, const Coordinate&) = default;

private:
  double latitude_deg_;
  double longitude_deg_;
};

inline bool is_iso_code(std::string_view code) {
  return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' &&
         code[1] <= 'Z';
}

struct Location {
  std::string iso_code;
  std::string name;
  Coordinate coordinate;

  friend bool operator==(const Location&, const Location&) = default;
};

using LocationSet = std::vector<Location>;

// Throws ValidationError unless every ISO code is well formed and unique and
// the set holds at least `min_size` entries.
inline void validate_locations(const LocationSet& set, std::size_t min_size = 2) {
  if (set.size() < min_size) {
    throw ValidationError("need at least " + std::to_string(min_size) + " locations, got " +
                          std::to_string(set.size()));
  }
  std::vector<std::string_view> codes;
  codes.reserve(set.size());
  for (const auto& loc : set) {
    if (!is_iso_code(loc.iso_code)) {
      throw ValidationError("invalid ISO code '" + loc.iso_code + "' (" + loc.name + ")");
    }
    codes.push_back(loc.iso_code);
  }
  std::sort(codes.begin(), codes.end());
  auto dup = std::adjacent_find(codes.begin(), codes.end());
  if (dup != codes.end()) {
    throw ValidationError("duplicate ISO code " + std::string(*dup));
  }
}

inline LocationSet sorted_by_iso(LocationSet set) {
  std::sort(set.begin(), set.end(),
            [](const Location& a, const Location& b) { return a.iso_code < b.iso_code; });
  return set;
}

// Spherical law of cosines:
//   cos t = cos x cos m cos(y - n) + sin x sin m,   d = t * R
// with x, m the latitudes and y, n the longitudes. The cosine term is
// clamped to [-1, 1]. The angle comes from atan2(sin t, cos t) rather than
// arccos(cos t), since arccos cannot resolve angles below ~1.5e-8 rad
// (about 0.1 m) and would break identity and the triangle inequality for
// near-coincident points.
inline double great_circle_distance(const Coordinate& a, const Coordinate& b) {
  // Canonical argument order keeps the arithmetic identical for swapped inputs.
  const bool swap = std::pair(b.latitude_deg(), b.longitude_deg()) <
                    std::pair(a.latitude_deg(), a.longitude_deg());
  const Coordinate& p = swap ? b : a;
  const Coordinate& q = swap ? a : b;
  const double x = deg_to_rad(p.latitude_deg());
  const double m = deg_to_rad(q.latitude_deg());
  const double dlon = deg_to_rad(q.longitude_deg()) - deg_to_rad(p.longitude_deg());
  const double cos_t =
      std::clamp(std::cos(x) * std::cos(m) * std::cos(dlon) + std::sin(x) * std::sin(m), -1.0, 1.0);
  const double e = std::cos(m) * std::sin(dlon);
  const double n = std::cos(x) * std::sin(m) - std::sin(x) * std::cos(m) * std::cos(dlon);
  return std::atan2(std::hypot(e, n), cos_t) * kEarthRadiusKm;
}

// Symmetric pairwise distances (km) labelled by ISO code.
class DistanceMatrix {
public:
  // Validates every invariant: >= 2 unique well-formed codes, zero diagonal,
  // exact symmetry, finite non-negative cells no longer than half the
  // circumference.
  DistanceMatrix(std::vector<std::string> codes, SquareMatrix km)
      : codes_(std::move(codes)), km_(std::move(km)) {
    const std::size_t n = codes_.size();
    if (n < 2) throw ValidationError("distance matrix needs at least 2 locations");
    if (km_.size() != n) throw ValidationError("distance matrix size does not match labels");
    auto sorted = codes_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_iso_code(sorted[i])) throw ValidationError("invalid ISO code '" + sorted[i] + "'");
      if (i > 0 && sorted[i] == sorted[i - 1]) {
        throw ValidationError("duplicate ISO code " + sorted[i]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (km_(i, i) != 0.0) throw ValidationError("nonzero diagonal at " + codes_[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = km_(i, j);
        if (v != km_(j, i)) {
          throw ValidationError("asymmetric cell " + codes_[i] + "/" + codes_[j]);
        }
        if (!std::isfinite(v) || v < 0.0 || v > kMaxSurfaceDistanceKm) {
          throw ValidationError("distance out of range at " + codes_[i] + "/" + codes_[j]);
        }
      }
    }
  }

  std::size_t size() const noexcept { return codes_.size(); }
  const std::vector<std::string>& codes() const noexcept { return codes_; }
  const SquareMatrix& cells() const noexcept { return km_; }

  double operator()(std::size_t i, std::size_t j) const { return km_(i, j); }

  std::size_t index_of(std::string_view code) const {
    auto it = std::find(codes_.begin(), codes_.end(), code);
    if (it == codes_.end()) throw LookupError("unknown ISO code " + std::string(code));
    return static_cast<std::size_t>(it - codes_.begin());
  }

  double km(std::string_view a, std::string_view b) const {
    return km_(index_of(a), index_of(b));
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
  std::vector<std::string> codes_;
  SquareMatrix km_;
};

// Locations are ordered by ISO code; each distance is computed once and
// mirrored.
inline DistanceMatrix build_distance_matrix(const LocationSet& locations) {
  validate_locations(locations);
  const LocationSet sorted = sorted_by_iso(locations);
  const std::size_t n = sorted.size();
  SquareMatrix km(n);
  std::vector<std::string> codes;
  codes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    codes.push_back(sorted[i].iso_code);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = great_circle_distance(sorted[i].coordinate, sorted[j].coordinate);
      km(i, j) = d;
      km(j, i) = d;
    }
  }
  return DistanceMatrix(std::move(codes), std::move(km));
}

struct LocationPair {
  std::string first;   // lexicographically smaller code
  std::string second;
  double km = 0.0;

  friend bool operator==(const LocationPair&, const LocationPair&) = default;
};

struct ExtremePairs {
  LocationPair closest;
  LocationPair farthest;
};

// Off-diagonal argmin/argmax. Equal distances resolve to the pair whose
// (first, second) codes sort first.
inline ExtremePairs min_max_pairs(const DistanceMatrix& m) {
  std::vector<LocationPair> pairs;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      auto a = m.codes()[i];
      auto b = m.codes()[j];
      if (b < a) std::swap(a, b);
      pairs.push_back({std::move(a), std::move(b), m(i, j)});
    }
  }
  auto key = [](const LocationPair& p) { return std::tie(p.first, p.second); };
  auto closest = std::min_element(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return a.km < b.km || (a.km == b.km && key(a) < key(b));
  });
  auto farthest = std::min_element(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return a.km > b.km || (a.km == b.km && key(a) < key(b));
  });
  return {*closest, *farthest};
}

}  // namespace rixp
