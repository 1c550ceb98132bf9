#pragma once

// Single-hub routing: every inter-location path is forced through one
// exchange point, so the routed distance between two non-hub locations is
// the sum of their two legs to the hub.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rixp/geo.hpp"
#include "rixp/latency.hpp"
#include "rixp/matrix.hpp"

namespace rixp {

struct HubScenario {
  std::string hub;
  std::vector<std::string> codes;  // same order as the distance matrix
  SquareMatrix routed_km;
  std::map<ModelId, SquareMatrix> delays_ms;

  std::size_t size() const noexcept { return codes.size(); }

  const SquareMatrix& delays(ModelId id) const {
    auto it = delays_ms.find(id);
    if (it == delays_ms.end()) {
      throw LookupError("scenario " + hub + " has no delays for model " +
                        std::string(model_name(id)));
    }
    return it->second;
  }
};

namespace detail {

inline double routed_km(const DistanceMatrix& m, std::size_t hub, std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  if (i == hub || j == hub) return m(i, j);
  return m(i, hub) + m(hub, j);
}

}  // namespace detail

// 0 for i == j, the direct distance when the hub is an endpoint, otherwise
// d(i, hub) + d(hub, j).
inline double routed_distance(const DistanceMatrix& m, std::string_view hub, std::string_view i,
                              std::string_view j) {
  return detail::routed_km(m, m.index_of(hub), m.index_of(i), m.index_of(j));
}

// The diagonal of every delay matrix is 0 regardless of the model's
// intercept: traffic to a local destination does not leave the island.
inline HubScenario build_scenario(const DistanceMatrix& m, std::string_view hub,
                                  const std::vector<ModelId>& models) {
  const std::size_t h = m.index_of(hub);
  const std::size_t n = m.size();
  HubScenario s;
  s.hub = std::string(hub);
  s.codes = m.codes();
  s.routed_km = SquareMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = detail::routed_km(m, h, i, j);
      s.routed_km(i, j) = d;
      s.routed_km(j, i) = d;
    }
  }
  for (ModelId id : models) {
    if (s.delays_ms.contains(id)) continue;
    const LatencyModel lm = model(id);
    SquareMatrix delay(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) delay(i, j) = evaluate(lm, s.routed_km(i, j));
      }
    }
    s.delays_ms.emplace(id, std::move(delay));
  }
  return s;
}

inline HubScenario build_scenario(const DistanceMatrix& m, std::string_view hub,
                                  const ModelSelection& models) {
  return build_scenario(m, hub, std::vector<ModelId>{models.bottom, models.top});
}

// One scenario per location, in ISO-code order.
template <typename Models>
std::vector<HubScenario> all_scenarios(const DistanceMatrix& m, const Models& models) {
  std::vector<std::string> hubs = m.codes();
  std::sort(hubs.begin(), hubs.end());
  std::vector<HubScenario> out;
  out.reserve(hubs.size());
  for (const auto& hub : hubs) out.push_back(build_scenario(m, hub, models));
  return out;
}

}  // namespace rixp
