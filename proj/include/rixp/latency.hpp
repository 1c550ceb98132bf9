#pragma once

// Distance -> RTT models. Every model is affine: rtt_ms = slope * km + intercept.
// Units are km in, milliseconds out.

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "rixp/error.hpp"

namespace rixp {

enum class ModelId {
  SpeedOfLight,
  WorldRegression,
  IoaRegression,
  IoaRegressionNoIntercept,
  Krajsa,
};

inline constexpr std::array<ModelId, 5> kAllModels = {
    ModelId::SpeedOfLight, ModelId::WorldRegression, ModelId::IoaRegression,
    ModelId::IoaRegressionNoIntercept, ModelId::Krajsa};

inline constexpr double kSpeedOfLightKmPerS = 299792.458;

// Round trip over fiber at 2/3 c, converted to ms per km.
inline constexpr double kSpeedOfLightSlopeMsPerKm =
    2.0 / ((2.0 / 3.0) * kSpeedOfLightKmPerS) * 1000.0;

struct LatencyModel {
  ModelId id;
  double slope_ms_per_km;
  double intercept_ms;
  std::string_view description;
};

inline constexpr std::string_view model_name(ModelId id) {
  switch (id) {
    case ModelId::SpeedOfLight: return "speed-of-light";
    case ModelId::WorldRegression: return "world-regression";
    case ModelId::IoaRegression: return "ioa-regression";
    case ModelId::IoaRegressionNoIntercept: return "ioa-regression-no-intercept";
    case ModelId::Krajsa: return "krajsa";
  }
  return "unknown";
}

inline ModelId parse_model(std::string_view name) {
  for (ModelId id : kAllModels) {
    if (model_name(id) == name) return id;
  }
  throw LookupError("unknown latency model '" + std::string(name) + "'");
}

inline constexpr LatencyModel model(ModelId id) {
  switch (id) {
    case ModelId::SpeedOfLight:
      return {id, kSpeedOfLightSlopeMsPerKm, 0.0,
              "propagation at 2/3 c, round trip; no queuing or processing"};
    case ModelId::WorldRegression:
      return {id, -0.00340391, 431.557,
              "regression over destinations world-wide; decreases with distance"};
    case ModelId::IoaRegression:
      return {id, 0.034018, 328.092, "regression over Indian Ocean destinations"};
    case ModelId::IoaRegressionNoIntercept:
      return {id, 0.034018, 0.0, "Indian Ocean regression with regional peering (no intercept)"};
    case ModelId::Krajsa:
      return {id, 0.00128, 0.0, "well-meshed region delay/distance ratio"};
  }
  throw LookupError("unknown latency model");
}

// All models in id order.
inline std::vector<LatencyModel> registry() {
  std::vector<LatencyModel> out;
  for (ModelId id : kAllModels) out.push_back(model(id));
  return out;
}

inline double evaluate(const LatencyModel& m, double distance_km) {
  if (!std::isfinite(distance_km) || distance_km < 0.0) {
    throw InputDomainError("distance must be finite and non-negative: " +
                           std::to_string(distance_km));
  }
  return m.slope_ms_per_km * distance_km + m.intercept_ms;
}

inline double evaluate(ModelId id, double distance_km) { return evaluate(model(id), distance_km); }

struct Rtt {
  double ms;
  bool negative;  // only possible for a negative slope far out
};

// Like evaluate(), but flags results below 0 ms instead of silently
// returning them. The value is never clamped.
inline Rtt evaluate_flagged(const LatencyModel& m, double distance_km) {
  const double ms = evaluate(m, distance_km);
  return {ms, ms < 0.0};
}

// Which model colours each triangle of a heatmap.
struct ModelSelection {
  ModelId bottom = ModelId::Krajsa;
  ModelId top = ModelId::IoaRegression;
};

}  // namespace rixp
