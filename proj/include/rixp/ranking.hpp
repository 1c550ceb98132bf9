#pragma once

// Scoring and ranking of candidate hubs.
//
// Three objectives are available:
//   total-delay  sum of all off-diagonal delays (1-median), lower is better
//   bright-cells number of off-diagonal cells above a delay threshold,
//                lower is better
//   cellwise     head-to-head cell comparisons won against every other
//                candidate, higher is better
// Ties on the objective fall back to lower total delay, then ISO code.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rixp/error.hpp"
#include "rixp/hub.hpp"
#include "rixp/latency.hpp"

namespace rixp {

inline constexpr double kDelayTieToleranceMs = 1e-9;

enum class Objective { TotalDelay, BrightCells, CellwiseDominance };

inline constexpr std::string_view objective_name(Objective o) {
  switch (o) {
    case Objective::TotalDelay: return "total-delay";
    case Objective::BrightCells: return "bright-cells";
    case Objective::CellwiseDominance: return "cellwise";
  }
  return "unknown";
}

inline Objective parse_objective(std::string_view name) {
  for (Objective o : {Objective::TotalDelay, Objective::BrightCells,
                      Objective::CellwiseDominance}) {
    if (objective_name(o) == name) return o;
  }
  throw LookupError("unknown objective '" + std::string(name) + "'");
}

// Absolute threshold in ms; std::nullopt selects the automatic threshold
// (global median over every candidate's off-diagonal cells).
using BrightThreshold = std::optional<double>;

inline std::size_t bright_cell_count(const HubScenario& s, ModelId id, double threshold_ms) {
  const SquareMatrix& d = s.delays(id);
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i != j && d(i, j) > threshold_ms) ++count;
    }
  }
  return count;
}

// Median of the off-diagonal delays pooled across all scenarios, so that
// counts are comparable between candidates.
inline double auto_threshold(const std::vector<HubScenario>& scenarios, ModelId id) {
  std::vector<double> values;
  for (const auto& s : scenarios) {
    const SquareMatrix& d = s.delays(id);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (i != j) values.push_back(d(i, j));
      }
    }
  }
  if (values.empty()) throw ValidationError("no off-diagonal cells to take a median of");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

inline double resolve_threshold(const std::vector<HubScenario>& scenarios, ModelId id,
                                BrightThreshold threshold) {
  return threshold ? *threshold : auto_threshold(scenarios, id);
}

struct CellwiseResult {
  std::size_t wins_a = 0;
  std::size_t wins_b = 0;
  std::size_t ties = 0;

  friend bool operator==(const CellwiseResult&, const CellwiseResult&) = default;
};

// Compares each unordered off-diagonal pair {i, j}; the smaller delay wins,
// differences within 1e-9 ms tie.
inline CellwiseResult cellwise_compare(const HubScenario& a, const HubScenario& b, ModelId id) {
  if (a.codes != b.codes) throw ValidationError("scenarios cover different location sets");
  const SquareMatrix& da = a.delays(id);
  const SquareMatrix& db = b.delays(id);
  CellwiseResult r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double x = da(i, j);
      const double y = db(i, j);
      if (std::fabs(x - y) <= kDelayTieToleranceMs) {
        ++r.ties;
      } else if (x < y) {
        ++r.wins_a;
      } else {
        ++r.wins_b;
      }
    }
  }
  return r;
}

inline double total_delay(const HubScenario& s, ModelId id) {
  const SquareMatrix& d = s.delays(id);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i != j) sum += d(i, j);
    }
  }
  return sum;
}

struct ScoreCard {
  std::string hub;
  std::map<ModelId, std::size_t> bright_cells;
  std::map<ModelId, double> total_delay_ms;
  // Cells won against each other candidate, under the ranking model.
  std::map<std::string, std::size_t> cellwise_wins;

  std::size_t total_wins() const {
    std::size_t sum = 0;
    for (const auto& [_, w] : cellwise_wins) sum += w;
    return sum;
  }
};

struct Elimination {
  std::string hub;
  double score;
  std::string reason;
};

struct RankingReport {
  Objective objective;
  ModelId model;
  double bright_threshold_ms;
  std::vector<std::string> ordering;  // best first
  std::string winner;
  std::vector<Elimination> eliminated;  // worst first
  std::vector<std::pair<std::string, std::string>> ties;
  std::vector<ScoreCard> scorecards;  // ISO order

  const ScoreCard& scorecard(std::string_view hub) const {
    for (const auto& c : scorecards) {
      if (c.hub == hub) return c;
    }
    throw LookupError("no scorecard for " + std::string(hub));
  }
};

namespace detail {

inline double objective_score(const ScoreCard& c, Objective o, ModelId id) {
  switch (o) {
    case Objective::TotalDelay: return c.total_delay_ms.at(id);
    case Objective::BrightCells: return static_cast<double>(c.bright_cells.at(id));
    case Objective::CellwiseDominance: return static_cast<double>(c.total_wins());
  }
  return 0.0;
}

inline bool better(double a, double b, Objective o) {
  return o == Objective::CellwiseDominance ? a > b : a < b;
}

inline std::string describe(Objective o, double score) {
  char buf[96];
  switch (o) {
    case Objective::TotalDelay:
      std::snprintf(buf, sizeof buf, "total delay %.3f ms", score);
      break;
    case Objective::BrightCells:
      std::snprintf(buf, sizeof buf, "%.0f bright cells", score);
      break;
    case Objective::CellwiseDominance:
      std::snprintf(buf, sizeof buf, "%.0f cells won head-to-head", score);
      break;
  }
  return buf;
}

}  // namespace detail

// Ranks the candidates. The input order of `scenarios` does not affect the
// result.
inline RankingReport rank(std::vector<HubScenario> scenarios, Objective objective, ModelId id,
                          BrightThreshold threshold = std::nullopt) {
  if (scenarios.size() < 2) throw ValidationError("ranking needs at least 2 candidate scenarios");
  std::sort(scenarios.begin(), scenarios.end(),
            [](const HubScenario& a, const HubScenario& b) { return a.hub < b.hub; });
  for (std::size_t k = 1; k < scenarios.size(); ++k) {
    if (scenarios[k].codes != scenarios[0].codes) {
      throw ValidationError("scenarios cover different location sets");
    }
    if (scenarios[k].hub == scenarios[k - 1].hub) {
      throw ValidationError("duplicate candidate " + scenarios[k].hub);
    }
  }

  std::vector<ModelId> models;
  for (const auto& [m, _] : scenarios[0].delays_ms) {
    const bool everywhere = std::all_of(scenarios.begin(), scenarios.end(),
                                        [m](const HubScenario& s) { return s.delays_ms.contains(m); });
    if (everywhere) models.push_back(m);
  }
  if (std::find(models.begin(), models.end(), id) == models.end()) {
    throw LookupError("model " + std::string(model_name(id)) + " missing from scenarios");
  }

  std::map<ModelId, double> thresholds;
  for (ModelId m : models) thresholds[m] = resolve_threshold(scenarios, m, threshold);

  RankingReport report{objective, id, thresholds.at(id), {}, {}, {}, {}, {}};
  for (const auto& s : scenarios) {
    ScoreCard card;
    card.hub = s.hub;
    for (ModelId m : models) {
      card.bright_cells[m] = bright_cell_count(s, m, thresholds.at(m));
      card.total_delay_ms[m] = total_delay(s, m);
    }
    report.scorecards.push_back(std::move(card));
  }
  for (std::size_t a = 0; a < scenarios.size(); ++a) {
    for (std::size_t b = a + 1; b < scenarios.size(); ++b) {
      const CellwiseResult r = cellwise_compare(scenarios[a], scenarios[b], id);
      report.scorecards[a].cellwise_wins[scenarios[b].hub] = r.wins_a;
      report.scorecards[b].cellwise_wins[scenarios[a].hub] = r.wins_b;
    }
  }

  std::vector<const ScoreCard*> order;
  for (const auto& c : report.scorecards) order.push_back(&c);
  std::sort(order.begin(), order.end(), [&](const ScoreCard* a, const ScoreCard* b) {
    const double sa = detail::objective_score(*a, objective, id);
    const double sb = detail::objective_score(*b, objective, id);
    if (sa != sb) return detail::better(sa, sb, objective);
    const double ta = a->total_delay_ms.at(id);
    const double tb = b->total_delay_ms.at(id);
    if (ta != tb) return ta < tb;
    return a->hub < b->hub;
  });

  for (const ScoreCard* c : order) report.ordering.push_back(c->hub);
  report.winner = report.ordering.front();

  for (std::size_t k = 1; k < order.size(); ++k) {
    const ScoreCard& prev = *order[k - 1];
    const ScoreCard& cur = *order[k];
    const bool same_score = detail::objective_score(prev, objective, id) ==
                            detail::objective_score(cur, objective, id);
    const bool same_total = std::fabs(prev.total_delay_ms.at(id) - cur.total_delay_ms.at(id)) <=
                            kDelayTieToleranceMs;
    if (same_score && same_total) report.ties.emplace_back(prev.hub, cur.hub);
  }

  for (std::size_t k = order.size(); k-- > 1;) {
    const double score = detail::objective_score(*order[k], objective, id);
    report.eliminated.push_back(
        {order[k]->hub, score,
         detail::describe(objective, score) + " (rank " + std::to_string(k + 1) + ")"});
  }
  return report;
}

}  // namespace rixp
