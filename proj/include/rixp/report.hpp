#pragma once

// Text and JSON renderings of a RankingReport.

#include <cstdio>
#include <string>

#include <json.hpp>

#include "rixp/latency.hpp"
#include "rixp/ranking.hpp"

namespace rixp {

// Scorecards, then the elimination order, then the winner on the last line.
inline std::string format_ranking_table(const RankingReport& r) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "objective: %s   model: %s   bright threshold: %.3f ms\n\n",
                std::string(objective_name(r.objective)).c_str(),
                std::string(model_name(r.model)).c_str(), r.bright_threshold_ms);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-4s %18s %14s %14s\n", "hub", "total delay (ms)",
                "bright cells", "cellwise wins");
  out += buf;
  for (const auto& c : r.scorecards) {
    std::snprintf(buf, sizeof buf, "%-4s %18.3f %14zu %14zu\n", c.hub.c_str(),
                  c.total_delay_ms.at(r.model), c.bright_cells.at(r.model), c.total_wins());
    out += buf;
  }
  out += "\neliminated (worst first):\n";
  for (const auto& e : r.eliminated) out += "  " + e.hub + ": " + e.reason + "\n";
  for (const auto& [a, b] : r.ties) out += "tie: " + a + " = " + b + " (ordered by ISO code)\n";
  out += "\nordering:";
  for (const auto& h : r.ordering) out += " " + h;
  out += "\nwinner: " + r.winner + "\n";
  return out;
}

inline std::string ranking_to_json(const RankingReport& r) {
  nlohmann::ordered_json j;
  j["objective"] = objective_name(r.objective);
  j["model"] = model_name(r.model);
  j["bright_threshold_ms"] = r.bright_threshold_ms;
  j["ordering"] = r.ordering;
  j["winner"] = r.winner;
  j["eliminated"] = nlohmann::ordered_json::array();
  for (const auto& e : r.eliminated) {
    j["eliminated"].push_back({{"hub", e.hub}, {"score", e.score}, {"reason", e.reason}});
  }
  j["ties"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : r.ties) j["ties"].push_back({a, b});
  j["scorecards"] = nlohmann::ordered_json::array();
  for (const auto& c : r.scorecards) {
    nlohmann::ordered_json card;
    card["hub"] = c.hub;
    for (const auto& [m, v] : c.bright_cells) card["bright_cells"][std::string(model_name(m))] = v;
    for (const auto& [m, v] : c.total_delay_ms) {
      card["total_delay_ms"][std::string(model_name(m))] = v;
    }
    card["cellwise_wins"] = nlohmann::ordered_json::object();
    for (const auto& [h, w] : c.cellwise_wins) card["cellwise_wins"][h] = w;
    j["scorecards"].push_back(std::move(card));
  }
  return j.dump(2) + "\n";
}

}  // namespace rixp
