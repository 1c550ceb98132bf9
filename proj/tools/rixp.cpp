// rixp: exchange-point placement analysis from the command line.
//
// Exit status: 0 success, 1 domain or validation failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rixp/http_transport.hpp"
#include "rixp/rixp.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::vector<rixp::ModelId> parse_model_list(const std::string& csv) {
  std::vector<rixp::ModelId> out;
  std::istringstream in(csv);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (!name.empty()) out.push_back(rixp::parse_model(name));
  }
  if (out.empty()) throw rixp::LookupError("no latency model given");
  return out;
}

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  fs::path out = path.parent_path() / (path.stem().string() + "-" + suffix);
  out += path.extension();
  return out;
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

fs::path default_cache_path() {
  if (const char* p = std::getenv("RIXP_GEOCODE_CACHE"); p && *p) return p;
  if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg && *xdg) {
    return fs::path(xdg) / "rixp" / "geocode-cache.jsonl";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".local" / "share" / "rixp" / "geocode-cache.jsonl";
  }
  return "geocode-cache.jsonl";
}

void print_extremes(const rixp::DistanceMatrix& m) {
  const auto [closest, farthest] = rixp::min_max_pairs(m);
  std::printf("closest:  %s-%s %.2f km\nfarthest: %s-%s %.2f km\n", closest.first.c_str(),
              closest.second.c_str(), closest.km, farthest.first.c_str(),
              farthest.second.c_str(), farthest.km);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regional exchange point placement analysis"};
  app.require_subcommand(1);

  std::string locations_path;
  std::string out_path;

  auto* distances = app.add_subcommand("distances", "Pairwise great-circle distances (km)");
  distances->add_option("--locations", locations_path, "Location file")->required();
  distances->add_option("--out", out_path, "Write the matrix as CSV");

  std::string hub;
  std::string models_csv = "krajsa,ioa-regression";
  auto* evaluate = app.add_subcommand("evaluate", "Delay matrices for one hub");
  evaluate->add_option("--locations", locations_path, "Location file")->required();
  evaluate->add_option("--hub", hub, "Hub ISO code")->required();
  evaluate->add_option("--models", models_csv, "Comma-separated model ids")->capture_default_str();
  evaluate->add_option("--out", out_path,
                       "CSV output; with several models, '-<model>' is added to the name");

  std::string objective_name = "total-delay";
  std::string model_name = "krajsa";
  std::string threshold = "auto";
  std::string json_path;
  auto* rank = app.add_subcommand("rank", "Rank every location as a candidate hub");
  rank->add_option("--locations", locations_path, "Location file")->required();
  rank->add_option("--objective", objective_name, "total-delay | bright-cells | cellwise")
      ->capture_default_str();
  rank->add_option("--model", model_name, "Latency model id")->capture_default_str();
  rank->add_option("--threshold", threshold, "Bright-cell threshold in ms, or 'auto'")
      ->capture_default_str();
  rank->add_option("--json", json_path, "Also write the report as JSON");

  std::string bottom_name = "krajsa";
  std::string top_name = "ioa-regression";
  bool no_labels = false;
  bool per_figure = false;
  auto* heatmap = app.add_subcommand("heatmap", "Split-diagonal SVG heatmaps");
  heatmap->add_option("--locations", locations_path, "Location file")->required();
  heatmap->add_option("--hub", hub, "Hub ISO code or 'all'")->required();
  heatmap->add_option("--out", out_path, "Output directory (or .svg file for a single hub)")
      ->required();
  heatmap->add_option("--bottom", bottom_name, "Model for the lower triangle")
      ->capture_default_str();
  heatmap->add_option("--top", top_name, "Model for the upper triangle")->capture_default_str();
  heatmap->add_flag("--no-labels", no_labels, "Omit numeric cell labels");
  heatmap->add_flag("--per-figure-scale", per_figure,
                    "Normalize colours per figure instead of across all hubs");

  std::string query;
  std::string endpoint = env_or("RIXP_GEOCODER_URL", "");
  std::string cache_path;
  auto* geocode = app.add_subcommand("geocode", "Resolve a place name to coordinates");
  geocode->add_option("--query", query, "Place name")->required();
  geocode->add_option("--endpoint", endpoint, "Geocoder base URL (default $RIXP_GEOCODER_URL)");
  geocode->add_option("--cache", cache_path, "Cache file");

  std::string reference_path;
  double tolerance = 0.02;
  auto* validate = app.add_subcommand("validate", "Compare distances with a reference CSV");
  validate->add_option("--locations", locations_path, "Location file")->required();
  validate->add_option("--reference", reference_path, "Reference distance CSV")->required();
  validate->add_option("--tolerance", tolerance, "Allowed relative error")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*distances) {
      const auto m = rixp::build_distance_matrix(rixp::load_locations(locations_path));
      if (out_path.empty()) {
        std::fputs(rixp::format_matrix_csv(rixp::labeled(m)).c_str(), stdout);
      } else {
        rixp::export_matrix(m, out_path);
        print_extremes(m);
      }
    } else if (*evaluate) {
      const auto m = rixp::build_distance_matrix(rixp::load_locations(locations_path));
      const auto models = parse_model_list(models_csv);
      const auto scenario = rixp::build_scenario(m, hub, models);
      for (auto id : models) {
        const auto& delays = scenario.delays(id);
        for (std::size_t i = 0; i < scenario.size(); ++i) {
          for (std::size_t j = 0; j < scenario.size(); ++j) {
            if (delays(i, j) < 0.0) {
              std::fprintf(stderr, "warning: %s gives a negative delay for %s-%s\n",
                           std::string(rixp::model_name(id)).c_str(), scenario.codes[i].c_str(),
                           scenario.codes[j].c_str());
            }
          }
        }
        if (out_path.empty()) {
          std::printf("# hub: %s, model: %s\n", scenario.hub.c_str(),
                      std::string(rixp::model_name(id)).c_str());
          std::fputs(rixp::format_matrix_csv(scenario.codes, delays, "ms").c_str(), stdout);
        } else {
          const fs::path target = models.size() == 1
                                      ? fs::path(out_path)
                                      : with_suffix(out_path, std::string(rixp::model_name(id)));
          rixp::export_matrix(scenario.codes, delays, rixp::MatrixKind::Delay, target);
          std::printf("wrote %s\n", target.string().c_str());
        }
      }
    } else if (*rank) {
      const auto objective = rixp::parse_objective(objective_name);
      const auto model = rixp::parse_model(model_name);
      rixp::BrightThreshold bright;
      if (threshold != "auto") {
        try {
          std::size_t used = 0;
          bright = std::stod(threshold, &used);
          if (used != threshold.size()) throw std::invalid_argument(threshold);
        } catch (const std::exception&) {
          std::fprintf(stderr, "--threshold: expected a number or 'auto', got '%s'\n",
                       threshold.c_str());
          return kExitUsage;
        }
      }
      const auto m = rixp::build_distance_matrix(rixp::load_locations(locations_path));
      const auto report =
          rixp::rank(rixp::all_scenarios(m, std::vector{model}), objective, model, bright);
      if (!json_path.empty()) {
        rixp::detail::write_file_atomically(json_path, rixp::ranking_to_json(report));
      }
      std::fputs(rixp::format_ranking_table(report).c_str(), stdout);
    } else if (*heatmap) {
      const rixp::ModelSelection models{rixp::parse_model(bottom_name),
                                        rixp::parse_model(top_name)};
      const auto m = rixp::build_distance_matrix(rixp::load_locations(locations_path));
      const auto scenarios = rixp::all_scenarios(m, models);
      const auto shared = rixp::shared_scale(scenarios, models);
      std::vector<const rixp::HubScenario*> selected;
      for (const auto& s : scenarios) {
        if (hub == "all" || s.hub == hub) selected.push_back(&s);
      }
      if (selected.empty()) throw rixp::LookupError("unknown ISO code " + hub);
      const bool single_file = hub != "all" && fs::path(out_path).extension() == ".svg";
      if (!single_file) fs::create_directories(out_path);
      for (const auto* s : selected) {
        const rixp::HeatmapSpec spec{*s, models,
                                     per_figure ? rixp::per_figure_scale(*s, models) : shared,
                                     !no_labels};
        const fs::path target =
            single_file ? fs::path(out_path) : fs::path(out_path) / ("rixp-" + s->hub + ".svg");
        rixp::detail::write_file_atomically(target, rixp::render_heatmap(spec));
        std::printf("wrote %s\n", target.string().c_str());
      }
    } else if (*geocode) {
      rixp::GeocodeCache cache(cache_path.empty() ? default_cache_path() : fs::path(cache_path));
      rixp::Geocoder geocoder({endpoint}, rixp::make_http_get(), cache);
      const auto c = geocoder.geocode(query);
      std::printf("%.6f %.6f\n", c.latitude_deg(), c.longitude_deg());
      if (geocoder.network_calls() == 0) std::fprintf(stderr, "(from cache)\n");
    } else if (*validate) {
      const auto set = rixp::load_locations(locations_path);
      const auto reference = rixp::import_matrix(reference_path);
      const auto report = rixp::validate_against_reference(set, reference, tolerance);
      for (const auto& p : report.pairs) {
        std::printf("%s-%s computed %10.2f km  reference %10.2f km  error %6.3f%%  %s\n",
                    p.from.c_str(), p.to.c_str(), p.computed_km, p.reference_km,
                    100.0 * p.relative_error, p.within_tolerance ? "ok" : "OUT OF TOLERANCE");
      }
      std::printf("max relative error %.4f%%, tolerance %.4f%%: %s\n",
                  100.0 * report.max_relative_error, 100.0 * tolerance,
                  report.pass ? "PASS" : "FAIL");
      return report.pass ? 0 : kExitDomain;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }
  return 0;
}
