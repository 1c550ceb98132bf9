#include <sys/wait.h>

#include <atomic>
#include <cstdio>
#include <regex>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "test_support.hpp"

using namespace rixp::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string output;  // stdout and stderr
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RIXP_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string ioa() { return data_file("ioa.locations").string(); }

std::string last_line(const std::string& text) {
  auto end = text.find_last_not_of('\n');
  auto start = text.rfind('\n', end);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - start);
}

}  // namespace

TEST(CliUsage, ExitTwoOnUsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("distances").status, 2);
  EXPECT_EQ(run("distances --locations " + ioa() + " --bogus").status, 2);
  EXPECT_EQ(run("evaluate --locations " + ioa()).status, 2);
  EXPECT_EQ(run("heatmap --locations " + ioa() + " --hub all").status, 2);
  EXPECT_EQ(run("validate --locations " + ioa() + " --reference x.csv --tolerance -1").status, 2);
  EXPECT_EQ(run("validate --locations " + ioa() + " --reference x.csv --tolerance abc").status, 2);
  EXPECT_EQ(run("rank --locations " + ioa() + " --threshold lots").status, 2);
  EXPECT_EQ(run("geocode").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(CliDistances, PrintsCsv) {
  const auto r = run("distances --locations " + ioa());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("iso,MG,MU,RE,SC,YT"), std::string::npos);
}

TEST(CliDistances, WritesFileAndExtremes) {
  const auto dir = fresh_temp_dir("cli-distances");
  const auto r = run("distances --locations " + ioa() + " --out " + (dir / "d.csv").string());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("closest:  MU-RE"), std::string::npos);
  EXPECT_NE(r.output.find("farthest: RE-SC"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "d.csv"));
}

TEST(CliDistances, DomainFailuresExitOne) {
  const auto dir = fresh_temp_dir("cli-one");
  {
    std::ofstream out(dir / "one.locations");
    out << R"({"version": 1, "locations": [{"iso": "RE", "name": "x", "lat": 0, "lon": 0}]})";
  }
  const auto r = run("distances --locations " + (dir / "one.locations").string());
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("at least 2"), std::string::npos);
  EXPECT_EQ(run("distances --locations /nonexistent.locations").status, 1);
  EXPECT_EQ(run("distances --locations " + ioa() + " --out /nonexistent-dir/x.csv").status, 1);
}

TEST(CliEvaluate, DelayMatrices) {
  auto r = run("evaluate --locations " + ioa() + " --hub RE");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("# hub: RE, model: krajsa"), std::string::npos);
  EXPECT_NE(r.output.find("# hub: RE, model: ioa-regression"), std::string::npos);
  EXPECT_NE(r.output.find("# unit: ms"), std::string::npos);

  const auto dir = fresh_temp_dir("cli-evaluate");
  r = run("evaluate --locations " + ioa() + " --hub RE --models krajsa,speed-of-light --out " +
          (dir / "re.csv").string());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "re-krajsa.csv"));
  EXPECT_TRUE(fs::exists(dir / "re-speed-of-light.csv"));

  r = run("evaluate --locations " + ioa() + " --hub RE --models krajsa --out " +
          (dir / "single.csv").string());
  EXPECT_TRUE(fs::exists(dir / "single.csv"));

  EXPECT_EQ(run("evaluate --locations " + ioa() + " --hub ZZ").status, 1);
  EXPECT_EQ(run("evaluate --locations " + ioa() + " --hub RE --models nope").status, 1);
}

TEST(CliRank, WinnerPrintedLast) {
  for (const std::string extra : {"", " --objective cellwise", " --objective bright-cells",
                                  " --model ioa-regression", " --threshold 2.5"}) {
    const auto r = run("rank --locations " + ioa() + extra);
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(last_line(r.output), "winner: RE") << extra;
  }
  const auto r = run("rank --locations " + ioa());
  EXPECT_LT(r.output.find("eliminated"), r.output.find("winner"));
  EXPECT_EQ(run("rank --locations " + ioa() + " --objective fastest").status, 1);
  EXPECT_EQ(run("rank --locations " + ioa() + " --model nope").status, 1);
}

TEST(CliRank, JsonReport) {
  const auto dir = fresh_temp_dir("cli-rank");
  const auto r = run("rank --locations " + ioa() + " --json " + (dir / "r.json").string());
  ASSERT_EQ(r.status, 0) << r.output;
  const auto json = read_text(dir / "r.json");
  EXPECT_NE(json.find("\"winner\": \"RE\""), std::string::npos);
  EXPECT_NE(json.find("\"objective\": \"total-delay\""), std::string::npos);
}

TEST(CliHeatmap, AllHubsDeterministicWithSharedLegend) {
  const auto a = fresh_temp_dir("cli-heat-a");
  const auto b = fresh_temp_dir("cli-heat-b");
  ASSERT_EQ(run("heatmap --locations " + ioa() + " --hub all --out " + a.string()).status, 0);
  ASSERT_EQ(run("heatmap --locations " + ioa() + " --hub all --out " + b.string()).status, 0);
  const std::regex legend("data-scale-min=\"([^\"]+)\" data-scale-max=\"([^\"]+)\"");
  std::set<std::string> legends;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    const auto name = entry.path().filename();
    const auto text = read_text(entry.path());
    EXPECT_EQ(text, read_text(b / name)) << name;
    std::smatch m;
    ASSERT_TRUE(std::regex_search(text, m, legend));
    legends.insert(m.str(0));
  }
  EXPECT_EQ(files, 5u);
  EXPECT_EQ(legends.size(), 1u);
  for (const char* hub : {"MG", "MU", "RE", "SC", "YT"}) {
    EXPECT_TRUE(fs::exists(a / ("rixp-" + std::string(hub) + ".svg")));
  }
}

TEST(CliHeatmap, SingleHubToFile) {
  const auto dir = fresh_temp_dir("cli-heat-one");
  const auto target = dir / "re.svg";
  ASSERT_EQ(run("heatmap --locations " + ioa() + " --hub RE --no-labels --out " + target.string())
                .status,
            0);
  EXPECT_TRUE(fs::exists(target));
  EXPECT_EQ(run("heatmap --locations " + ioa() + " --hub ZZ --out " + dir.string()).status, 1);
  ASSERT_EQ(run("heatmap --locations " + ioa() + " --hub SC --per-figure-scale --out " +
                dir.string())
                .status,
            0);
  EXPECT_TRUE(fs::exists(dir / "rixp-SC.svg"));
}

TEST(CliValidate, PassAndFail) {
  const std::string ref = data_file("ioa_reference.csv").string();
  auto r = run("validate --locations " + ioa() + " --reference " + ref);
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("PASS"), std::string::npos);
  r = run("validate --locations " + ioa() + " --reference " + ref + " --tolerance 0.0001");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("FAIL"), std::string::npos);
  EXPECT_EQ(run("validate --locations " + ioa() + " --reference /nonexistent.csv").status, 1);
}

TEST(CliGeocode, StubEndpointAndCache) {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Get("/search", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.set_content(R"([{"lat": "-4.6196", "lon": "55.4513"}])", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const auto dir = fresh_temp_dir("cli-geocode");
  const std::string args = "geocode --query 'Victoria city hall' --endpoint http://127.0.0.1:" +
                           std::to_string(port) + "/search --cache " +
                           (dir / "cache.jsonl").string();
  auto r = run(args);
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("-4.619600 55.451300"), std::string::npos);
  r = run(args);
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("(from cache)"), std::string::npos);
  EXPECT_EQ(hits, 1);
  server.stop();
  t.join();

  EXPECT_EQ(run("geocode --query 'somewhere else' --endpoint '' --cache " +
                (dir / "cache.jsonl").string())
                .status,
            1);
}
