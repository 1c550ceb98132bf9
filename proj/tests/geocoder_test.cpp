#include <atomic>
#include <thread>

#include <gtest/gtest.h>

#include "rixp/geocoder.hpp"
#include "rixp/http_transport.hpp"
#include "rixp/locations.hpp"
#include "test_support.hpp"

using namespace rixp;
using namespace rixp::testing;
using namespace std::chrono_literals;

namespace {

// Records requested sleeps and advances a fake clock instead of sleeping.
struct FakeTime {
  std::chrono::steady_clock::time_point now{};
  std::vector<std::chrono::milliseconds> sleeps;

  GeocoderPacing pacing() {
    GeocoderPacing p;
    p.sleep = [this](std::chrono::milliseconds d) {
      sleeps.push_back(d);
      now += d;
    };
    p.now = [this] { return now; };
    return p;
  }
};

const char* kSaintDenis = R"([{"lat": "-20.8789", "lon": "55.4481", "display_name": "Hotel de Ville"}])";

}  // namespace

TEST(NormalizeQuery, CaseAndWhitespace) {
  EXPECT_EQ(normalize_query("  Saint-Denis,\t  Réunion  CITY hall \n"),
            "saint-denis, réunion city hall");
  EXPECT_EQ(normalize_query("   "), "");
}

TEST(GeocodeUrl, EncodesQuery) {
  EXPECT_EQ(geocode_url({"http://h/search"}, "Port Louis, MU"),
            "http://h/search?q=Port%20Louis%2C%20MU");
  EXPECT_EQ(geocode_url({"http://h/search?format=json", "query"}, "é"),
            "http://h/search?format=json&query=%C3%A9");
}

TEST(ParseResponse, Variants) {
  const auto c = parse_geocode_response(kSaintDenis);
  EXPECT_EQ(c.latitude_deg(), -20.8789);
  EXPECT_EQ(c.longitude_deg(), 55.4481);
  EXPECT_EQ(parse_geocode_response(R"([{"lat": 1.5, "lon": 2}, {"lat": 9, "lon": 9}])"),
            Coordinate(1.5, 2.0));
  EXPECT_THROW(parse_geocode_response("[]"), NotFoundError);
  EXPECT_THROW(parse_geocode_response("{}"), ProtocolError);
  EXPECT_THROW(parse_geocode_response("not json"), ProtocolError);
  EXPECT_THROW(parse_geocode_response(R"([{"lat": "abc", "lon": 1}])"), ProtocolError);
  EXPECT_THROW(parse_geocode_response(R"([{"lat": 1}])"), ProtocolError);
  EXPECT_THROW(parse_geocode_response(R"([{"lat": 95, "lon": 1}])"), ProtocolError);
}

TEST(Geocoder, CachesAndPersists) {
  const auto dir = fresh_temp_dir("geocoder-cache");
  int calls = 0;
  HttpGet http = [&](const std::string&) {
    ++calls;
    return HttpResponse{200, kSaintDenis};
  };
  FakeTime t;
  {
    GeocodeCache cache(dir / "cache.jsonl");
    Geocoder g({"http://stub/search"}, http, cache, t.pacing());
    const auto a = g.geocode("Saint-Denis, Réunion city hall");
    const auto b = g.geocode("  saint-denis,   RÉUNION city hall");  // É is not ASCII-folded
    const auto c = g.geocode("saint-denis, réunion city hall");
    EXPECT_EQ(a, c);
    EXPECT_EQ(a, b);
    EXPECT_EQ(calls, 2);
  }
  GeocodeCache reloaded(dir / "cache.jsonl");
  EXPECT_EQ(reloaded.size(), 2u);
  Geocoder g({"http://stub/search"}, http, reloaded, t.pacing());
  EXPECT_EQ(g.geocode("SAINT-DENIS, réunion CITY HALL"), Coordinate(-20.8789, 55.4481));
  EXPECT_EQ(g.network_calls(), 0u);
  EXPECT_EQ(calls, 2);
  const auto entry = reloaded.find("saint-denis, réunion city hall");
  ASSERT_TRUE(entry.has_value());
  EXPECT_EQ(entry->retrieved_at.size(), 20u);
  EXPECT_EQ(entry->retrieved_at.back(), 'Z');
}

TEST(Geocoder, CachedQueryNeedsNoEndpoint) {
  const auto dir = fresh_temp_dir("geocoder-noendpoint");
  GeocodeCache cache(dir / "cache.jsonl");
  cache.put({"Victoria", -4.6196, 55.4513, "2026-01-01T00:00:00Z"});
  Geocoder g({""}, [](const std::string&) -> HttpResponse { throw TransportError("offline"); },
             cache);
  EXPECT_EQ(g.geocode("victoria"), Coordinate(-4.6196, 55.4513));
  EXPECT_THROW(g.geocode("elsewhere"), TransportError);
}

TEST(Geocoder, EmptyQuery) {
  const auto dir = fresh_temp_dir("geocoder-empty");
  GeocodeCache cache(dir / "cache.jsonl");
  Geocoder g({"http://stub"}, [](const std::string&) { return HttpResponse{200, "[]"}; }, cache);
  EXPECT_THROW(g.geocode(""), InputDomainError);
  EXPECT_THROW(g.geocode(" \t "), InputDomainError);
  EXPECT_EQ(g.network_calls(), 0u);
}

TEST(Geocoder, RetriesWithExponentialBackoff) {
  const auto dir = fresh_temp_dir("geocoder-retry");
  GeocodeCache cache(dir / "cache.jsonl");
  int calls = 0;
  HttpGet flaky = [&](const std::string&) -> HttpResponse {
    if (++calls < 3) throw TransportError("connection refused");
    return {200, kSaintDenis};
  };
  FakeTime t;
  Geocoder g({"http://stub"}, flaky, cache, t.pacing());
  EXPECT_EQ(g.geocode("x"), Coordinate(-20.8789, 55.4481));
  EXPECT_EQ(calls, 3);
  // backoff 1 s, 2 s; the clock advanced by the backoff so no extra pacing
  EXPECT_EQ(t.sleeps, (std::vector<std::chrono::milliseconds>{1000ms, 2000ms}));
}

TEST(Geocoder, GivesUpAfterThreeRetries) {
  const auto dir = fresh_temp_dir("geocoder-giveup");
  GeocodeCache cache(dir / "cache.jsonl");
  int calls = 0;
  HttpGet down = [&](const std::string&) -> HttpResponse {
    ++calls;
    return {503, ""};
  };
  FakeTime t;
  Geocoder g({"http://stub"}, down, cache, t.pacing());
  EXPECT_THROW(g.geocode("x"), TransportError);
  EXPECT_EQ(calls, 4);
  EXPECT_EQ(t.sleeps, (std::vector<std::chrono::milliseconds>{1000ms, 2000ms, 4000ms}));
  EXPECT_EQ(cache.size(), 0u);
}

TEST(Geocoder, ClientErrorsAndEmptyResults) {
  const auto dir = fresh_temp_dir("geocoder-errors");
  GeocodeCache cache(dir / "cache.jsonl");
  FakeTime t;
  Geocoder forbidden({"http://stub"}, [](const std::string&) { return HttpResponse{403, ""}; },
                     cache, t.pacing());
  EXPECT_THROW(forbidden.geocode("x"), ProtocolError);
  Geocoder empty({"http://stub"}, [](const std::string&) { return HttpResponse{200, "[]"}; },
                 cache, t.pacing());
  EXPECT_THROW(empty.geocode("nowhere"), NotFoundError);
  Geocoder garbage({"http://stub"}, [](const std::string&) { return HttpResponse{200, "<html>"}; },
                   cache, t.pacing());
  EXPECT_THROW(garbage.geocode("x"), ProtocolError);
  EXPECT_EQ(cache.size(), 0u);
}

TEST(Geocoder, SpacesRequestsAtLeastOneSecondApart) {
  const auto dir = fresh_temp_dir("geocoder-pace");
  GeocodeCache cache(dir / "cache.jsonl");
  FakeTime t;
  Geocoder g({"http://stub"}, [](const std::string&) { return HttpResponse{200, kSaintDenis}; },
             cache, t.pacing());
  g.geocode("a");
  t.now += 300ms;
  g.geocode("b");
  t.now += 5s;
  g.geocode("c");
  EXPECT_EQ(t.sleeps, (std::vector<std::chrono::milliseconds>{700ms}));
}

TEST(GeocodeCache, CorruptFile) {
  const auto dir = fresh_temp_dir("geocoder-corrupt");
  {
    std::ofstream out(dir / "cache.jsonl");
    out << "{\"query\": \"a\", \"lat\": 1, \"lon\": 2}\nnot json\n";
  }
  EXPECT_THROW(GeocodeCache(dir / "cache.jsonl"), ParseError);
}

// A real HTTP round trip against a local stub endpoint.
class StubEndpoint : public ::testing::Test {
protected:
  void SetUp() override {
    server_.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      last_query_ = req.get_param_value("q");
      if (last_query_ == "nowhere") {
        res.set_content("[]", "application/json");
      } else {
        res.set_content(kSaintDenis, "application/json");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/search"; }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::string last_query_;
};

TEST_F(StubEndpoint, SecondLookupIsServedFromCache) {
  const auto dir = fresh_temp_dir("geocoder-stub");
  FakeTime t;
  GeocodeCache cache(dir / "cache.jsonl");
  Geocoder g({url()}, make_http_get(), cache, t.pacing());
  const auto first = g.geocode("Saint-Denis, Réunion city hall");
  EXPECT_EQ(hits_, 1);
  EXPECT_EQ(last_query_, "Saint-Denis, Réunion city hall");
  const auto second = g.geocode("Saint-Denis, Réunion city hall");
  EXPECT_EQ(hits_, 1);
  EXPECT_EQ(first, second);
  EXPECT_THROW(g.geocode("nowhere"), NotFoundError);
  EXPECT_EQ(hits_, 2);

  // The geocoded city hall reproduces the published RE row.
  auto set = load_locations(data_file("ioa.locations"));
  set[2].coordinate = first;
  const auto m = build_distance_matrix(set);
  for (std::size_t j = 0; j < 5; ++j) {
    if (j != 2) {
      EXPECT_NEAR(m(2, j), kTable1[2][j], 0.02 * kTable1[2][j]);
    }
  }
}

TEST(HttpTransport, UnreachableHostIsTransportError) {
  auto get = make_http_get(std::chrono::seconds(1));
  // Port 9 (discard) on loopback is not expected to be listening.
  EXPECT_THROW(get("http://127.0.0.1:9/search?q=x"), TransportError);
  EXPECT_THROW(get("no-scheme"), TransportError);
}
