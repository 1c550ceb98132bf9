#pragma once

// Place name -> coordinate lookup against an HTTP geocoding service, with
// an on-disk cache.
//
// Request:  GET <base_url>?<param>=<percent-encoded query>
// Response: JSON array of results, each with "lat" and "lon" given as
//           numbers or numeric strings. The first result is used.
//
// The cache is a JSON-lines file, one entry per normalized query, rewritten
// atomically (temp file + rename) on every insert.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>

#include <json.hpp>

#include "rixp/csv.hpp"
#include "rixp/error.hpp"
#include "rixp/geo.hpp"

namespace rixp {

struct GeocoderEndpoint {
  std::string base_url;
  std::string query_param = "q";
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Performs one GET. Throws TransportError when no response was received.
using HttpGet = std::function<HttpResponse(const std::string& url)>;

// Lowercase ASCII, collapse runs of whitespace, trim.
inline std::string normalize_query(std::string_view query) {
  std::string out;
  bool pending_space = false;
  for (char ch : query) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
  }
  return out;
}

inline std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '_' || c == '.' || c == '~') {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

inline std::string geocode_url(const GeocoderEndpoint& endpoint, std::string_view query) {
  const char sep = endpoint.base_url.find('?') == std::string::npos ? '?' : '&';
  return endpoint.base_url + sep + endpoint.query_param + "=" + percent_encode(query);
}

// First result of a geocoder response body.
inline Coordinate parse_geocode_response(std::string_view body) {
  using nlohmann::json;
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw ProtocolError("geocoder response is not a JSON array");
  }
  if (doc.empty()) throw NotFoundError("geocoder returned no results");
  const json& first = doc.front();
  if (!first.is_object()) throw ProtocolError("geocoder result is not an object");
  auto number = [&](const char* key) {
    if (!first.contains(key)) throw ProtocolError(std::string("geocoder result lacks '") + key + "'");
    const json& v = first[key];
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      std::size_t used = 0;
      try {
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
      } catch (const std::exception&) {
      }
    }
    throw ProtocolError(std::string("geocoder field '") + key + "' is not numeric");
  };
  const double lat = number("lat");
  const double lon = number("lon");
  try {
    return Coordinate(lat, lon);
  } catch (const InputDomainError& e) {
    throw ProtocolError(std::string("geocoder returned an invalid coordinate: ") + e.what());
  }
}

struct GeocodeCacheEntry {
  std::string query;  // normalized
  double lat;
  double lon;
  std::string retrieved_at;  // UTC, ISO 8601
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class GeocodeCache {
public:
  explicit GeocodeCache(std::filesystem::path path) : path_(std::move(path)) {
    std::error_code ec;
    if (!std::filesystem::exists(path_, ec)) return;
    std::istringstream in(detail::read_file(path_));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("query") || !j["query"].is_string() ||
          !j.contains("lat") || !j["lat"].is_number() || !j.contains("lon") ||
          !j["lon"].is_number()) {
        throw ParseError("corrupt geocode cache " + path_.string(), line_no, 1);
      }
      GeocodeCacheEntry e{j["query"].get<std::string>(), j["lat"].get<double>(),
                          j["lon"].get<double>(), j.value("retrieved_at", std::string())};
      entries_[e.query] = std::move(e);
    }
  }

  const std::filesystem::path& path() const noexcept { return path_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<GeocodeCacheEntry> find(std::string_view query) const {
    auto it = entries_.find(normalize_query(query));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(GeocodeCacheEntry entry) {
    entry.query = normalize_query(entry.query);
    entries_[entry.query] = std::move(entry);
    flush();
  }

private:
  void flush() const {
    std::string out;
    for (const auto& [_, e] : entries_) {
      nlohmann::ordered_json j;
      j["query"] = e.query;
      j["lat"] = e.lat;
      j["lon"] = e.lon;
      j["retrieved_at"] = e.retrieved_at;
      out += j.dump() + "\n";
    }
    if (path_.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path_.parent_path(), ec);
    }
    detail::write_file_atomically(path_, out);
  }

  std::filesystem::path path_;
  std::map<std::string, GeocodeCacheEntry> entries_;
};

// Timing knobs, injectable so tests need not sleep.
struct GeocoderPacing {
  std::chrono::milliseconds min_interval{1000};
  std::chrono::milliseconds initial_backoff{1000};
  int max_retries = 3;
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
  std::function<std::chrono::steady_clock::time_point()> now = [] {
    return std::chrono::steady_clock::now();
  };
};

// Requests are serialized and spaced at least `min_interval` apart. Failed
// transport attempts are retried with exponential backoff.
class Geocoder {
public:
  Geocoder(GeocoderEndpoint endpoint, HttpGet http, GeocodeCache& cache,
           GeocoderPacing pacing = {})
      : endpoint_(std::move(endpoint)),
        http_(std::move(http)),
        cache_(cache),
        pacing_(std::move(pacing)) {}

  Coordinate geocode(std::string_view query) {
    const std::string key = normalize_query(query);
    if (key.empty()) throw InputDomainError("geocode query is empty");
    std::lock_guard lock(mutex_);
    if (auto hit = cache_.find(key)) return Coordinate(hit->lat, hit->lon);
    if (endpoint_.base_url.empty()) throw TransportError("no geocoder endpoint configured");

    const std::string url = geocode_url(endpoint_, query);
    auto backoff = pacing_.initial_backoff;
    std::string last_error;
    for (int attempt = 0; attempt <= pacing_.max_retries; ++attempt) {
      if (attempt > 0) {
        pacing_.sleep(backoff);
        backoff *= 2;
      }
      std::optional<HttpResponse> response;
      try {
        response = send(url);
      } catch (const TransportError& e) {
        last_error = e.what();
        continue;
      }
      if (response->status >= 500 || response->status == 429) {
        last_error = "HTTP " + std::to_string(response->status);
        continue;
      }
      if (response->status != 200) {
        throw ProtocolError("geocoder answered HTTP " + std::to_string(response->status));
      }
      const Coordinate c = parse_geocode_response(response->body);
      cache_.put({key, c.latitude_deg(), c.longitude_deg(),
                  utc_timestamp(std::chrono::system_clock::now())});
      return c;
    }
    throw TransportError("geocoder unreachable after " + std::to_string(pacing_.max_retries + 1) +
                         " attempts: " + last_error);
  }

  std::size_t network_calls() const noexcept { return network_calls_; }

private:
  HttpResponse send(const std::string& url) {
    if (last_request_) {
      const auto elapsed = pacing_.now() - *last_request_;
      if (elapsed < pacing_.min_interval) {
        pacing_.sleep(std::chrono::duration_cast<std::chrono::milliseconds>(pacing_.min_interval -
                                                                            elapsed));
      }
    }
    last_request_ = pacing_.now();
    ++network_calls_;
    return http_(url);
  }

  GeocoderEndpoint endpoint_;
  HttpGet http_;
  GeocodeCache& cache_;
  GeocoderPacing pacing_;
  std::mutex mutex_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  std::size_t network_calls_ = 0;
};

}  // namespace rixp
