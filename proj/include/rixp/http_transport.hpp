#pragma once

// cpp-httplib backed HttpGet. https:// URLs need CPPHTTPLIB_OPENSSL_SUPPORT.

#include <string>

#include <httplib.h>

#include "rixp/error.hpp"
#include "rixp/geocoder.hpp"

namespace rixp {

inline HttpGet make_http_get(std::chrono::seconds timeout = std::chrono::seconds(10)) {
  return [timeout](const std::string& url) -> HttpResponse {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("not an absolute URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string target = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    if (!client.is_valid()) throw TransportError("unsupported geocoder URL: " + url);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_follow_location(true);
    auto res = client.Get(target, {{"User-Agent", "rixp-geocoder/1.0"}});
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  };
}

}  // namespace rixp
