#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "eca/error.hpp"
#include "eca/kb.hpp"

namespace eca {

std::string http_get(const std::string& url) {
  // split "scheme://host[:port]" from the path and query
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw KbError("bad url " + url, false);
  const auto path_begin = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_begin);
  const std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

  httplib::Client client(origin);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  client.set_follow_location(true);
  client.set_default_headers({{"User-Agent", "eca-kb-client/1.0"}});

  auto res = client.Get(path);
  if (!res) throw KbError("request to " + origin + " failed: " + httplib::to_string(res.error()), true);
  if (res->status == 429 || res->status >= 500) {
    throw KbError("HTTP " + std::to_string(res->status) + " from " + url, true);
  }
  if (res->status != 200) throw KbError("HTTP " + std::to_string(res->status) + " from " + url, false);
  return res->body;
}

}  // namespace eca
