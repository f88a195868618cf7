#include "linkwatch/labeling/probe.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "linkwatch/core/error.hpp"

namespace linkwatch::labeling {

namespace {

std::string escape_regex(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::string_view(".^$|()[]{}*+?\\").find(c) != std::string_view::npos)
      out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Splits "scheme://authority/path?query" into base and path parts.
bool split_url(const std::string& url, std::string& base, std::string& path) {
  std::size_t sep = url.find("://");
  if (sep == std::string::npos) return false;
  std::size_t slash = url.find_first_of("/?#", sep + 3);
  base = url.substr(0, slash);
  path = slash == std::string::npos ? "/" : url.substr(slash);
  if (path.front() != '/') path.insert(path.begin(), '/');
  if (std::size_t hash = path.find('#'); hash != std::string::npos) path.resize(hash);
  return true;
}

std::string resolve_location(const std::string& base, const std::string& location) {
  if (location.find("://") != std::string::npos) return location;
  if (location.starts_with("//")) return base.substr(0, base.find("://") + 1) + location;
  if (location.starts_with("/")) return base + location;
  return base + "/" + location;
}

}  // namespace

ProbeResponse FixtureProbe::fetch(std::string_view url) const {
  auto it = responses_.find(url);
  if (it == responses_.end()) {
    ProbeResponse r;
    r.transport_error = "no_fixture";
    return r;
  }
  return it->second;
}

ProbeResponse HttpProbe::fetch(std::string_view url) const {
  ProbeResponse out;
  std::string current(url);
  out.chain.push_back(current);
  for (int hop = 0; hop <= max_redirects_; ++hop) {
    std::string base, path;
    if (!split_url(current, base, path)) {
      out.transport_error = "bad_url";
      return out;
    }
    httplib::Client client(base);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_follow_location(false);
    auto res = client.Get(path);
    if (!res) {
      if (hop == 0) {
        out.transport_error = httplib::to_string(res.error());
        return out;
      }
      break;  // later-hop failure: keep what we have
    }
    if (hop == 0) out.status = res->status;
    out.final_url = current;
    if (res->status < 300 || res->status >= 400 || !res->has_header("Location")) break;
    current = resolve_location(base, res->get_header_value("Location"));
    out.chain.push_back(current);
    out.final_url = current;
  }
  return out;
}

WarningPattern::WarningPattern()
    : WarningPattern(R"(^https?://(www\.)?(bit\.ly|bitly\.com)/a/warning)") {}

WarningPattern::WarningPattern(const std::string& regex) : source_(regex) {
  try {
    regex_ = std::regex(regex, std::regex::ECMAScript | std::regex::icase);
  } catch (const std::regex_error& e) {
    fail(ErrorKind::kInvalidArgument,
         "invalid warning-page pattern '" + regex + "': " + e.what());
  }
}

WarningPattern WarningPattern::for_host(std::string_view shortener_host) {
  return WarningPattern("^https?://(www\\.)?" + escape_regex(shortener_host) +
                        "/a/warning");
}

bool WarningPattern::matches(std::string_view url) const {
  return std::regex_search(url.begin(), url.end(), regex_);
}

LinkState classify_response(const ProbeResponse& response,
                            const WarningPattern& pattern, Timestamp observed_at) {
  LinkState s{LinkStateKind::kActive, observed_at};
  if (response.transport_error || response.status <= 0 || response.status >= 400) {
    s.state = LinkStateKind::kDead;
  } else if (pattern.matches(response.final_url)) {
    s.state = LinkStateKind::kWarning;
  }
  return s;
}

LinkState probe_link_state(std::string_view short_url, const LinkProbe& probe,
                           const WarningPattern& pattern, Timestamp observed_at) {
  return classify_response(probe.fetch(short_url), pattern, observed_at);
}

}  // namespace linkwatch::labeling
