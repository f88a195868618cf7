#pragma once

#include <map>
#include <regex>
#include <string>
#include <string_view>

#include "linkwatch/core/fixtures.hpp"
#include "linkwatch/core/types.hpp"

namespace linkwatch::labeling {

// Resolves a URL to a response summary. Transport failures are reported in
// ProbeResponse::transport_error, never thrown.
class LinkProbe {
 public:
  virtual ~LinkProbe() = default;
  virtual ProbeResponse fetch(std::string_view url) const = 0;
};

// Replays probes.jsonl. Unknown URLs behave like a connection failure.
class FixtureProbe final : public LinkProbe {
 public:
  explicit FixtureProbe(const std::map<std::string, ProbeResponse>& responses)
      : responses_(responses.begin(), responses.end()) {}

  ProbeResponse fetch(std::string_view url) const override;

 private:
  std::map<std::string, ProbeResponse, std::less<>> responses_;
};

// Live HTTP(S) GET that follows up to `max_redirects` Location headers.
class HttpProbe final : public LinkProbe {
 public:
  explicit HttpProbe(int max_redirects = 10, int timeout_seconds = 10)
      : max_redirects_(max_redirects), timeout_seconds_(timeout_seconds) {}

  ProbeResponse fetch(std::string_view url) const override;

 private:
  int max_redirects_;
  int timeout_seconds_;
};

// Matches the shortener's interstitial warning page.
class WarningPattern {
 public:
  // Default: a /a/warning path on bit.ly or bitly.com.
  WarningPattern();
  explicit WarningPattern(const std::string& regex);

  static WarningPattern for_host(std::string_view shortener_host);

  bool matches(std::string_view url) const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::regex regex_;
};

// DEAD on transport failure or first-hop status >= 400; WARNING when the
// final URL is the warning page; ACTIVE otherwise.
LinkState classify_response(const ProbeResponse& response,
                            const WarningPattern& pattern,
                            Timestamp observed_at);

LinkState probe_link_state(std::string_view short_url, const LinkProbe& probe,
                           const WarningPattern& pattern, Timestamp observed_at);

}  // namespace linkwatch::labeling
