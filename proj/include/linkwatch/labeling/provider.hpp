#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "linkwatch/core/fixtures.hpp"
#include "linkwatch/core/time.hpp"

namespace linkwatch::labeling {

// URL-level providers see the expanded URL; domain-level providers
// (SURBL-style) see its registrable domain.
enum class ProviderLevel { kUrl, kDomain };

struct ProviderResult {
  bool hit = false;
  std::optional<std::string> category;
};

// Uniform blacklist interface. Implementations must be safe to call
// concurrently.
class BlacklistProvider {
 public:
  virtual ~BlacklistProvider() = default;

  virtual const std::string& id() const = 0;
  virtual ProviderLevel level() const = 0;
  // Requests per second; 0 means unlimited.
  virtual double rate_limit() const { return 0.0; }
  virtual std::chrono::milliseconds timeout() const {
    return std::chrono::milliseconds(5000);
  }
  // May throw; the caller turns failures into non-hits.
  virtual ProviderResult check(std::string_view query) const = 0;
};

// Deny-list replay backed by a blacklist_<id>.txt fixture. Lookup is exact
// on the lowercased query; listed domains also match their subdomains.
class FixtureBlacklist final : public BlacklistProvider {
 public:
  FixtureBlacklist(std::string id, ProviderLevel level,
                   const std::vector<BlacklistEntry>& entries);

  const std::string& id() const override { return id_; }
  ProviderLevel level() const override { return level_; }
  ProviderResult check(std::string_view query) const override;

 private:
  std::string id_;
  ProviderLevel level_;
  std::map<std::string, std::optional<std::string>, std::less<>> entries_;
};

// Serializes access per provider: at most `max_in_flight` concurrent checks
// and at least 1/rate_limit seconds between check starts.
class ProviderGate {
 public:
  explicit ProviderGate(const BlacklistProvider& provider,
                        std::ptrdiff_t max_in_flight = 4);

  ProviderResult check(std::string_view query);
  const BlacklistProvider& provider() const { return provider_; }

 private:
  const BlacklistProvider& provider_;
  std::counting_semaphore<64> in_flight_;
  std::mutex pacing_mutex_;
  std::chrono::steady_clock::time_point next_start_{};
};

using ProviderList = std::vector<std::shared_ptr<const BlacklistProvider>>;

// Providers named in `domain_level_ids` are domain-level, the rest URL-level.
ProviderList providers_from_fixtures(
    const FixtureSet& fixtures,
    const std::set<std::string>& domain_level_ids = {"surbl"});

}  // namespace linkwatch::labeling
