#include "linkwatch/labeling/provider.hpp"

#include <algorithm>
#include <thread>

#include "linkwatch/core/error.hpp"

namespace linkwatch::labeling {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

FixtureBlacklist::FixtureBlacklist(std::string id, ProviderLevel level,
                                   const std::vector<BlacklistEntry>& entries)
    : id_(std::move(id)), level_(level) {
  for (const BlacklistEntry& e : entries) entries_[lower(e.value)] = e.category;
}

ProviderResult FixtureBlacklist::check(std::string_view query) const {
  std::string key = lower(query);
  auto it = entries_.find(key);
  if (it == entries_.end() && level_ == ProviderLevel::kDomain) {
    // "a.b.example.com" is covered by a listing of "example.com".
    for (std::size_t dot = key.find('.'); dot != std::string::npos && it == entries_.end();
         dot = key.find('.', dot + 1)) {
      it = entries_.find(std::string_view(key).substr(dot + 1));
    }
  }
  if (it == entries_.end()) return {};
  return {true, it->second};
}

ProviderGate::ProviderGate(const BlacklistProvider& provider,
                           std::ptrdiff_t max_in_flight)
    : provider_(provider),
      in_flight_(std::clamp<std::ptrdiff_t>(max_in_flight, 1, 64)) {}

ProviderResult ProviderGate::check(std::string_view query) {
  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<64>& s;
    ~Release() { s.release(); }
  } release{in_flight_};
  if (double rate = provider_.rate_limit(); rate > 0.0) {
    auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rate));
    std::chrono::steady_clock::time_point start;
    {
      std::lock_guard lock(pacing_mutex_);
      auto now = std::chrono::steady_clock::now();
      start = std::max(now, next_start_);
      next_start_ = start + interval;
    }
    std::this_thread::sleep_until(start);
  }
  return provider_.check(query);
}

ProviderList providers_from_fixtures(const FixtureSet& fixtures,
                                     const std::set<std::string>& domain_level_ids) {
  ProviderList out;
  for (const auto& [id, entries] : fixtures.blacklists) {
    ProviderLevel level = domain_level_ids.count(id) ? ProviderLevel::kDomain
                                                     : ProviderLevel::kUrl;
    out.push_back(std::make_shared<FixtureBlacklist>(id, level, entries));
  }
  return out;
}

}  // namespace linkwatch::labeling
