#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace linkwatch {

struct BlacklistEntry {
  std::string value;  // URL or domain
  std::optional<std::string> category;

  bool operator==(const BlacklistEntry&) const = default;
};

// What fetching a URL produced. `status` is the first-hop status code;
// `chain` lists every URL visited, starting with the requested one.
struct ProbeResponse {
  int status = 0;
  std::string final_url;
  std::vector<std::string> chain;
  std::optional<std::string> transport_error;

  bool operator==(const ProbeResponse&) const = default;
};

nlohmann::ordered_json to_json(const ProbeResponse& response);
ProbeResponse probe_response_from_json(const nlohmann::json& j);

// Offline stand-ins for the live services:
//   blacklist_<provider>.txt  one URL or domain per line, optional category
//                             after whitespace, '#' comments
//   probes.jsonl              {"url", "status", "final_url", "chain"} or
//                             {"url", "error"}
//   whitelist.txt             one legitimate domain per line
struct FixtureSet {
  std::map<std::string, std::vector<BlacklistEntry>> blacklists;
  std::map<std::string, ProbeResponse> probes;
  std::set<std::string> whitelist;

  bool operator==(const FixtureSet&) const = default;
};

std::vector<BlacklistEntry> parse_blacklist(const std::string& text);
std::set<std::string> parse_domain_list(const std::string& text);

FixtureSet load_fixtures(const std::filesystem::path& dir);
void save_fixtures(const FixtureSet& fixtures, const std::filesystem::path& dir);

}  // namespace linkwatch
