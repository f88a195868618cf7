#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "linkwatch/core/fixtures.hpp"
#include "linkwatch/core/types.hpp"

namespace linkwatch {

// Knobs for the synthetic corpus. Rates are probabilities in [0, 1];
// fractions marked "exact" are realized as round(fraction * n) items.
struct GeneratorConfig {
  std::int64_t n_benign = 1000;
  std::int64_t n_malicious = 1000;

  double malicious_zero_click_fraction = 0.4616;  // exact
  double benign_zero_click_fraction = 0.40;       // exact
  double dead_domain_fraction = 0.8306;           // exact, malicious domains

  double odd_hour_rate = 0.6;         // malicious links created 00-05 UTC
  double short_lifetime_rate = 0.75;  // malicious domains registered just before use
  double direct_referrer_bias = 0.7;
  double camouflage_rate = 0.10;      // link features drawn from the other class
  double whois_missing_rate = 0.03;
  double warning_page_rate = 0.6;     // malicious links behind a warning page

  std::int64_t links_per_malicious_domain = 6;
  std::int64_t benign_domains = 150;
  std::int64_t bot_encoders = 5;     // Suspicion Factor 1 accounts
  std::int64_t bot_history = 120;
  std::int64_t campaign_accounts = 3;
  std::int64_t background_accounts = 12;

  std::string shortener_host = "bit.ly";

  // Throws Error(kInvalidArgument).
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static GeneratorConfig from_json(const nlohmann::json& j);
};

struct SyntheticCorpus {
  Corpus corpus;
  std::map<std::string, bool> truth;  // short_hash -> malicious
  FixtureSet fixtures;
  std::vector<std::string> bot_accounts;
  std::vector<std::string> campaign_accounts;
};

std::string short_url(std::string_view shortener_host, std::string_view short_hash);

// Pure function of (config, seed).
SyntheticCorpus generate_synthetic(const GeneratorConfig& config,
                                   std::uint64_t seed);

// Corpus (with truth.jsonl sidecar and MANIFEST) into `corpus_dir`,
// fixtures into `fixtures_dir`.
void write_synthetic(const SyntheticCorpus& synthetic,
                     const GeneratorConfig& config, std::uint64_t seed,
                     const std::filesystem::path& corpus_dir,
                     const std::filesystem::path& fixtures_dir);

}  // namespace linkwatch
