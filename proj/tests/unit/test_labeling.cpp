#include <cmath>
#include <stdexcept>
#include <thread>

#include "doctest.h"
#include "helpers.hpp"
#include "linkwatch/core/synthetic.hpp"
#include "linkwatch/labeling/labeling.hpp"

using namespace linkwatch;
using namespace linkwatch::labeling;
using linkwatch::testing::make_link;
using linkwatch::testing::ts;

namespace {

class ThrowingProvider final : public BlacklistProvider {
 public:
  const std::string& id() const override { return id_; }
  ProviderLevel level() const override { return ProviderLevel::kUrl; }
  ProviderResult check(std::string_view) const override { throw std::runtime_error("HTTP 503"); }

 private:
  std::string id_ = "flaky";
};

class SlowProvider final : public BlacklistProvider {
 public:
  const std::string& id() const override { return id_; }
  ProviderLevel level() const override { return ProviderLevel::kUrl; }
  std::chrono::milliseconds timeout() const override { return std::chrono::milliseconds(1); }
  ProviderResult check(std::string_view) const override {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    return {true, "malware"};
  }

 private:
  std::string id_ = "slow";
};

FixtureSet small_fixtures() {
  FixtureSet fx;
  fx.blacklists["phishtank"] = {{"http://evil.example.com/login", std::string("phishing")}};
  fx.blacklists["surbl"] = {{"badsite.net", std::nullopt}};
  fx.whitelist = {"google.com"};
  fx.probes["http://bit.ly/warn1"] = {301, "http://bit.ly/a/warning?hash=warn1",
                                      {"http://bit.ly/warn1", "http://bit.ly/a/warning?hash=warn1"},
                                      std::nullopt};
  fx.probes["http://bit.ly/ok1"] = {301, "http://www.google.com/", {}, std::nullopt};
  return fx;
}

}  // namespace

TEST_CASE("URL-level fixture lookups are exact") {
  const ProviderList providers = providers_from_fixtures(small_fixtures());
  const auto v = query_blacklists("http://evil.example.com/login", providers);
  REQUIRE(v.size() == 2);
  CHECK(v[0].provider == "phishtank");
  CHECK(v[0].hit);
  CHECK(v[0].category == std::optional<std::string>("phishing"));
  CHECK_FALSE(v[1].hit);
  CHECK_FALSE(query_blacklists("http://evil.example.com/other", providers)[0].hit);
}

TEST_CASE("domain-level providers see the registrable domain") {
  const ProviderList providers = providers_from_fixtures(small_fixtures());
  const auto v = query_blacklists("http://www.cdn.badsite.net/x?y", providers);
  CHECK(v[1].provider == "surbl");
  CHECK(v[1].level == ProviderLevel::kDomain);
  CHECK(v[1].hit);
}

TEST_CASE("whitelisted domains suppress domain-level lookups") {
  FixtureSet fx = small_fixtures();
  fx.blacklists["surbl"].push_back({"google.com", std::nullopt});
  const ProviderList providers = providers_from_fixtures(fx);
  QueryOptions opt;
  opt.whitelist = &fx.whitelist;
  const auto v = query_blacklists("http://www.google.com/", providers, opt);
  CHECK(v[1].suppressed);
  CHECK_FALSE(v[1].hit);
}

TEST_CASE("a failing provider yields a non-hit with an audit entry") {
  ProviderList providers{std::make_shared<ThrowingProvider>()};
  AuditLog audit;
  QueryOptions opt;
  opt.audit = &audit;
  opt.checked_at = ts("2013-10-20T00:00:00Z");
  const auto v = query_blacklists("http://example.com/", providers, opt);
  REQUIRE(v.size() == 1);
  CHECK_FALSE(v[0].hit);
  CHECK(v[0].failed);
  CHECK(v[0].category == std::optional<std::string>("unknown"));
  CHECK(v[0].checked_at == opt.checked_at);
  REQUIRE(audit.entries().size() == 1);
  CHECK(audit.entries()[0].find("HTTP 503") != std::string::npos);
}

TEST_CASE("a provider exceeding its timeout counts as failed") {
  ProviderList providers{std::make_shared<SlowProvider>()};
  const auto v = query_blacklists("http://example.com/", providers);
  CHECK(v[0].failed);
  CHECK_FALSE(v[0].hit);
}

TEST_CASE("warning page pattern") {
  const WarningPattern p;
  CHECK(p.matches("http://bit.ly/a/warning?hash=abc"));
  CHECK(p.matches("https://bitly.com/a/warning?url=x"));
  CHECK(p.matches("HTTP://WWW.BIT.LY/a/warning"));
  CHECK_FALSE(p.matches("http://example.com/a/warning"));
  CHECK_FALSE(p.matches("http://bit.ly/abc"));
  const WarningPattern custom = WarningPattern::for_host("sho.rt");
  CHECK(custom.matches("http://sho.rt/a/warning?hash=1"));
  CHECK_FALSE(custom.matches("http://bit.ly/a/warning"));
}

TEST_CASE("response classification") {
  const WarningPattern p;
  const Timestamp at = ts("2013-10-20T00:00:00Z");
  CHECK(classify_response({301, "http://bit.ly/a/warning?x", {}, std::nullopt}, p, at).state ==
        LinkStateKind::kWarning);
  CHECK(classify_response({200, "http://ok.example/", {}, std::nullopt}, p, at).state ==
        LinkStateKind::kActive);
  CHECK(classify_response({404, "http://bit.ly/x", {}, std::nullopt}, p, at).state ==
        LinkStateKind::kDead);
  CHECK(classify_response({0, "", {}, std::string("timeout")}, p, at).state == LinkStateKind::kDead);
  CHECK(classify_response({200, "", {}, std::nullopt}, p, at).observed_at == at);
}

TEST_CASE("label sources list every firing check") {
  const ShortLinkRecord link = make_link("warn1", "http://evil.example.com/login");
  std::vector<BlacklistVerdict> verdicts(2);
  verdicts[0].provider = "phishtank";
  verdicts[0].hit = true;
  verdicts[1].provider = "surbl";
  const Label both = label_instance(link, verdicts, LinkState{LinkStateKind::kWarning, {}});
  CHECK(both.malicious());
  CHECK(both.sources == std::vector<std::string>{"phishtank", "warning_page"});

  verdicts[0].hit = false;
  const Label none = label_instance(link, verdicts, LinkState{LinkStateKind::kDead, {}});
  CHECK_FALSE(none.malicious());
  CHECK(none.sources == std::vector<std::string>{"none"});

  const Label page_only = label_instance(link, verdicts, LinkState{LinkStateKind::kWarning, {}});
  CHECK(page_only.malicious());
  CHECK(page_only.sources == std::vector<std::string>{"warning_page"});
}

TEST_CASE("corpus labels match the generator truth; parallel equals serial") {
  GeneratorConfig cfg;
  cfg.n_benign = 150;
  cfg.n_malicious = 150;
  const SyntheticCorpus syn = generate_synthetic(cfg, 21);
  const ProviderList providers = providers_from_fixtures(syn.fixtures);
  const FixtureProbe probe(syn.fixtures.probes);
  LabelingContext ctx;
  ctx.providers = &providers;
  ctx.probe = &probe;
  ctx.query.whitelist = &syn.fixtures.whitelist;
  const auto par = label_corpus(syn.corpus, ctx);
  const auto ser = serial::label_corpus(syn.corpus, ctx);
  REQUIRE(par.size() == syn.corpus.links.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].short_hash == ser[i].short_hash);
    CHECK(par[i].label == ser[i].label);
    CHECK(par[i].verdicts == ser[i].verdicts);
    CHECK(par[i].label.malicious() == syn.truth.at(par[i].short_hash));
  }
}

TEST_CASE("domain liveness reproduces the generator's dead-domain fraction") {
  GeneratorConfig cfg;
  const SyntheticCorpus syn = generate_synthetic(cfg, 8);
  const FixtureProbe probe(syn.fixtures.probes);
  const LivenessReport r = domain_liveness_report(syn.corpus, probe, &syn.fixtures.whitelist);
  REQUIRE_FALSE(r.domains.empty());
  const double n = static_cast<double>(r.domains.size());
  const double expected_dead = std::round(cfg.dead_domain_fraction * n);
  CHECK(r.dead_fraction * n == doctest::Approx(expected_dead));
  CHECK(r.whitelisted_skipped > 0);
  std::int64_t dead_sum = 0;
  for (const DomainLiveness& d : r.domains)
    if (!d.alive) dead_sum += d.total_warning_count;
  CHECK(dead_sum == r.dead_warning_sum);
}
