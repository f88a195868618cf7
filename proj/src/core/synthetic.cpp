#include "linkwatch/core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "linkwatch/core/corpus_io.hpp"
#include "linkwatch/core/domain.hpp"
#include "linkwatch/core/error.hpp"
#include "linkwatch/core/random.hpp"

namespace linkwatch {

namespace {

using std::chrono::days;
using std::chrono::hours;
using std::chrono::seconds;
using std::chrono::sys_days;
using std::chrono::year_month_day;

constexpr std::string_view kBase62 =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr std::string_view kHex = "0123456789abcdef";

const std::vector<std::string> kSyllables = {
    "ka", "lo", "mi", "ne", "ru", "ta", "so", "vi", "da", "fe", "go", "hu",
    "ja", "be", "co", "pi", "ze", "wa", "xo", "yu", "tri", "mon", "star",
    "net", "fan", "cy", "time", "deal", "shop", "web", "top", "max"};
const std::vector<std::string> kBenignTlds = {"com", "org", "net", "co.uk",
                                              "de", "com.au", "io", "fr"};
const std::vector<std::string> kMaliciousTlds = {"in", "ru", "info", "biz",
                                                 "net", "com", "tk", "co.in"};
const std::vector<std::string> kReferrers = {
    "twitter.com", "facebook.com", "hkgolden.com", "poringa.net",
    "google.com",  "reddit.com",   "t.co",         "plus.url.google.com"};
const std::vector<std::string> kApplications = {"twitterfeed",
                                                "tweetdeckapi", "tweetbot"};
const std::vector<std::string> kAnonymous = {"someone", "anonymous"};
const std::vector<std::string> kUrlProviders = {"safebrowsing", "phishtank",
                                                "virustotal"};
const std::vector<std::string> kCampaignTokens = {
    "win", "free", "iphone", "click", "now", "limited", "offer", "claim"};
const std::vector<std::string> kCampaignExtras = {"today", "deal", "hot", "new"};

std::string base62(std::uint64_t v) {
  std::string out;
  do {
    out.push_back(kBase62[v % 62]);
    v /= 62;
  } while (v);
  return out;
}

std::string random_string(Rng& rng, std::size_t len, std::string_view alphabet) {
  std::string out;
  for (std::size_t i = 0; i < len; ++i)
    out.push_back(alphabet[rng.below(alphabet.size())]);
  return out;
}

std::string random_word(Rng& rng, int min_syl, int max_syl) {
  std::string w;
  auto n = rng.range(min_syl, max_syl);
  for (std::int64_t i = 0; i < n; ++i) w += rng.pick(kSyllables);
  return w;
}

Date ymd(int y, unsigned m, unsigned d) {
  return sys_days{year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                 std::chrono::day{d}}};
}

const Date kWindowStart = ymd(2013, 9, 1);
const Date kWindowEnd = ymd(2013, 10, 31);
const Timestamp kObservedAt = Timestamp{ymd(2014, 3, 1)};

void check_rate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    fail(ErrorKind::kInvalidArgument,
         std::string("generator config: ") + name + " must lie in [0, 1]");
}

void check_count(std::int64_t v, const char* name, std::int64_t min = 0) {
  if (v < min)
    fail(ErrorKind::kInvalidArgument, std::string("generator config: ") + name +
                                          " must be >= " + std::to_string(min));
}

struct DomainInfo {
  std::string name;
  bool malicious = false;
  bool dead = false;
  std::optional<WhoisRecord> whois;
  Date campaign_start;
};

struct Pools {
  std::vector<DomainInfo> benign_domains;
  std::vector<DomainInfo> malicious_domains;
  std::vector<std::string> benign_accounts;
  std::vector<std::string> malicious_accounts;
  std::vector<std::string> bot_accounts;
  std::vector<std::string> campaign_accounts;
  std::vector<std::string> background_accounts;
};

struct LinkDraft {
  ShortLinkRecord link;
  bool malicious = false;
  bool warning = false;
  bool surbl_listed = false;
  std::optional<std::pair<std::string, std::string>> url_listing;  // provider, category
  std::optional<std::pair<std::string, std::string>> extra_listing;
};

std::optional<WhoisRecord> draw_whois(Rng& rng, bool short_lived,
                                      Date first_use, double missing_rate) {
  WhoisRecord w;
  if (short_lived) {
    Date created = first_use - days{rng.range(0, 20)};
    w.created_on = created;
    w.updated_on = created;
    w.expires_on = created + days{365 * rng.range(1, 2)};
  } else {
    Date created = ymd(1995, 1, 1) + days{rng.range(0, 15 * 365)};
    w.created_on = created;
    auto span = (ymd(2013, 8, 1) - created).count();
    w.updated_on = created + days{rng.range(0, std::max<std::int64_t>(span, 0))};
    w.expires_on = ymd(2014, 1, 1) + days{rng.range(30, 3650)};
  }
  if (rng.bernoulli(missing_rate)) {
    if (rng.bernoulli(0.5)) return std::nullopt;
    w.created_on.reset();
  }
  return w;
}

std::string unique_domain(Rng& rng, const std::vector<std::string>& tlds,
                          std::set<std::string>& taken) {
  for (;;) {
    std::string name = random_word(rng, 2, 4) + "." + rng.pick(tlds);
    if (taken.insert(name).second) return name;
  }
}

Pools build_pools(const GeneratorConfig& cfg, const Rng& root) {
  Pools pools;
  std::set<std::string> taken;
  Rng rng = root.child("domains");
  if (cfg.n_benign > 0) {
    for (std::int64_t i = 0; i < cfg.benign_domains; ++i) {
      DomainInfo d;
      d.name = unique_domain(rng, kBenignTlds, taken);
      d.whois = draw_whois(rng, false, kWindowStart, cfg.whois_missing_rate);
      pools.benign_domains.push_back(std::move(d));
    }
  }
  const std::int64_t n_md =
      cfg.n_malicious == 0
          ? 0
          : (cfg.n_malicious + cfg.links_per_malicious_domain - 1) /
                cfg.links_per_malicious_domain;
  for (std::int64_t i = 0; i < n_md; ++i) {
    DomainInfo d;
    d.name = unique_domain(rng, kMaliciousTlds, taken);
    d.malicious = true;
    d.campaign_start = kWindowStart + days{rng.range(0, 50)};
    bool short_lived = rng.bernoulli(cfg.short_lifetime_rate);
    d.whois = draw_whois(rng, short_lived, d.campaign_start,
                         cfg.whois_missing_rate);
    pools.malicious_domains.push_back(std::move(d));
  }
  // Exactly round(fraction * n) dead malicious domains.
  std::vector<std::size_t> order(pools.malicious_domains.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng dead_rng = root.child("dead_domains");
  dead_rng.shuffle(order);
  auto n_dead = static_cast<std::size_t>(
      std::llround(cfg.dead_domain_fraction * static_cast<double>(order.size())));
  for (std::size_t k = 0; k < n_dead; ++k)
    pools.malicious_domains[order[k]].dead = true;

  Rng acc = root.child("accounts");
  std::set<std::string> ids;
  auto fresh = [&](const std::string& prefix, std::size_t len,
                   std::string_view alphabet) {
    for (;;) {
      std::string id = prefix + random_string(acc, len, alphabet);
      if (ids.insert(id).second) return id;
    }
  };
  for (std::int64_t i = 0; i < std::max<std::int64_t>(1, cfg.n_benign / 4); ++i)
    pools.benign_accounts.push_back(fresh("user_", 8, kBase62.substr(0, 36)));
  for (std::int64_t i = 0; i < std::max<std::int64_t>(1, cfg.n_malicious / 8); ++i)
    pools.malicious_accounts.push_back(fresh("o_", 10, kHex));
  for (std::int64_t i = 0; i < cfg.bot_encoders; ++i)
    pools.bot_accounts.push_back(fresh("o_", 10, kHex));
  for (std::int64_t i = 0; i < cfg.campaign_accounts; ++i)
    pools.campaign_accounts.push_back(fresh("o_", 10, kHex));
  for (std::int64_t i = 0; i < cfg.background_accounts; ++i)
    pools.background_accounts.push_back(fresh("user_bg", 6, kBase62.substr(0, 36)));
  return pools;
}

std::vector<EncoderRef> draw_encoders(Rng& rng, bool malicious_like,
                                      const std::vector<std::string>& regulars,
                                      const std::vector<std::string>& bots,
                                      bool allow_bots) {
  std::vector<EncoderRef> out;
  std::int64_t n = malicious_like
                       ? (rng.bernoulli(0.25) ? 1 : rng.range(2, 8))
                       : (rng.bernoulli(0.6) ? 1 : rng.range(2, 4));
  const double anon_cut = malicious_like ? 0.30 : 0.05;
  const double app_cut = malicious_like ? 0.55 : 0.15;
  for (std::int64_t i = 0; i < n; ++i) {
    double r = rng.uniform();
    EncoderRef e;
    if (r < anon_cut) {
      e.account_id = rng.pick(kAnonymous);
      e.kind = EncoderKind::kAnonymous;
    } else if (r < app_cut) {
      e.account_id = rng.pick(kApplications);
      e.kind = EncoderKind::kApplication;
      e.application_name = e.account_id;
    } else {
      bool bot = allow_bots && !bots.empty() && rng.bernoulli(0.3);
      e.account_id = bot ? rng.pick(bots) : rng.pick(regulars);
    }
    out.push_back(std::move(e));
  }
  return out;
}

LinkDraft draw_link(const GeneratorConfig& cfg, const Pools& pools,
                    const Rng& root, std::int64_t index, bool malicious,
                    std::size_t class_rank, bool zero_click) {
  Rng rng = root.child("link", static_cast<std::uint64_t>(index));
  LinkDraft draft;
  draft.malicious = malicious;
  ShortLinkRecord& link = draft.link;
  const bool camouflaged = rng.bernoulli(cfg.camouflage_rate);
  const bool malicious_like = malicious != camouflaged;

  const DomainInfo& dom =
      malicious ? pools.malicious_domains[class_rank %
                                          pools.malicious_domains.size()]
                : pools.benign_domains[rng.below(pools.benign_domains.size())];
  link.domain = dom.name;
  link.whois = dom.whois;
  std::string host = dom.name;
  double sub = rng.uniform();
  if (sub < 0.4) host = "www." + host;
  else if (sub < 0.6) host = random_word(rng, 1, 2) + "." + host;
  link.long_url = "http://" + host + "/" + random_string(rng, 8, kBase62);
  if (rng.bernoulli(0.3)) link.long_url += "?id=" + std::to_string(rng.range(1, 99999));

  link.short_hash = random_string(rng, 5, kBase62) + base62(static_cast<std::uint64_t>(index));
  link.global_hash = random_string(rng, 6, kBase62) + base62(static_cast<std::uint64_t>(index));

  Date day = malicious ? dom.campaign_start + days{rng.range(0, 10)}
                       : kWindowStart + days{rng.range(0, (kWindowEnd - kWindowStart).count())};
  std::int64_t hour;
  if (malicious_like) {
    hour = rng.bernoulli(cfg.odd_hour_rate) ? rng.range(0, 5) : rng.range(0, 23);
  } else {
    hour = rng.bernoulli(0.85) ? rng.range(8, 23) : rng.range(0, 23);
  }
  link.created_at = Timestamp{day} + hours{hour} + seconds{rng.range(0, 3599)};

  draft.warning = malicious && rng.bernoulli(cfg.warning_page_rate);
  const auto& regulars = malicious ? pools.malicious_accounts : pools.benign_accounts;
  link.encoders = draw_encoders(rng, malicious_like, regulars, pools.bot_accounts,
                                draft.warning);
  link.warning_count = draft.warning ? rng.range(1, 500) : 0;

  if (!zero_click) {
    std::int64_t lag = malicious_like ? (rng.bernoulli(0.15) ? 0 : rng.range(1, 45))
                                      : (rng.bernoulli(0.8) ? 0 : rng.range(1, 3));
    Timestamp first = link.created_at + days{lag} + seconds{rng.range(0, 86399)};
    std::int64_t n_events = rng.range(1, 5);
    link.clicks.push_back({first, rng.range(1, 50)});
    for (std::int64_t k = 1; k < n_events; ++k) {
      link.clicks.push_back({first + seconds{rng.range(0, 30 * 86400)}, rng.range(1, 50)});
    }
    std::sort(link.clicks.begin(), link.clicks.end(),
              [](const ClickEvent& a, const ClickEvent& b) { return a.at < b.at; });

    bool direct = rng.bernoulli(malicious_like ? cfg.direct_referrer_bias : 0.25);
    std::int64_t others = malicious_like ? rng.range(0, 2) : rng.range(1, 4);
    if (!direct && others == 0) others = 1;
    std::vector<std::string> names = kReferrers;
    rng.shuffle(names);
    std::vector<std::string> refs;
    if (direct) refs.emplace_back(kDirectReferrer);
    for (std::int64_t k = 0; k < others; ++k) refs.push_back(names[static_cast<std::size_t>(k)]);
    std::int64_t remaining = link.total_clicks();
    for (std::size_t k = 0; k < refs.size(); ++k) {
      std::int64_t share = k + 1 == refs.size() ? remaining : rng.range(0, remaining);
      remaining -= share;
      link.referrers.push_back({refs[k], share});
    }
  }

  if (malicious) {
    auto url_listing = [&]() {
      std::string provider = rng.pick(kUrlProviders);
      std::string category = provider == "phishtank" ? "phishing"
                             : provider == "virustotal"
                                 ? "malware"
                                 : (rng.bernoulli(0.5) ? "malware" : "phishing");
      return std::make_pair(provider, category);
    };
    if (!draft.warning) {
      if (rng.bernoulli(0.4)) draft.surbl_listed = true;
      else draft.url_listing = url_listing();
    } else if (rng.bernoulli(0.3)) {
      draft.extra_listing = url_listing();
    }
  }
  return draft;
}

}  // namespace

std::string short_url(std::string_view shortener_host, std::string_view short_hash) {
  return "http://" + std::string(shortener_host) + "/" + std::string(short_hash);
}

void GeneratorConfig::validate() const {
  check_count(n_benign, "n_benign");
  check_count(n_malicious, "n_malicious");
  check_rate(malicious_zero_click_fraction, "malicious_zero_click_fraction");
  check_rate(benign_zero_click_fraction, "benign_zero_click_fraction");
  check_rate(dead_domain_fraction, "dead_domain_fraction");
  check_rate(odd_hour_rate, "odd_hour_rate");
  check_rate(short_lifetime_rate, "short_lifetime_rate");
  check_rate(direct_referrer_bias, "direct_referrer_bias");
  check_rate(camouflage_rate, "camouflage_rate");
  check_rate(whois_missing_rate, "whois_missing_rate");
  check_rate(warning_page_rate, "warning_page_rate");
  check_count(links_per_malicious_domain, "links_per_malicious_domain", 1);
  check_count(benign_domains, "benign_domains", 1);
  check_count(bot_encoders, "bot_encoders");
  check_count(bot_history, "bot_history");
  check_count(campaign_accounts, "campaign_accounts");
  check_count(background_accounts, "background_accounts");
  if (shortener_host.empty())
    fail(ErrorKind::kInvalidArgument, "generator config: empty shortener_host");
}

nlohmann::ordered_json GeneratorConfig::to_json() const {
  nlohmann::ordered_json j;
  j["n_benign"] = n_benign;
  j["n_malicious"] = n_malicious;
  j["malicious_zero_click_fraction"] = malicious_zero_click_fraction;
  j["benign_zero_click_fraction"] = benign_zero_click_fraction;
  j["dead_domain_fraction"] = dead_domain_fraction;
  j["odd_hour_rate"] = odd_hour_rate;
  j["short_lifetime_rate"] = short_lifetime_rate;
  j["direct_referrer_bias"] = direct_referrer_bias;
  j["camouflage_rate"] = camouflage_rate;
  j["whois_missing_rate"] = whois_missing_rate;
  j["warning_page_rate"] = warning_page_rate;
  j["links_per_malicious_domain"] = links_per_malicious_domain;
  j["benign_domains"] = benign_domains;
  j["bot_encoders"] = bot_encoders;
  j["bot_history"] = bot_history;
  j["campaign_accounts"] = campaign_accounts;
  j["background_accounts"] = background_accounts;
  j["shortener_host"] = shortener_host;
  return j;
}

GeneratorConfig GeneratorConfig::from_json(const nlohmann::json& j) {
  GeneratorConfig c;
  try {
#define LW_READ(field) c.field = j.value(#field, c.field)
    LW_READ(n_benign);
    LW_READ(n_malicious);
    LW_READ(malicious_zero_click_fraction);
    LW_READ(benign_zero_click_fraction);
    LW_READ(dead_domain_fraction);
    LW_READ(odd_hour_rate);
    LW_READ(short_lifetime_rate);
    LW_READ(direct_referrer_bias);
    LW_READ(camouflage_rate);
    LW_READ(whois_missing_rate);
    LW_READ(warning_page_rate);
    LW_READ(links_per_malicious_domain);
    LW_READ(benign_domains);
    LW_READ(bot_encoders);
    LW_READ(bot_history);
    LW_READ(campaign_accounts);
    LW_READ(background_accounts);
    LW_READ(shortener_host);
#undef LW_READ
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInvalidArgument, std::string("generator config: ") + e.what());
  }
  return c;
}

SyntheticCorpus generate_synthetic(const GeneratorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Rng root(seed);
  const Pools pools = build_pools(cfg, root);
  SyntheticCorpus out;
  out.bot_accounts = pools.bot_accounts;
  out.campaign_accounts = pools.campaign_accounts;

  const std::int64_t n = cfg.n_benign + cfg.n_malicious;
  std::vector<char> is_malicious(static_cast<std::size_t>(n), 0);
  std::fill(is_malicious.begin(), is_malicious.begin() + cfg.n_malicious, 1);
  Rng class_rng = root.child("classes");
  class_rng.shuffle(is_malicious);

  // Rank of each link within its class, and the exact zero-click subsets.
  std::vector<std::size_t> rank(static_cast<std::size_t>(n));
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < rank.size(); ++i) {
    auto& bucket = by_class[is_malicious[i] ? 1 : 0];
    rank[i] = bucket.size();
    bucket.push_back(i);
  }
  std::vector<char> zero_click(static_cast<std::size_t>(n), 0);
  const double zero_fraction[2] = {cfg.benign_zero_click_fraction,
                                   cfg.malicious_zero_click_fraction};
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> idx = by_class[c];
    Rng zr = root.child("zero_click", static_cast<std::uint64_t>(c));
    zr.shuffle(idx);
    auto k = static_cast<std::size_t>(
        std::llround(zero_fraction[c] * static_cast<double>(idx.size())));
    for (std::size_t j = 0; j < k; ++j) zero_click[idx[j]] = 1;
  }

  std::vector<LinkDraft> drafts(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    auto u = static_cast<std::size_t>(i);
    drafts[u] = draw_link(cfg, pools, root, i, is_malicious[u] != 0, rank[u],
                          zero_click[u] != 0);
  }

  // Serial merge in index order.
  FixtureSet& fx = out.fixtures;
  std::set<std::string> surbl;
  std::map<std::string, std::vector<HistoryEntry>> history;
  for (LinkDraft& d : drafts) {
    const ShortLinkRecord& link = d.link;
    out.truth[link.short_hash] = d.malicious;
    const std::string surl = short_url(cfg.shortener_host, link.short_hash);
    ProbeResponse resp;
    resp.status = 301;
    if (d.warning) {
      resp.final_url = "http://" + cfg.shortener_host + "/a/warning?hash=" + link.short_hash;
    } else {
      resp.final_url = link.long_url;
    }
    resp.chain = {surl, resp.final_url};
    fx.probes[surl] = resp;
    if (d.surbl_listed) surbl.insert(link.domain);
    for (const auto* listing : {&d.url_listing, &d.extra_listing}) {
      if (*listing)
        fx.blacklists[(*listing)->first].push_back({link.long_url, (*listing)->second});
    }
    std::set<std::string> seen;
    for (const EncoderRef& e : link.encoders) {
      if (e.kind != EncoderKind::kRegular || !seen.insert(e.account_id).second) continue;
      HistoryEntry h;
      h.short_hash = link.short_hash;
      h.created_at = link.created_at;
      h.click_count = link.total_clicks();
      h.state = {d.warning ? LinkStateKind::kWarning : LinkStateKind::kActive, kObservedAt};
      history[e.account_id].push_back(std::move(h));
    }
    out.corpus.links.push_back(std::move(d.link));
  }
  for (const std::string& domain : surbl) fx.blacklists["surbl"].push_back({domain, "spam"});
  for (const std::string& p : kUrlProviders) fx.blacklists.try_emplace(p);
  fx.blacklists.try_emplace("surbl");

  std::set<std::string> used_domains;
  for (const ShortLinkRecord& link : out.corpus.links) used_domains.insert(link.domain);
  for (const auto* pool : {&pools.benign_domains, &pools.malicious_domains}) {
    for (const DomainInfo& dom : *pool) {
      if (!dom.malicious) fx.whitelist.insert(dom.name);
      if (!used_domains.count(dom.name)) continue;
      const std::string url = "http://" + dom.name + "/";
      ProbeResponse resp;
      if (dom.dead) {
        resp.transport_error = "name_not_resolved";
      } else {
        resp.status = 200;
        resp.final_url = url;
        resp.chain = {url};
      }
      fx.probes[url] = resp;
    }
  }

  // Bots and campaign accounts: long all-warning histories spanning two years.
  Rng filler = root.child("filler");
  auto add_filler = [&](const std::string& account, std::int64_t target) {
    auto& h = history[account];
    std::int64_t need = target - static_cast<std::int64_t>(h.size());
    for (std::int64_t k = 0; k < need; ++k) {
      HistoryEntry e;
      e.short_hash = "f" + random_string(filler, 8, kBase62);
      e.created_at = Timestamp{ymd(2011, 10, 1)} +
                     seconds{filler.range(0, (ymd(2013, 10, 31) - ymd(2011, 10, 1)).count() * 86400)};
      e.click_count = filler.range(0, 100);
      e.state = {LinkStateKind::kWarning, kObservedAt};
      h.push_back(std::move(e));
    }
  };
  for (const std::string& bot : pools.bot_accounts) add_filler(bot, cfg.bot_history);
  for (const std::string& acc : pools.campaign_accounts) add_filler(acc, 100);

  auto& profiles = out.corpus.encoders;
  Rng prng = root.child("profiles");
  for (auto& [account, entries] : history) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const HistoryEntry& a, const HistoryEntry& b) {
                       return a.created_at < b.created_at;
                     });
    EncoderProfile p;
    p.account_id = account;
    p.profile_created_at = entries.front().created_at - days{prng.range(1, 400)};
    if (prng.bernoulli(0.5)) p.connected_accounts.push_back({"twitter", "@" + account});
    p.history = std::move(entries);
    profiles[account] = std::move(p);
  }

  // Planted campaign: shared URL set on one domain, near-identical text,
  // posts on the hour.
  if (!pools.campaign_accounts.empty() && !pools.malicious_domains.empty()) {
    Rng crng = root.child("campaign");
    const std::string& domain = pools.malicious_domains.front().name;
    std::vector<std::string> urls;
    for (int k = 0; k < 5; ++k)
      urls.push_back("http://" + domain + "/promo/" + random_string(crng, 6, kBase62));
    for (std::size_t a = 0; a < pools.campaign_accounts.size(); ++a) {
      EncoderProfile& p = profiles[pools.campaign_accounts[a]];
      p.account_id = pools.campaign_accounts[a];
      p.connected_accounts.push_back({"twitter", "@promo_" + std::to_string(a)});
      std::vector<Post> posts;
      for (int k = 0; k < 12; ++k) {
        std::vector<std::string> tokens = kCampaignTokens;
        if (crng.bernoulli(0.3)) tokens.push_back(crng.pick(kCampaignExtras));
        Post post;
        post.text_tokens = make_token_set(std::move(tokens));
        post.urls = {urls[static_cast<std::size_t>(k) % urls.size()]};
        post.at = Timestamp{ymd(2013, 10, 1)} + hours{k * 2 + static_cast<int>(a)};
        posts.push_back(std::move(post));
      }
      p.posts = std::move(posts);
    }
  }
  if (!pools.background_accounts.empty()) {
    Rng brng = root.child("background");
    std::vector<std::string> vocab;
    for (int k = 0; k < 300; ++k) vocab.push_back(random_word(brng, 2, 3) + std::to_string(k));
    std::set<std::string> taken(used_domains.begin(), used_domains.end());
    for (const std::string& account : pools.background_accounts) {
      EncoderProfile& p = profiles[account];
      p.account_id = account;
      const std::string domain = unique_domain(brng, kBenignTlds, taken);
      std::vector<Post> posts;
      for (int k = 0; k < 10; ++k) {
        std::vector<std::string> tokens;
        for (int t = 0; t < 6; ++t) tokens.push_back(brng.pick(vocab));
        Post post;
        post.text_tokens = make_token_set(std::move(tokens));
        post.urls = {"http://www." + domain + "/post/" + random_string(brng, 8, kBase62)};
        post.at = Timestamp{ymd(2013, 9, 1)} + seconds{brng.range(0, 60 * 86400)};
        posts.push_back(std::move(post));
      }
      std::sort(posts.begin(), posts.end(),
                [](const Post& x, const Post& y) { return x.at < y.at; });
      p.posts = std::move(posts);
    }
  }
  return out;
}

void write_synthetic(const SyntheticCorpus& synthetic, const GeneratorConfig& config,
                     std::uint64_t seed, const std::filesystem::path& corpus_dir,
                     const std::filesystem::path& fixtures_dir) {
  CorpusManifest manifest;
  manifest.generator_seed = seed;
  manifest.generator_config = config.to_json();
  save_corpus(synthetic.corpus, corpus_dir, manifest);
  save_truth(synthetic.truth, corpus_dir);
  save_fixtures(synthetic.fixtures, fixtures_dir);
}

}  // namespace linkwatch
