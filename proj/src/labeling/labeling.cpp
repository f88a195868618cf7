#include "linkwatch/labeling/labeling.hpp"

#include <map>

#include "linkwatch/core/domain.hpp"
#include "linkwatch/core/error.hpp"
#include "linkwatch/core/synthetic.hpp"

namespace linkwatch::labeling {

const char* to_string(LabelValue value) {
  return value == LabelValue::kMalicious ? "MALICIOUS" : "BENIGN";
}

LabelValue label_value_from_string(std::string_view text) {
  if (text == "MALICIOUS") return LabelValue::kMalicious;
  if (text == "BENIGN") return LabelValue::kBenign;
  fail(ErrorKind::kSchemaViolation, "unknown label '" + std::string(text) + "'");
}

void AuditLog::warn(std::string message) {
  std::lock_guard lock(mutex_);
  entries_.push_back(std::move(message));
}

std::vector<std::string> AuditLog::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::vector<BlacklistVerdict> query_blacklists(std::string_view url,
                                               std::vector<ProviderGate*> gates,
                                               const QueryOptions& options) {
  std::vector<BlacklistVerdict> out;
  out.reserve(gates.size());
  std::optional<std::string> domain;
  std::string domain_error;
  try {
    domain = registrable_domain(url);
  } catch (const Error& e) {
    domain_error = e.what();
  }
  for (ProviderGate* gate : gates) {
    const BlacklistProvider& p = gate->provider();
    BlacklistVerdict v;
    v.provider = p.id();
    v.level = p.level();
    v.checked_at = options.checked_at;
    auto failed = [&](const std::string& why) {
      v.hit = false;
      v.failed = true;
      v.category = "unknown";
      if (options.audit)
        options.audit->warn("provider '" + p.id() + "' failed for '" +
                            std::string(url) + "': " + why);
    };
    if (p.level() == ProviderLevel::kDomain) {
      if (!domain) {
        failed(domain_error);
        out.push_back(std::move(v));
        continue;
      }
      if (options.whitelist && options.whitelist->count(*domain)) {
        v.suppressed = true;
        out.push_back(std::move(v));
        continue;
      }
    }
    const std::string query = p.level() == ProviderLevel::kDomain ? *domain : std::string(url);
    try {
      auto start = std::chrono::steady_clock::now();
      ProviderResult r = gate->check(query);
      auto elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed > p.timeout()) {
        failed("timed out");
      } else {
        v.hit = r.hit;
        if (r.hit) v.category = r.category;
      }
    } catch (const std::exception& e) {
      failed(e.what());
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<BlacklistVerdict> query_blacklists(std::string_view url,
                                               const ProviderList& providers,
                                               const QueryOptions& options) {
  std::vector<std::unique_ptr<ProviderGate>> owned;
  std::vector<ProviderGate*> gates;
  for (const auto& p : providers) {
    owned.push_back(std::make_unique<ProviderGate>(*p));
    gates.push_back(owned.back().get());
  }
  return query_blacklists(url, gates, options);
}

Label label_instance(const ShortLinkRecord&, const std::vector<BlacklistVerdict>& verdicts,
                     const LinkState& state) {
  Label label;
  for (const BlacklistVerdict& v : verdicts) {
    if (v.hit) label.sources.push_back(v.provider);
  }
  if (state.state == LinkStateKind::kWarning)
    label.sources.emplace_back(kWarningPageSource);
  if (label.sources.empty()) {
    label.sources.emplace_back(kNoSource);
  } else {
    label.value = LabelValue::kMalicious;
  }
  return label;
}

namespace {

void check_context(const LabelingContext& ctx) {
  if (!ctx.providers || !ctx.probe)
    fail(ErrorKind::kInvalidArgument, "labeling context needs providers and a probe");
}

LinkLabel label_one(const ShortLinkRecord& link, const LabelingContext& ctx,
                    const std::vector<ProviderGate*>& gates) {
  LinkLabel out;
  out.short_hash = link.short_hash;
  out.verdicts = query_blacklists(link.long_url, gates, ctx.query);
  out.state = probe_link_state(short_url(ctx.shortener_host, link.short_hash), *ctx.probe,
                               ctx.warning_pattern, ctx.query.checked_at);
  out.label = label_instance(link, out.verdicts, out.state);
  return out;
}

std::vector<std::unique_ptr<ProviderGate>> make_gates(const LabelingContext& ctx) {
  std::vector<std::unique_ptr<ProviderGate>> gates;
  for (const auto& p : *ctx.providers)
    gates.push_back(std::make_unique<ProviderGate>(*p, ctx.max_in_flight_per_provider));
  return gates;
}

std::vector<ProviderGate*> raw(const std::vector<std::unique_ptr<ProviderGate>>& gates) {
  std::vector<ProviderGate*> out;
  for (const auto& g : gates) out.push_back(g.get());
  return out;
}

}  // namespace

std::vector<LinkLabel> label_corpus(const Corpus& corpus, const LabelingContext& ctx) {
  check_context(ctx);
  auto gates = make_gates(ctx);
  const auto gate_ptrs = raw(gates);
  std::vector<LinkLabel> out(corpus.links.size());
  const auto n = static_cast<std::int64_t>(corpus.links.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    auto u = static_cast<std::size_t>(i);
    out[u] = label_one(corpus.links[u], ctx, gate_ptrs);
  }
  return out;
}

namespace serial {
std::vector<LinkLabel> label_corpus(const Corpus& corpus, const LabelingContext& ctx) {
  check_context(ctx);
  auto gates = make_gates(ctx);
  const auto gate_ptrs = raw(gates);
  std::vector<LinkLabel> out;
  out.reserve(corpus.links.size());
  for (const ShortLinkRecord& link : corpus.links) out.push_back(label_one(link, ctx, gate_ptrs));
  return out;
}
}  // namespace serial

LivenessReport domain_liveness_report(const Corpus& corpus, const LinkProbe& probe,
                                      const std::set<std::string>* whitelist) {
  std::map<std::string, std::int64_t> warnings;
  for (const ShortLinkRecord& link : corpus.links) warnings[link.domain] += link.warning_count;
  LivenessReport report;
  const WarningPattern pattern;
  std::size_t dead = 0;
  for (const auto& [domain, count] : warnings) {
    if (whitelist && whitelist->count(domain)) {
      ++report.whitelisted_skipped;
      continue;
    }
    LinkState s = classify_response(probe.fetch("http://" + domain + "/"), pattern, Timestamp{});
    DomainLiveness d{domain, s.state != LinkStateKind::kDead, count};
    if (!d.alive) {
      ++dead;
      report.dead_warning_sum += count;
    }
    report.domains.push_back(std::move(d));
  }
  if (!report.domains.empty())
    report.dead_fraction = static_cast<double>(dead) / static_cast<double>(report.domains.size());
  return report;
}

}  // namespace linkwatch::labeling
