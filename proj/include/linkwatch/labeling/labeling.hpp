#pragma once

#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linkwatch/core/types.hpp"
#include "linkwatch/labeling/probe.hpp"
#include "linkwatch/labeling/provider.hpp"

namespace linkwatch::labeling {

inline constexpr std::string_view kWarningPageSource = "warning_page";
inline constexpr std::string_view kNoSource = "none";

// A failed lookup carries hit = false, category "unknown" and failed = true.
// A whitelisted domain-level lookup is skipped with suppressed = true.
struct BlacklistVerdict {
  std::string provider;
  ProviderLevel level = ProviderLevel::kUrl;
  bool hit = false;
  std::optional<std::string> category;
  Timestamp checked_at;
  bool failed = false;
  bool suppressed = false;

  bool operator==(const BlacklistVerdict&) const = default;
};

enum class LabelValue { kBenign, kMalicious };

const char* to_string(LabelValue value);
LabelValue label_value_from_string(std::string_view text);

struct Label {
  LabelValue value = LabelValue::kBenign;
  std::vector<std::string> sources;  // firing checks, or {"none"}

  bool malicious() const { return value == LabelValue::kMalicious; }
  bool operator==(const Label&) const = default;
};

// Thread-safe sink for lookup failures and other labeling warnings.
class AuditLog {
 public:
  void warn(std::string message);
  std::vector<std::string> entries() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> entries_;
};

struct QueryOptions {
  Timestamp checked_at{};
  const std::set<std::string>* whitelist = nullptr;  // registrable domains
  AuditLog* audit = nullptr;
};

// One verdict per provider, in provider order.
std::vector<BlacklistVerdict> query_blacklists(std::string_view url,
                                               std::vector<ProviderGate*> gates,
                                               const QueryOptions& options = {});
std::vector<BlacklistVerdict> query_blacklists(std::string_view url,
                                               const ProviderList& providers,
                                               const QueryOptions& options = {});

// MALICIOUS iff any verdict hit or the link shows a warning page.
Label label_instance(const ShortLinkRecord& link,
                     const std::vector<BlacklistVerdict>& verdicts,
                     const LinkState& state);

struct LabelingContext {
  const ProviderList* providers = nullptr;
  const LinkProbe* probe = nullptr;
  WarningPattern warning_pattern;
  std::string shortener_host = "bit.ly";
  QueryOptions query;
  std::ptrdiff_t max_in_flight_per_provider = 4;
};

struct LinkLabel {
  std::string short_hash;
  Label label;
  LinkState state;
  std::vector<BlacklistVerdict> verdicts;
};

// Labels every link; results are in corpus order. The OpenMP version runs
// links concurrently through per-provider gates.
std::vector<LinkLabel> label_corpus(const Corpus& corpus, const LabelingContext& ctx);
namespace serial {
std::vector<LinkLabel> label_corpus(const Corpus& corpus, const LabelingContext& ctx);
}

struct DomainLiveness {
  std::string domain;
  bool alive = true;
  std::int64_t total_warning_count = 0;
};

struct LivenessReport {
  std::vector<DomainLiveness> domains;  // sorted by domain
  std::size_t whitelisted_skipped = 0;
  double dead_fraction = 0.0;
  std::int64_t dead_warning_sum = 0;
};

// Probes "http://<domain>/" for each unique registrable domain not on the
// whitelist. Probe failures count as dead.
LivenessReport domain_liveness_report(const Corpus& corpus, const LinkProbe& probe,
                                      const std::set<std::string>* whitelist = nullptr);

}  // namespace linkwatch::labeling
