#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "linkwatch/core/time.hpp"

namespace linkwatch {

inline constexpr std::string_view kDirectReferrer = "DIRECT";

enum class EncoderKind { kRegular, kAnonymous, kApplication };

const char* to_string(EncoderKind kind);
EncoderKind encoder_kind_from_string(std::string_view text);

struct EncoderRef {
  std::string account_id;
  EncoderKind kind = EncoderKind::kRegular;
  std::optional<std::string> application_name;

  bool operator==(const EncoderRef&) const = default;
};

struct ClickEvent {
  Timestamp at;
  std::int64_t count = 1;

  bool operator==(const ClickEvent&) const = default;
};

// `referrer` is either kDirectReferrer or a referring domain.
struct ReferrerStat {
  std::string referrer;
  std::int64_t clicks = 0;

  bool is_direct() const { return referrer == kDirectReferrer; }
  bool operator==(const ReferrerStat&) const = default;
};

struct WhoisRecord {
  std::optional<Date> created_on;
  std::optional<Date> updated_on;
  std::optional<Date> expires_on;

  bool operator==(const WhoisRecord&) const = default;
};

struct ShortLinkRecord {
  std::string short_hash;
  std::string global_hash;
  std::string long_url;
  std::string domain;
  Timestamp created_at;
  std::vector<EncoderRef> encoders;
  std::vector<ClickEvent> clicks;
  std::vector<ReferrerStat> referrers;
  std::optional<WhoisRecord> whois;
  // Metadata only. Never read by feature extraction.
  std::int64_t warning_count = 0;

  std::int64_t total_clicks() const;
  bool operator==(const ShortLinkRecord&) const = default;
};

enum class LinkStateKind { kActive, kWarning, kDead };

const char* to_string(LinkStateKind kind);
LinkStateKind link_state_from_string(std::string_view text);

struct LinkState {
  LinkStateKind state = LinkStateKind::kActive;
  Timestamp observed_at;

  bool operator==(const LinkState&) const = default;
};

// Sorted, duplicate-free, lowercase tokens.
using TokenSet = std::vector<std::string>;

TokenSet make_token_set(std::vector<std::string> tokens);

struct ConnectedAccount {
  std::string network;
  std::string handle;

  bool operator==(const ConnectedAccount&) const = default;
};

struct HistoryEntry {
  std::string short_hash;
  Timestamp created_at;
  std::int64_t click_count = 0;
  LinkState state;

  bool operator==(const HistoryEntry&) const = default;
};

struct Post {
  TokenSet text_tokens;
  std::vector<std::string> urls;
  Timestamp at;

  bool operator==(const Post&) const = default;
};

struct EncoderProfile {
  std::string account_id;
  std::optional<Timestamp> profile_created_at;
  std::vector<ConnectedAccount> connected_accounts;
  std::vector<HistoryEntry> history;  // non-decreasing created_at
  std::optional<std::vector<Post>> posts;

  bool operator==(const EncoderProfile&) const = default;
};

struct Corpus {
  std::vector<ShortLinkRecord> links;
  std::map<std::string, EncoderProfile> encoders;

  bool operator==(const Corpus&) const = default;
};

// Account ids the shortener reports for anonymous shortening.
const std::set<std::string, std::less<>>& default_anonymous_tokens();

// Invariant checks. Each throws Error(kInvariantViolation) naming the
// offending link or account.
void validate_link(const ShortLinkRecord& link,
                   const std::set<std::string, std::less<>>& anonymous_tokens);
void validate_profile(const EncoderProfile& profile);
void validate_corpus(const Corpus& corpus,
                     const std::set<std::string, std::less<>>& anonymous_tokens);

}  // namespace linkwatch
