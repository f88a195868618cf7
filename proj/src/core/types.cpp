#include "linkwatch/core/types.hpp"

#include <algorithm>

#include "linkwatch/core/domain.hpp"
#include "linkwatch/core/error.hpp"

namespace linkwatch {

const char* to_string(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::kRegular: return "REGULAR";
    case EncoderKind::kAnonymous: return "ANONYMOUS";
    case EncoderKind::kApplication: return "APPLICATION";
  }
  return "REGULAR";
}

EncoderKind encoder_kind_from_string(std::string_view text) {
  if (text == "REGULAR") return EncoderKind::kRegular;
  if (text == "ANONYMOUS") return EncoderKind::kAnonymous;
  if (text == "APPLICATION") return EncoderKind::kApplication;
  fail(ErrorKind::kSchemaViolation,
       "unknown encoder kind '" + std::string(text) + "'");
}

const char* to_string(LinkStateKind kind) {
  switch (kind) {
    case LinkStateKind::kActive: return "ACTIVE";
    case LinkStateKind::kWarning: return "WARNING";
    case LinkStateKind::kDead: return "DEAD";
  }
  return "ACTIVE";
}

LinkStateKind link_state_from_string(std::string_view text) {
  if (text == "ACTIVE") return LinkStateKind::kActive;
  if (text == "WARNING") return LinkStateKind::kWarning;
  if (text == "DEAD") return LinkStateKind::kDead;
  fail(ErrorKind::kSchemaViolation,
       "unknown link state '" + std::string(text) + "'");
}

std::int64_t ShortLinkRecord::total_clicks() const {
  std::int64_t total = 0;
  for (const ClickEvent& c : clicks) total += c.count;
  return total;
}

TokenSet make_token_set(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

const std::set<std::string, std::less<>>& default_anonymous_tokens() {
  static const std::set<std::string, std::less<>> tokens{"someone",
                                                         "anonymous"};
  return tokens;
}

namespace {

[[noreturn]] void broken(const std::string& who, const std::string& what) {
  fail(ErrorKind::kInvariantViolation, who + ": " + what);
}

}  // namespace

void validate_link(const ShortLinkRecord& link,
                   const std::set<std::string, std::less<>>& anonymous_tokens) {
  const std::string who = "link '" + link.short_hash + "'";
  if (link.short_hash.empty()) broken(who, "empty short_hash");
  if (link.encoders.empty()) broken(who, "encoders list is empty");
  for (const EncoderRef& e : link.encoders) {
    if (e.account_id.empty()) broken(who, "encoder with empty account_id");
    bool is_app = e.kind == EncoderKind::kApplication;
    if (is_app != e.application_name.has_value())
      broken(who, "encoder '" + e.account_id +
                      "': APPLICATION kind and application_name disagree");
    bool is_anon = e.kind == EncoderKind::kAnonymous;
    if (is_anon != (anonymous_tokens.count(e.account_id) > 0))
      broken(who, "encoder '" + e.account_id +
                      "': ANONYMOUS kind and anonymous token set disagree");
  }
  for (const ClickEvent& c : link.clicks) {
    if (c.count < 1) broken(who, "click event with count < 1");
    if (c.at < link.created_at)
      broken(who, "click at " + format_timestamp(c.at) +
                      " precedes created_at " +
                      format_timestamp(link.created_at));
  }
  for (const ReferrerStat& r : link.referrers) {
    if (r.referrer.empty()) broken(who, "empty referrer");
    if (r.clicks < 0) broken(who, "negative referrer clicks");
  }
  if (link.whois && link.whois->created_on && link.whois->expires_on &&
      *link.whois->created_on > *link.whois->expires_on)
    broken(who, "WHOIS created_on after expires_on");
  if (link.warning_count < 0) broken(who, "negative warning_count");
  std::string expected;
  try {
    expected = registrable_domain(link.long_url);
  } catch (const Error& e) {
    broken(who, e.what());
  }
  if (link.domain != expected)
    broken(who, "domain '" + link.domain + "' is not the registrable domain '" +
                    expected + "' of long_url");
}

void validate_profile(const EncoderProfile& profile) {
  const std::string who = "encoder '" + profile.account_id + "'";
  if (profile.account_id.empty()) broken(who, "empty account_id");
  for (std::size_t i = 1; i < profile.history.size(); ++i) {
    if (profile.history[i].created_at < profile.history[i - 1].created_at)
      broken(who, "history not sorted by created_at");
  }
  if (profile.posts) {
    for (const Post& p : *profile.posts) {
      if (!std::is_sorted(p.text_tokens.begin(), p.text_tokens.end()) ||
          std::adjacent_find(p.text_tokens.begin(), p.text_tokens.end()) !=
              p.text_tokens.end())
        broken(who, "post tokens are not a sorted set");
      for (const std::string& t : p.text_tokens) {
        if (t.empty()) broken(who, "empty token");
        if (std::any_of(t.begin(), t.end(),
                        [](char c) { return c >= 'A' && c <= 'Z'; }))
          broken(who, "token '" + t + "' is not lowercase");
        if (t.find("://") != std::string::npos)
          broken(who, "token '" + t + "' is a URL");
      }
    }
  }
}

void validate_corpus(const Corpus& corpus,
                     const std::set<std::string, std::less<>>& anonymous_tokens) {
  for (const auto& [id, profile] : corpus.encoders) {
    if (id != profile.account_id)
      broken("encoder '" + id + "'", "map key differs from account_id");
    validate_profile(profile);
  }
  for (const ShortLinkRecord& link : corpus.links) {
    validate_link(link, anonymous_tokens);
    for (const EncoderRef& e : link.encoders) {
      if (e.kind == EncoderKind::kRegular && !corpus.encoders.count(e.account_id))
        broken("link '" + link.short_hash + "'",
               "encoder '" + e.account_id + "' has no profile");
    }
  }
}

}  // namespace linkwatch
