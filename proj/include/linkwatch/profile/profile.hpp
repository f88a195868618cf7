#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "linkwatch/core/types.hpp"

namespace linkwatch::profile {

// Pairwise-similarity variance below this marks an account as a bot candidate.
inline constexpr double kSimilarityVarianceThreshold = 0.00012;
inline constexpr std::size_t kHighlySuspiciousMinHistory = 100;

// WARNING links / all links in the history. Throws on an empty history.
double suspicion_factor(const EncoderProfile& profile);

struct SuspicionReport {
  std::string account_id;
  double suspicion_factor = 0.0;
  std::size_t history_size = 0;
  std::size_t warning_links = 0;
  bool highly_suspicious = false;  // history >= 100 and every link WARNING
};

SuspicionReport suspicion_report(const EncoderProfile& profile);
// One report per profile with a non-empty history, in account order.
std::vector<SuspicionReport> suspicion_reports(const Corpus& corpus);
nlohmann::ordered_json to_json(const SuspicionReport& report);

// |A ∩ B| / |A ∪ B| over sorted token sets; two empty sets give 1.
double jaccard(const TokenSet& a, const TokenSet& b);

// Drops URL tokens, lowercases and splits on whitespace.
TokenSet tokenize(std::string_view text);

struct SimilarityVariance {
  double variance = 0.0;  // population variance of all pairwise Jaccard values
  double mean = 0.0;
  std::size_t pairs = 0;
  bool flagged = false;
};

// Needs at least three posts.
SimilarityVariance similarity_variance(std::span<const TokenSet> posts);

struct MonthBucket {
  YearMonth month;
  std::int64_t links_created = 0;
  std::int64_t clicks_received = 0;  // attributed to the link's creation month
};

struct ActivityTimeline {
  std::vector<MonthBucket> buckets;  // first to last month, idle months included
  int month_lag = 0;                 // calendar months from first to last link
};

ActivityTimeline activity_timeline(const EncoderProfile& profile);
std::string timeline_csv(const ActivityTimeline& timeline);

struct PostingPoint {
  int hour = 0;
  int minute = 0;
};

struct PostingPattern {
  std::vector<PostingPoint> points;
  // Mean of (1 - distinct minutes / 60) and (1 - distinct hours / 24).
  double automation_score = 0.0;
};

PostingPattern posting_pattern(std::span<const Timestamp> timestamps);

struct PairOverlap {
  std::string a;
  std::string b;
  double url_overlap = 0.0;
  double domain_overlap = 0.0;
  double text_similarity = 0.0;  // mean Jaccard over cross pairs of posts
};

// Symmetric n x n matrices, row-major, in input order.
struct OverlapMatrix {
  std::vector<std::string> accounts;
  std::vector<double> url;
  std::vector<double> domain;
  std::vector<double> text;

  PairOverlap pair(std::size_t i, std::size_t j) const;
  // Every i < j pair.
  std::vector<PairOverlap> pairs() const;
};

// Profiles without posts are skipped; at least two must remain.
OverlapMatrix cross_account_overlap(std::span<const EncoderProfile> profiles);
namespace serial {
OverlapMatrix cross_account_overlap(std::span<const EncoderProfile> profiles);
}
nlohmann::ordered_json to_json(const OverlapMatrix& overlap);

struct ReferrerShare {
  std::string referrer;
  std::int64_t clicks = 0;
  double share = 0.0;
};

// Clicks per referrer summed over links, most clicks first, ties by name.
std::vector<ReferrerShare> top_referrers(std::span<const ShortLinkRecord> links,
                                         std::size_t limit);

}  // namespace linkwatch::profile
