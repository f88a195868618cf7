#include "linkwatch/profile/profile.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "linkwatch/core/domain.hpp"
#include "linkwatch/core/error.hpp"

namespace linkwatch::profile {

using nlohmann::ordered_json;

double suspicion_factor(const EncoderProfile& profile) {
  return suspicion_report(profile).suspicion_factor;
}

SuspicionReport suspicion_report(const EncoderProfile& profile) {
  if (profile.history.empty())
    fail(ErrorKind::kInvalidArgument, "account '" + profile.account_id + "' has no link history");
  SuspicionReport r;
  r.account_id = profile.account_id;
  r.history_size = profile.history.size();
  r.warning_links = static_cast<std::size_t>(
      std::count_if(profile.history.begin(), profile.history.end(), [](const HistoryEntry& h) {
        return h.state.state == LinkStateKind::kWarning;
      }));
  r.suspicion_factor = static_cast<double>(r.warning_links) / static_cast<double>(r.history_size);
  r.highly_suspicious =
      r.history_size >= kHighlySuspiciousMinHistory && r.warning_links == r.history_size;
  return r;
}

std::vector<SuspicionReport> suspicion_reports(const Corpus& corpus) {
  std::vector<SuspicionReport> out;
  for (const auto& [id, p] : corpus.encoders)
    if (!p.history.empty()) out.push_back(suspicion_report(p));
  return out;
}

ordered_json to_json(const SuspicionReport& r) {
  return ordered_json{{"account_id", r.account_id},
                      {"suspicion_factor", r.suspicion_factor},
                      {"history_size", r.history_size},
                      {"warning_links", r.warning_links},
                      {"highly_suspicious", r.highly_suspicious}};
}

double jaccard(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

namespace {

bool is_url_token(std::string_view t) {
  return t.find("://") != std::string_view::npos || t.starts_with("www.");
}

}  // namespace

TokenSet tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !is_url_token(cur)) tokens.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) flush();
    else cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  flush();
  return make_token_set(std::move(tokens));
}

SimilarityVariance similarity_variance(std::span<const TokenSet> posts) {
  if (posts.size() < 3)
    fail(ErrorKind::kInvalidArgument, "similarity_variance needs at least 3 posts");
  std::vector<double> js;
  js.reserve(posts.size() * (posts.size() - 1) / 2);
  for (std::size_t i = 0; i < posts.size(); ++i)
    for (std::size_t j = i + 1; j < posts.size(); ++j) js.push_back(jaccard(posts[i], posts[j]));
  SimilarityVariance r;
  r.pairs = js.size();
  for (double v : js) r.mean += v;
  r.mean /= static_cast<double>(js.size());
  for (double v : js) r.variance += (v - r.mean) * (v - r.mean);
  r.variance /= static_cast<double>(js.size());
  r.flagged = r.variance < kSimilarityVarianceThreshold;
  return r;
}

ActivityTimeline activity_timeline(const EncoderProfile& profile) {
  if (profile.history.empty())
    fail(ErrorKind::kInvalidArgument, "account '" + profile.account_id + "' has no link history");
  int first = year_month_of(profile.history.front().created_at).index();
  int last = first;
  for (const HistoryEntry& h : profile.history) {
    const int m = year_month_of(h.created_at).index();
    first = std::min(first, m);
    last = std::max(last, m);
  }
  ActivityTimeline t;
  t.month_lag = last - first;
  t.buckets.resize(static_cast<std::size_t>(last - first + 1));
  for (int m = first; m <= last; ++m)
    t.buckets[static_cast<std::size_t>(m - first)].month = YearMonth::from_index(m);
  for (const HistoryEntry& h : profile.history) {
    MonthBucket& b = t.buckets[static_cast<std::size_t>(year_month_of(h.created_at).index() - first)];
    ++b.links_created;
    b.clicks_received += h.click_count;
  }
  return t;
}

std::string timeline_csv(const ActivityTimeline& t) {
  std::ostringstream out;
  out << "month,links,clicks\n";
  for (const MonthBucket& b : t.buckets)
    out << b.month.to_string() << ',' << b.links_created << ',' << b.clicks_received << '\n';
  return out.str();
}

PostingPattern posting_pattern(std::span<const Timestamp> timestamps) {
  if (timestamps.empty()) fail(ErrorKind::kInvalidArgument, "posting_pattern needs a timestamp");
  PostingPattern p;
  std::set<int> hours, minutes;
  for (const Timestamp& ts : timestamps) {
    PostingPoint pt{utc_hour(ts), utc_minute(ts)};
    hours.insert(pt.hour);
    minutes.insert(pt.minute);
    p.points.push_back(pt);
  }
  const double minute_term = 1.0 - static_cast<double>(minutes.size()) / 60.0;
  const double hour_term = 1.0 - static_cast<double>(hours.size()) / 24.0;
  p.automation_score = (minute_term + hour_term) / 2.0;
  return p;
}

PairOverlap OverlapMatrix::pair(std::size_t i, std::size_t j) const {
  const std::size_t n = accounts.size();
  return PairOverlap{accounts.at(i), accounts.at(j), url[i * n + j], domain[i * n + j],
                     text[i * n + j]};
}

std::vector<PairOverlap> OverlapMatrix::pairs() const {
  std::vector<PairOverlap> out;
  for (std::size_t i = 0; i < accounts.size(); ++i)
    for (std::size_t j = i + 1; j < accounts.size(); ++j) out.push_back(pair(i, j));
  return out;
}

namespace {

struct AccountSets {
  std::string id;
  TokenSet urls;
  TokenSet domains;
  std::vector<TokenSet> posts;
};

std::vector<AccountSets> collect(std::span<const EncoderProfile> profiles) {
  std::vector<AccountSets> out;
  for (const EncoderProfile& p : profiles) {
    if (!p.posts || p.posts->empty()) continue;
    AccountSets s;
    s.id = p.account_id;
    std::vector<std::string> urls, domains;
    for (const Post& post : *p.posts) {
      s.posts.push_back(post.text_tokens);
      for (const std::string& u : post.urls) {
        urls.push_back(u);
        domains.push_back(registrable_domain(u));
      }
    }
    s.urls = make_token_set(std::move(urls));
    s.domains = make_token_set(std::move(domains));
    out.push_back(std::move(s));
  }
  if (out.size() < 2)
    fail(ErrorKind::kInvalidArgument, "cross_account_overlap needs two profiles with posts");
  return out;
}

double mean_cross_jaccard(const AccountSets& a, const AccountSets& b) {
  double sum = 0.0;
  for (const TokenSet& x : a.posts)
    for (const TokenSet& y : b.posts) sum += jaccard(x, y);
  return sum / static_cast<double>(a.posts.size() * b.posts.size());
}

OverlapMatrix empty_matrix(const std::vector<AccountSets>& sets) {
  OverlapMatrix m;
  const std::size_t n = sets.size();
  for (const AccountSets& s : sets) m.accounts.push_back(s.id);
  m.url.assign(n * n, 0.0);
  m.domain.assign(n * n, 0.0);
  m.text.assign(n * n, 0.0);
  return m;
}

void fill(OverlapMatrix& m, const std::vector<AccountSets>& sets, std::size_t i, std::size_t j) {
  const std::size_t n = sets.size();
  const double u = jaccard(sets[i].urls, sets[j].urls);
  const double d = jaccard(sets[i].domains, sets[j].domains);
  // Sum in a fixed order so (i, j) and (j, i) agree bit for bit.
  const double t = i <= j ? mean_cross_jaccard(sets[i], sets[j]) : mean_cross_jaccard(sets[j], sets[i]);
  for (auto [r, c] : {std::pair{i, j}, std::pair{j, i}}) {
    m.url[r * n + c] = u;
    m.domain[r * n + c] = d;
    m.text[r * n + c] = t;
  }
}

}  // namespace

OverlapMatrix cross_account_overlap(std::span<const EncoderProfile> profiles) {
  const std::vector<AccountSets> sets = collect(profiles);
  OverlapMatrix m = empty_matrix(sets);
  const std::size_t n = sets.size();
  // Upper triangle including the diagonal, flattened so pairs balance across threads.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) jobs.emplace_back(i, j);
  const auto count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto [i, j] = jobs[static_cast<std::size_t>(k)];
    fill(m, sets, i, j);
  }
  return m;
}

namespace serial {
OverlapMatrix cross_account_overlap(std::span<const EncoderProfile> profiles) {
  const std::vector<AccountSets> sets = collect(profiles);
  OverlapMatrix m = empty_matrix(sets);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i; j < sets.size(); ++j) fill(m, sets, i, j);
  return m;
}
}  // namespace serial

ordered_json to_json(const OverlapMatrix& m) {
  const std::size_t n = m.accounts.size();
  auto square = [n](const std::vector<double>& v) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i)
      rows.push_back(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(i * n),
                                         v.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
    return rows;
  };
  ordered_json pairs = ordered_json::array();
  for (const PairOverlap& p : m.pairs())
    pairs.push_back({{"a", p.a},
                     {"b", p.b},
                     {"url_overlap", p.url_overlap},
                     {"domain_overlap", p.domain_overlap},
                     {"text_similarity", p.text_similarity}});
  return ordered_json{{"accounts", m.accounts},
                      {"url_overlap", square(m.url)},
                      {"domain_overlap", square(m.domain)},
                      {"text_similarity", square(m.text)},
                      {"pairs", std::move(pairs)}};
}

std::vector<ReferrerShare> top_referrers(std::span<const ShortLinkRecord> links, std::size_t limit) {
  std::map<std::string, std::int64_t> clicks;
  std::int64_t total = 0;
  for (const ShortLinkRecord& l : links)
    for (const ReferrerStat& r : l.referrers) {
      clicks[r.referrer] += r.clicks;
      total += r.clicks;
    }
  std::vector<ReferrerShare> out;
  for (const auto& [ref, c] : clicks)
    out.push_back({ref, c, total == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(total)});
  std::stable_sort(out.begin(), out.end(),
                   [](const ReferrerShare& a, const ReferrerShare& b) { return a.clicks > b.clicks; });
  if (out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace linkwatch::profile
