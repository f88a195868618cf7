#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "linkwatch/core/error.hpp"
#include "linkwatch/core/random.hpp"
#include "linkwatch/core/synthetic.hpp"
#include "linkwatch/profile/profile.hpp"

using namespace linkwatch;
using namespace linkwatch::profile;
using linkwatch::testing::history_entry;
using linkwatch::testing::ts;

namespace {

EncoderProfile with_history(std::size_t warnings, std::size_t total) {
  EncoderProfile p;
  p.account_id = "acct";
  for (std::size_t i = 0; i < total; ++i)
    p.history.push_back(history_entry("2013-01-01T00:00:00Z",
                                      i < warnings ? LinkStateKind::kWarning : LinkStateKind::kActive));
  return p;
}

Post post(std::vector<std::string> tokens, std::vector<std::string> urls) {
  return Post{make_token_set(std::move(tokens)), std::move(urls), ts("2013-10-01T00:00:00Z")};
}

EncoderProfile poster(const std::string& id, std::vector<Post> posts) {
  EncoderProfile p;
  p.account_id = id;
  p.posts = std::move(posts);
  return p;
}

}  // namespace

TEST_CASE("suspicion factor fixtures") {
  CHECK(suspicion_factor(with_history(100, 100)) == 1.0);
  CHECK(suspicion_factor(with_history(80, 100)) == 0.8);
  CHECK(suspicion_factor(with_history(0, 50)) == 0.0);
  CHECK_THROWS_AS(suspicion_factor(with_history(0, 0)), Error);
}

TEST_CASE("highly suspicious needs 100 links, all warnings") {
  CHECK(suspicion_report(with_history(100, 100)).highly_suspicious);
  CHECK(suspicion_report(with_history(150, 150)).highly_suspicious);
  CHECK_FALSE(suspicion_report(with_history(99, 99)).highly_suspicious);
  CHECK_FALSE(suspicion_report(with_history(99, 100)).highly_suspicious);
  const SuspicionReport r = suspicion_report(with_history(80, 100));
  CHECK(r.warning_links == 80);
  CHECK(r.history_size == 100);
  CHECK(to_json(r)["suspicion_factor"] == 0.8);
}

TEST_CASE("suspicion factor is monotone in added links") {
  Rng rng(5);
  EncoderProfile p = with_history(3, 10);
  for (int i = 0; i < 100; ++i) {
    const double before = suspicion_factor(p);
    const bool warn = rng.bernoulli(0.5);
    p.history.push_back(history_entry("2013-02-01T00:00:00Z",
                                      warn ? LinkStateKind::kWarning : LinkStateKind::kActive));
    const double after = suspicion_factor(p);
    if (warn) CHECK(after >= before);
    else CHECK(after <= before);
    CHECK(after >= 0.0);
    CHECK(after <= 1.0);
  }
}

TEST_CASE("jaccard fixtures and properties") {
  const TokenSet ab = make_token_set({"a", "b"});
  const TokenSet bc = make_token_set({"b", "c"});
  CHECK(jaccard(ab, bc) == 1.0 / 3.0);
  CHECK(jaccard(ab, ab) == 1.0);
  CHECK(jaccard(ab, make_token_set({"x", "y"})) == 0.0);
  CHECK(jaccard({}, {}) == 1.0);
  CHECK(jaccard(ab, {}) == 0.0);
  CHECK(jaccard(bc, ab) == jaccard(ab, bc));
}

TEST_CASE("tokenize strips URLs and lowercases") {
  const TokenSet t = tokenize("Check THIS http://bit.ly/x  out www.spam.com this\tnow");
  CHECK(t == TokenSet{"check", "now", "out", "this"});
  CHECK(tokenize("   ").empty());
}

TEST_CASE("similarity variance") {
  const TokenSet same = make_token_set({"buy", "now"});
  const std::vector<TokenSet> identical(5, same);
  SimilarityVariance v = similarity_variance(identical);
  CHECK(v.variance == 0.0);
  CHECK(v.mean == 1.0);
  CHECK(v.pairs == 10);
  CHECK(v.flagged);

  const std::vector<TokenSet> disjoint = {make_token_set({"a"}), make_token_set({"b"}),
                                          make_token_set({"c"}), make_token_set({"d"})};
  v = similarity_variance(disjoint);
  CHECK(v.variance == 0.0);
  CHECK(v.mean == 0.0);
  CHECK(v.pairs == 6);
  CHECK(v.flagged);

  // Pairwise values 1/3, 0, 0: mean 1/9, population variance 2/81.
  const std::vector<TokenSet> mixed = {make_token_set({"a", "b"}), make_token_set({"b", "c"}),
                                       make_token_set({"z"})};
  v = similarity_variance(mixed);
  CHECK(v.variance == doctest::Approx(2.0 / 81.0).epsilon(1e-15));
  CHECK_FALSE(v.flagged);
  CHECK(kSimilarityVarianceThreshold == 0.00012);

  CHECK_THROWS_AS(similarity_variance(std::vector<TokenSet>(2, same)), Error);
}

TEST_CASE("activity timeline") {
  EncoderProfile p;
  p.account_id = "bamse";
  p.history = {history_entry("2011-10-03T10:00:00Z", LinkStateKind::kActive, 5),
               history_entry("2011-12-31T23:59:59Z", LinkStateKind::kActive, 1),
               history_entry("2012-01-01T00:00:00Z", LinkStateKind::kWarning, 2),
               history_entry("2013-10-30T08:00:00Z", LinkStateKind::kActive, 7)};
  const ActivityTimeline t = activity_timeline(p);
  CHECK(t.month_lag == 24);
  REQUIRE(t.buckets.size() == 25);
  CHECK(t.buckets.front().month.to_string() == "2011-10");
  CHECK(t.buckets.back().month.to_string() == "2013-10");
  CHECK(t.buckets[1].links_created == 0);
  CHECK(t.buckets[2].links_created == 1);
  CHECK(t.buckets[3].links_created == 1);
  std::int64_t links = 0, clicks = 0;
  for (const MonthBucket& b : t.buckets) {
    links += b.links_created;
    clicks += b.clicks_received;
  }
  CHECK(links == 4);
  CHECK(clicks == 15);
  const std::string csv = timeline_csv(t);
  CHECK(csv.starts_with("month,links,clicks\n2011-10,1,5\n2011-11,0,0\n"));

  EncoderProfile one;
  one.history = {history_entry("2013-05-01T00:00:00Z", LinkStateKind::kActive),
                 history_entry("2013-05-31T23:00:00Z", LinkStateKind::kActive)};
  const ActivityTimeline t1 = activity_timeline(one);
  CHECK(t1.month_lag == 0);
  CHECK(t1.buckets.size() == 1);
}

TEST_CASE("idle stretches appear as zero buckets") {
  EncoderProfile p;
  for (const char* when : {"2012-01-05T00:00:00Z", "2012-02-05T00:00:00Z", "2012-03-05T00:00:00Z",
                           "2012-04-05T00:00:00Z", "2012-05-05T00:00:00Z", "2012-06-05T00:00:00Z",
                           "2012-07-05T00:00:00Z", "2013-08-05T00:00:00Z"})
    p.history.push_back(history_entry(when, LinkStateKind::kActive, 1));
  const ActivityTimeline t = activity_timeline(p);
  REQUIRE(t.buckets.size() == 20);
  for (std::size_t i = 7; i < 19; ++i) CHECK(t.buckets[i].links_created == 0);
}

TEST_CASE("posting pattern automation score") {
  std::vector<Timestamp> hourly;
  for (int h = 0; h < 24; ++h) hourly.push_back(ts("2013-10-01T00:00:00Z") + std::chrono::hours{h});
  const PostingPattern p = posting_pattern(hourly);
  CHECK(p.points.size() == 24);
  CHECK(p.points[5].hour == 5);
  CHECK(p.points[5].minute == 0);
  CHECK(p.automation_score == doctest::Approx(0.49166666666666664).epsilon(1e-15));

  std::vector<Timestamp> half;
  for (int h = 0; h < 12; ++h) half.push_back(ts("2013-10-01T00:00:00Z") + std::chrono::hours{h});
  CHECK(posting_pattern(half).automation_score == doctest::Approx(0.7416666666666667).epsilon(1e-15));

  const std::vector<Timestamp> single = {ts("2013-10-01T13:37:00Z")};
  const PostingPattern s = posting_pattern(single);
  CHECK(s.points[0].hour == 13);
  CHECK(s.points[0].minute == 37);
  CHECK(s.automation_score == doctest::Approx((59.0 / 60.0 + 23.0 / 24.0) / 2.0));
}

TEST_CASE("uniform random timestamps score near the coverage expectation") {
  // Expected (1 - E[distinct]/60 + 1 - E[distinct]/24) / 2 for 1000 draws.
  const double expected = 2.5103325816557308e-08;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    std::vector<Timestamp> t;
    for (int i = 0; i < 1000; ++i)
      t.push_back(ts("2013-01-01T00:00:00Z") + std::chrono::seconds{rng.range(0, 365 * 86400 - 1)});
    CHECK(std::abs(posting_pattern(t).automation_score - expected) < 0.01);
  }
}

TEST_CASE("cross account overlap on fixtures") {
  const std::vector<EncoderProfile> profiles = {
      poster("a", {post({"x"}, {"http://one.com/1", "http://two.org/2"})}),
      poster("b", {post({"x"}, {"http://two.org/2", "http://one.com/1"})}),
      poster("c", {post({"y"}, {"http://one.com/9", "http://two.org/8"})}),
      poster("d", {}),
  };
  const OverlapMatrix m = cross_account_overlap(profiles);
  REQUIRE(m.accounts.size() == 3);
  CHECK(m.pair(0, 1).url_overlap == 1.0);
  CHECK(m.pair(0, 1).text_similarity == 1.0);
  CHECK(m.pair(0, 2).url_overlap == 0.0);
  CHECK(m.pair(0, 2).domain_overlap == 1.0);
  CHECK(m.pair(0, 2).text_similarity == 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.pair(i, i).url_overlap == 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(m.pair(i, j).url_overlap == m.pair(j, i).url_overlap);
      CHECK(m.pair(i, j).text_similarity == m.pair(j, i).text_similarity);
    }
  }
  CHECK(m.pairs().size() == 3);
  CHECK(to_json(m)["pairs"].size() == 3);

  const std::vector<EncoderProfile> lonely = {profiles[0], profiles[3]};
  CHECK_THROWS_AS(cross_account_overlap(lonely), Error);
}

TEST_CASE("planted campaign stands out from background accounts") {
  GeneratorConfig cfg;
  cfg.n_benign = 200;
  cfg.n_malicious = 200;
  const SyntheticCorpus s = generate_synthetic(cfg, 11);
  std::vector<EncoderProfile> profiles;
  for (const auto& [id, p] : s.corpus.encoders)
    if (p.posts) profiles.push_back(p);
  const OverlapMatrix m = cross_account_overlap(profiles);
  const OverlapMatrix ms = serial::cross_account_overlap(profiles);
  CHECK(m.url == ms.url);
  CHECK(m.domain == ms.domain);
  CHECK(m.text == ms.text);

  auto in_campaign = [&](const std::string& id) {
    return std::find(s.campaign_accounts.begin(), s.campaign_accounts.end(), id) !=
           s.campaign_accounts.end();
  };
  int campaign_pairs = 0, background_pairs = 0;
  for (const PairOverlap& p : m.pairs()) {
    CAPTURE(p.a);
    CAPTURE(p.b);
    if (in_campaign(p.a) && in_campaign(p.b)) {
      ++campaign_pairs;
      CHECK(p.url_overlap > 0.8);
      CHECK(p.domain_overlap > 0.8);
      CHECK(p.text_similarity > 0.8);
    } else if (!in_campaign(p.a) && !in_campaign(p.b)) {
      ++background_pairs;
      CHECK(p.url_overlap < 0.2);
      CHECK(p.domain_overlap < 0.2);
      CHECK(p.text_similarity < 0.2);
    }
  }
  CHECK(campaign_pairs == 3);
  CHECK(background_pairs == 66);
}

TEST_CASE("top referrers") {
  ShortLinkRecord a = linkwatch::testing::make_link("a", "http://x.com/");
  a.referrers = {{"direct", 5}, {"t.co", 3}};
  ShortLinkRecord b = linkwatch::testing::make_link("b", "http://y.com/");
  b.referrers = {{"t.co", 2}, {"facebook.com", 5}};
  const std::vector<ShortLinkRecord> links = {a, b};
  const auto top = top_referrers(links, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].referrer == "direct");
  CHECK(top[0].clicks == 5);
  CHECK(top[1].referrer == "facebook.com");
  CHECK(top[0].share == 5.0 / 15.0);
}
