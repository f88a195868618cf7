#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "linkwatch/core/domain.hpp"
#include "linkwatch/core/time.hpp"
#include "linkwatch/core/types.hpp"

namespace linkwatch::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("linkwatch_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Timestamp ts(const char* text) { return parse_timestamp(text); }
inline Date day(const char* text) { return parse_date(text); }

inline ShortLinkRecord make_link(const std::string& hash, const std::string& url,
                                 const char* created = "2013-10-05T03:14:00Z") {
  ShortLinkRecord l;
  l.short_hash = hash;
  l.global_hash = "g" + hash;
  l.long_url = url;
  l.domain = registrable_domain(url);
  l.created_at = ts(created);
  l.encoders = {EncoderRef{"alice", EncoderKind::kRegular, std::nullopt}};
  return l;
}

inline HistoryEntry history_entry(const char* created, LinkStateKind state,
                                  std::int64_t clicks = 0) {
  HistoryEntry h;
  h.short_hash = std::string("h") + created;
  h.created_at = ts(created);
  h.click_count = clicks;
  h.state = LinkState{state, ts(created)};
  return h;
}

}  // namespace linkwatch::testing
