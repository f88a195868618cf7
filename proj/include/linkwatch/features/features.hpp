#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkwatch/core/types.hpp"
#include "linkwatch/labeling/labeling.hpp"

namespace linkwatch::features {

// FULL carries all seven features; NON_CLICK drops the two click-based ones.
enum class Schema { kFull, kNonClick };

const char* to_string(Schema schema);
Schema schema_from_string(std::string_view text);

// Column names, in vector order.
const std::vector<std::string>& feature_names(Schema schema);
std::size_t feature_count(Schema schema);

// std::nullopt is the MISSING marker.
struct FeatureVector {
  Schema schema = Schema::kFull;
  std::optional<double> domain_age_days;
  std::optional<double> creation_gap_days;
  int creation_hour = 0;
  int encoder_count = 1;
  double encoder_type_ratio = 0.0;
  std::optional<double> click_lag_days;         // FULL only
  std::optional<double> direct_referrer_ratio;  // FULL only, never MISSING

  std::vector<std::optional<double>> values() const;
  static FeatureVector from_values(Schema schema,
                                   std::span<const std::optional<double>> values);
  // The five shared fields under NON_CLICK.
  FeatureVector restricted_to_non_click() const;

  bool operator==(const FeatureVector&) const = default;
};

struct LabeledInstance {
  std::string link_id;
  FeatureVector features;
  labeling::Label label;
};

// expires_on - (created_on, else updated_on) in whole days. MISSING when
// either end is absent; a negative span is treated as corrupt WHOIS and is
// also MISSING (with `warning` set when provided).
std::optional<std::int64_t> domain_age(const WhoisRecord& whois,
                                       std::string* warning = nullptr);

// floor((link.created_at - created_on) / 1 day); negative values are kept.
std::optional<std::int64_t> creation_gap(const WhoisRecord& whois,
                                         const ShortLinkRecord& link);

int creation_hour(const ShortLinkRecord& link);

// Distinct account ids; every ANONYMOUS occurrence counts separately.
int encoder_count(const ShortLinkRecord& link);

double encoder_type_ratio(const ShortLinkRecord& link);

// floor((earliest click - created_at) / 1 day); MISSING without clicks.
std::optional<std::int64_t> click_lag(const ShortLinkRecord& link);

// DIRECT entries / referrer entries; 0 when there are none.
double direct_referrer_ratio(const ShortLinkRecord& link);

FeatureVector extract(const ShortLinkRecord& link,
                      const std::optional<WhoisRecord>& whois, Schema schema);
inline FeatureVector extract(const ShortLinkRecord& link, Schema schema) {
  return extract(link, link.whois, schema);
}

// Per-link extraction; OpenMP and serial versions give identical output.
std::vector<FeatureVector> extract_all(std::span<const ShortLinkRecord> links,
                                       Schema schema);
namespace serial {
std::vector<FeatureVector> extract_all(std::span<const ShortLinkRecord> links,
                                       Schema schema);
}

// CSV: link_id,schema,<feature columns>,label. MISSING is an empty cell.
std::string to_csv(std::span<const LabeledInstance> instances, Schema schema);
std::vector<LabeledInstance> from_csv(const std::string& text, Schema* schema_out = nullptr);

void write_csv(const std::filesystem::path& path,
               std::span<const LabeledInstance> instances, Schema schema);
std::vector<LabeledInstance> read_csv(const std::filesystem::path& path,
                                      Schema* schema_out = nullptr);

// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace linkwatch::features
