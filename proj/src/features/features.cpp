#include "linkwatch/features/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "linkwatch/core/corpus_io.hpp"
#include "linkwatch/core/error.hpp"

namespace linkwatch::features {

namespace {

const std::vector<std::string> kFullNames = {
    "domain_age",         "creation_gap", "creation_hour", "encoder_count",
    "encoder_type_ratio", "click_lag",    "direct_ratio"};
const std::vector<std::string> kNonClickNames(kFullNames.begin(), kFullNames.begin() + 5);

std::optional<double> as_double(std::optional<std::int64_t> v) {
  if (!v) return std::nullopt;
  return static_cast<double>(*v);
}

}  // namespace

const char* to_string(Schema schema) {
  return schema == Schema::kFull ? "FULL" : "NON_CLICK";
}

Schema schema_from_string(std::string_view text) {
  if (text == "FULL") return Schema::kFull;
  if (text == "NON_CLICK") return Schema::kNonClick;
  fail(ErrorKind::kInvalidArgument, "unknown feature schema '" + std::string(text) + "'");
}

const std::vector<std::string>& feature_names(Schema schema) {
  return schema == Schema::kFull ? kFullNames : kNonClickNames;
}

std::size_t feature_count(Schema schema) { return feature_names(schema).size(); }

std::vector<std::optional<double>> FeatureVector::values() const {
  std::vector<std::optional<double>> v{domain_age_days, creation_gap_days,
                                       static_cast<double>(creation_hour),
                                       static_cast<double>(encoder_count),
                                       encoder_type_ratio};
  if (schema == Schema::kFull) {
    v.push_back(click_lag_days);
    v.push_back(direct_referrer_ratio);
  }
  return v;
}

FeatureVector FeatureVector::from_values(Schema schema,
                                         std::span<const std::optional<double>> v) {
  if (v.size() != feature_count(schema))
    fail(ErrorKind::kSchemaMismatch, std::string("expected ") +
                                         std::to_string(feature_count(schema)) +
                                         " values for schema " + to_string(schema));
  auto required = [&](std::size_t i) {
    if (!v[i])
      fail(ErrorKind::kSchemaViolation,
           "feature '" + feature_names(schema)[i] + "' cannot be MISSING");
    return *v[i];
  };
  FeatureVector fv;
  fv.schema = schema;
  fv.domain_age_days = v[0];
  fv.creation_gap_days = v[1];
  fv.creation_hour = static_cast<int>(required(2));
  fv.encoder_count = static_cast<int>(required(3));
  fv.encoder_type_ratio = required(4);
  if (schema == Schema::kFull) {
    fv.click_lag_days = v[5];
    fv.direct_referrer_ratio = required(6);
  }
  if (fv.creation_hour < 0 || fv.creation_hour > 23)
    fail(ErrorKind::kInvariantViolation, "creation_hour outside [0, 23]");
  if (fv.encoder_count < 1) fail(ErrorKind::kInvariantViolation, "encoder_count < 1");
  auto ratio_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!ratio_ok(fv.encoder_type_ratio) ||
      (fv.direct_referrer_ratio && !ratio_ok(*fv.direct_referrer_ratio)))
    fail(ErrorKind::kInvariantViolation, "ratio outside [0, 1]");
  return fv;
}

FeatureVector FeatureVector::restricted_to_non_click() const {
  FeatureVector out = *this;
  out.schema = Schema::kNonClick;
  out.click_lag_days.reset();
  out.direct_referrer_ratio.reset();
  return out;
}

std::optional<std::int64_t> domain_age(const WhoisRecord& whois, std::string* warning) {
  const std::optional<Date>& start = whois.created_on ? whois.created_on : whois.updated_on;
  if (!start || !whois.expires_on) return std::nullopt;
  std::int64_t age = (*whois.expires_on - *start).count();
  if (age < 0) {
    if (warning) *warning = "corrupt WHOIS: expiry precedes creation";
    return std::nullopt;
  }
  return age;
}

std::optional<std::int64_t> creation_gap(const WhoisRecord& whois,
                                         const ShortLinkRecord& link) {
  if (!whois.created_on) return std::nullopt;
  return floor_days(link.created_at - Timestamp{*whois.created_on});
}

int creation_hour(const ShortLinkRecord& link) { return utc_hour(link.created_at); }

int encoder_count(const ShortLinkRecord& link) {
  std::set<std::string_view> named;
  int anonymous = 0;
  for (const EncoderRef& e : link.encoders) {
    if (e.kind == EncoderKind::kAnonymous) ++anonymous;
    else named.insert(e.account_id);
  }
  return anonymous + static_cast<int>(named.size());
}

double encoder_type_ratio(const ShortLinkRecord& link) {
  if (link.encoders.empty()) return 0.0;
  auto flagged = std::count_if(link.encoders.begin(), link.encoders.end(),
                               [](const EncoderRef& e) { return e.kind != EncoderKind::kRegular; });
  return static_cast<double>(flagged) / static_cast<double>(link.encoders.size());
}

std::optional<std::int64_t> click_lag(const ShortLinkRecord& link) {
  if (link.clicks.empty()) return std::nullopt;
  auto first = std::min_element(link.clicks.begin(), link.clicks.end(),
                                [](const ClickEvent& a, const ClickEvent& b) { return a.at < b.at; });
  return floor_days(first->at - link.created_at);
}

double direct_referrer_ratio(const ShortLinkRecord& link) {
  if (link.referrers.empty()) return 0.0;
  auto direct = std::count_if(link.referrers.begin(), link.referrers.end(),
                              [](const ReferrerStat& r) { return r.is_direct(); });
  return static_cast<double>(direct) / static_cast<double>(link.referrers.size());
}

FeatureVector extract(const ShortLinkRecord& link, const std::optional<WhoisRecord>& whois,
                      Schema schema) {
  FeatureVector fv;
  fv.schema = schema;
  if (whois) {
    fv.domain_age_days = as_double(domain_age(*whois));
    fv.creation_gap_days = as_double(creation_gap(*whois, link));
  }
  fv.creation_hour = creation_hour(link);
  fv.encoder_count = encoder_count(link);
  fv.encoder_type_ratio = encoder_type_ratio(link);
  if (schema == Schema::kFull) {
    fv.click_lag_days = as_double(click_lag(link));
    fv.direct_referrer_ratio = direct_referrer_ratio(link);
  }
  return fv;
}

std::vector<FeatureVector> extract_all(std::span<const ShortLinkRecord> links, Schema schema) {
  std::vector<FeatureVector> out(links.size());
  const auto n = static_cast<std::int64_t>(links.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    auto u = static_cast<std::size_t>(i);
    out[u] = extract(links[u], schema);
  }
  return out;
}

namespace serial {
std::vector<FeatureVector> extract_all(std::span<const ShortLinkRecord> links, Schema schema) {
  std::vector<FeatureVector> out;
  out.reserve(links.size());
  for (const ShortLinkRecord& link : links) out.push_back(extract(link, schema));
  return out;
}
}  // namespace serial

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string header_for(Schema schema) {
  std::string h = "link_id,schema";
  for (const std::string& n : feature_names(schema)) h += "," + n;
  return h + ",label";
}

}  // namespace

std::string to_csv(std::span<const LabeledInstance> instances, Schema schema) {
  std::string out = header_for(schema) + "\n";
  for (const LabeledInstance& inst : instances) {
    if (inst.features.schema != schema)
      fail(ErrorKind::kSchemaMismatch, "instance '" + inst.link_id + "' has schema " +
                                           to_string(inst.features.schema));
    out += csv_field(inst.link_id);
    out += ",";
    out += to_string(schema);
    for (const std::optional<double>& v : inst.features.values()) {
      out += ",";
      if (v) out += format_number(*v);
    }
    out += ",";
    out += labeling::to_string(inst.label.value);
    out += "\n";
  }
  return out;
}

std::vector<LabeledInstance> from_csv(const std::string& text, Schema* schema_out) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::kSchemaViolation, "features CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Schema schema;
  if (line == header_for(Schema::kFull)) schema = Schema::kFull;
  else if (line == header_for(Schema::kNonClick)) schema = Schema::kNonClick;
  else fail(ErrorKind::kSchemaViolation, "features CSV: unrecognized header '" + line + "'");
  if (schema_out) *schema_out = schema;

  const std::size_t n_features = feature_count(schema);
  std::vector<LabeledInstance> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = "features CSV line " + std::to_string(line_no) + ": ";
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != n_features + 3)
      fail(ErrorKind::kSchemaViolation, where + "expected " + std::to_string(n_features + 3) +
                                            " cells, got " + std::to_string(cells.size()));
    if (cells[1] != to_string(schema))
      fail(ErrorKind::kSchemaMismatch, where + "row schema '" + cells[1] + "' differs from header");
    std::vector<std::optional<double>> values;
    for (std::size_t k = 0; k < n_features; ++k) {
      const std::string& c = cells[2 + k];
      if (c.empty()) {
        values.emplace_back();
        continue;
      }
      double v = 0;
      auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size() || !std::isfinite(v))
        fail(ErrorKind::kSchemaViolation, where + "bad number '" + c + "'");
      values.emplace_back(v);
    }
    LabeledInstance inst;
    inst.link_id = cells[0];
    try {
      inst.features = FeatureVector::from_values(schema, values);
      inst.label.value = labeling::label_value_from_string(cells.back());
    } catch (const Error& e) {
      fail(e.kind(), where + e.what());
    }
    inst.label.sources = {inst.label.malicious() ? "recorded" : std::string(labeling::kNoSource)};
    out.push_back(std::move(inst));
  }
  return out;
}

void write_csv(const std::filesystem::path& path, std::span<const LabeledInstance> instances,
               Schema schema) {
  write_text_file(path, to_csv(instances, schema));
}

std::vector<LabeledInstance> read_csv(const std::filesystem::path& path, Schema* schema_out) {
  return from_csv(read_text_file(path), schema_out);
}

}  // namespace linkwatch::features
