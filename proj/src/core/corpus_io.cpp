#include "linkwatch/core/corpus_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "linkwatch/core/error.hpp"

namespace linkwatch {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void field_error(const char* name, const std::string& what) {
  fail(ErrorKind::kSchemaViolation,
       std::string("field '") + name + "': " + what);
}

const json& field(const json& j, const char* name) {
  if (!j.is_object()) fail(ErrorKind::kSchemaViolation, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) field_error(name, "missing");
  return *it;
}

bool has(const json& j, const char* name) {
  auto it = j.find(name);
  return it != j.end() && !it->is_null();
}

std::string get_string(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) field_error(name, "expected a string");
  return v.get<std::string>();
}

std::int64_t get_int(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) field_error(name, "expected an integer");
  return v.get<std::int64_t>();
}

const json& get_array(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) field_error(name, "expected an array");
  return v;
}

Timestamp get_timestamp(const json& j, const char* name) {
  std::string text = get_string(j, name);
  try {
    return parse_timestamp(text);
  } catch (const Error& e) {
    field_error(name, e.what());
  }
}

std::optional<Date> get_opt_date(const json& j, const char* name) {
  if (!has(j, name)) return std::nullopt;
  std::string text = get_string(j, name);
  try {
    return parse_date(text);
  } catch (const Error& e) {
    field_error(name, e.what());
  }
}

void put_opt_date(ordered_json& j, const char* name,
                  const std::optional<Date>& d) {
  j[name] = d ? ordered_json(format_date(*d)) : ordered_json(nullptr);
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInputMissing, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

ordered_json to_json(const WhoisRecord& whois) {
  ordered_json j = ordered_json::object();
  put_opt_date(j, "created_on", whois.created_on);
  put_opt_date(j, "updated_on", whois.updated_on);
  put_opt_date(j, "expires_on", whois.expires_on);
  return j;
}

WhoisRecord whois_from_json(const json& j) {
  WhoisRecord w;
  w.created_on = get_opt_date(j, "created_on");
  w.updated_on = get_opt_date(j, "updated_on");
  w.expires_on = get_opt_date(j, "expires_on");
  return w;
}

ordered_json to_json(const ShortLinkRecord& link) {
  ordered_json j;
  j["short_hash"] = link.short_hash;
  j["global_hash"] = link.global_hash;
  j["long_url"] = link.long_url;
  j["domain"] = link.domain;
  j["created_at"] = format_timestamp(link.created_at);
  ordered_json encoders = ordered_json::array();
  for (const EncoderRef& e : link.encoders) {
    ordered_json ej;
    ej["account_id"] = e.account_id;
    ej["kind"] = to_string(e.kind);
    if (e.application_name) ej["application_name"] = *e.application_name;
    encoders.push_back(std::move(ej));
  }
  j["encoders"] = std::move(encoders);
  ordered_json clicks = ordered_json::array();
  for (const ClickEvent& c : link.clicks) {
    clicks.push_back({{"at", format_timestamp(c.at)}, {"count", c.count}});
  }
  j["clicks"] = std::move(clicks);
  ordered_json referrers = ordered_json::array();
  for (const ReferrerStat& r : link.referrers) {
    referrers.push_back({{"referrer", r.referrer}, {"clicks", r.clicks}});
  }
  j["referrers"] = std::move(referrers);
  j["warning_count"] = link.warning_count;
  return j;
}

ShortLinkRecord link_from_json(const json& j) {
  ShortLinkRecord link;
  link.short_hash = get_string(j, "short_hash");
  link.global_hash = get_string(j, "global_hash");
  link.long_url = get_string(j, "long_url");
  link.domain = get_string(j, "domain");
  link.created_at = get_timestamp(j, "created_at");
  for (const json& ej : get_array(j, "encoders")) {
    EncoderRef e;
    e.account_id = get_string(ej, "account_id");
    e.kind = encoder_kind_from_string(get_string(ej, "kind"));
    if (has(ej, "application_name"))
      e.application_name = get_string(ej, "application_name");
    link.encoders.push_back(std::move(e));
  }
  for (const json& cj : get_array(j, "clicks")) {
    link.clicks.push_back({get_timestamp(cj, "at"), get_int(cj, "count")});
  }
  for (const json& rj : get_array(j, "referrers")) {
    link.referrers.push_back({get_string(rj, "referrer"), get_int(rj, "clicks")});
  }
  link.warning_count = has(j, "warning_count") ? get_int(j, "warning_count") : 0;
  return link;
}

ordered_json to_json(const EncoderProfile& profile) {
  ordered_json j;
  j["account_id"] = profile.account_id;
  j["profile_created_at"] =
      profile.profile_created_at
          ? ordered_json(format_timestamp(*profile.profile_created_at))
          : ordered_json(nullptr);
  ordered_json connected = ordered_json::array();
  for (const ConnectedAccount& c : profile.connected_accounts) {
    connected.push_back({{"network", c.network}, {"handle", c.handle}});
  }
  j["connected_accounts"] = std::move(connected);
  ordered_json history = ordered_json::array();
  for (const HistoryEntry& h : profile.history) {
    ordered_json hj;
    hj["short_hash"] = h.short_hash;
    hj["created_at"] = format_timestamp(h.created_at);
    hj["click_count"] = h.click_count;
    hj["state"] = to_string(h.state.state);
    hj["observed_at"] = format_timestamp(h.state.observed_at);
    history.push_back(std::move(hj));
  }
  j["history"] = std::move(history);
  if (profile.posts) {
    ordered_json posts = ordered_json::array();
    for (const Post& p : *profile.posts) {
      ordered_json pj;
      pj["text_tokens"] = p.text_tokens;
      pj["urls"] = p.urls;
      pj["at"] = format_timestamp(p.at);
      posts.push_back(std::move(pj));
    }
    j["posts"] = std::move(posts);
  } else {
    j["posts"] = nullptr;
  }
  return j;
}

EncoderProfile profile_from_json(const json& j) {
  EncoderProfile p;
  p.account_id = get_string(j, "account_id");
  if (has(j, "profile_created_at"))
    p.profile_created_at = get_timestamp(j, "profile_created_at");
  if (has(j, "connected_accounts")) {
    for (const json& cj : get_array(j, "connected_accounts")) {
      p.connected_accounts.push_back(
          {get_string(cj, "network"), get_string(cj, "handle")});
    }
  }
  for (const json& hj : get_array(j, "history")) {
    HistoryEntry h;
    h.short_hash = get_string(hj, "short_hash");
    h.created_at = get_timestamp(hj, "created_at");
    h.click_count = get_int(hj, "click_count");
    h.state.state = link_state_from_string(get_string(hj, "state"));
    h.state.observed_at = has(hj, "observed_at")
                              ? get_timestamp(hj, "observed_at")
                              : h.created_at;
    p.history.push_back(std::move(h));
  }
  if (has(j, "posts")) {
    std::vector<Post> posts;
    for (const json& pj : get_array(j, "posts")) {
      Post post;
      for (const json& t : get_array(pj, "text_tokens")) {
        if (!t.is_string()) field_error("text_tokens", "expected strings");
        post.text_tokens.push_back(t.get<std::string>());
      }
      for (const json& u : get_array(pj, "urls")) {
        if (!u.is_string()) field_error("urls", "expected strings");
        post.urls.push_back(u.get<std::string>());
      }
      post.at = get_timestamp(pj, "at");
      posts.push_back(std::move(post));
    }
    p.posts = std::move(posts);
  }
  return p;
}

LoadedCorpus load_corpus_dir(const fs::path& dir) {
  if (!fs::is_directory(dir))
    fail(ErrorKind::kInputMissing, "corpus directory not found: " + dir.string());
  const fs::path links_path = dir / "links.jsonl";
  if (!fs::exists(links_path))
    fail(ErrorKind::kInputMissing, "missing " + links_path.string());

  LoadedCorpus out;
  const fs::path manifest_path = dir / "MANIFEST.json";
  if (fs::exists(manifest_path)) {
    json m;
    try {
      m = json::parse(read_text_file(manifest_path));
    } catch (const json::exception& e) {
      fail(ErrorKind::kSchemaViolation,
           "MANIFEST.json: malformed JSON: " + std::string(e.what()));
    }
    try {
      out.manifest.schema_version = static_cast<int>(get_int(m, "schema_version"));
      if (has(m, "anonymous_tokens")) {
        out.manifest.anonymous_tokens.clear();
        for (const json& t : get_array(m, "anonymous_tokens"))
          out.manifest.anonymous_tokens.insert(t.get<std::string>());
      }
      if (has(m, "generator")) {
        const json& g = field(m, "generator");
        out.manifest.generator_seed = field(g, "seed").get<std::uint64_t>();
        out.manifest.generator_config =
            ordered_json::parse(field(g, "config").dump());
      }
    } catch (const Error& e) {
      fail(e.kind(), "MANIFEST.json: " + std::string(e.what()));
    }
    if (out.manifest.schema_version != kCorpusSchemaVersion)
      fail(ErrorKind::kSchemaViolation,
           "MANIFEST.json: unsupported schema_version " +
               std::to_string(out.manifest.schema_version));
  }

  std::map<std::string, WhoisRecord> whois;
  if (fs::path p = dir / "whois.jsonl"; fs::exists(p)) {
    for_each_jsonl(p, [&](const json& j, std::size_t) {
      whois[get_string(j, "domain")] = whois_from_json(j);
    });
  }
  if (fs::path p = dir / "encoders.jsonl"; fs::exists(p)) {
    for_each_jsonl(p, [&](const json& j, std::size_t) {
      EncoderProfile profile = profile_from_json(j);
      validate_profile(profile);
      std::string id = profile.account_id;
      out.corpus.encoders[id] = std::move(profile);
    });
  }
  for_each_jsonl(links_path, [&](const json& j, std::size_t) {
    ShortLinkRecord link = link_from_json(j);
    if (auto it = whois.find(link.domain); it != whois.end())
      link.whois = it->second;
    validate_link(link, out.manifest.anonymous_tokens);
    out.corpus.links.push_back(std::move(link));
  });
  validate_corpus(out.corpus, out.manifest.anonymous_tokens);
  return out;
}

Corpus load_corpus(const fs::path& dir) { return load_corpus_dir(dir).corpus; }

void save_corpus(const Corpus& corpus, const fs::path& dir,
                 const CorpusManifest& manifest) {
  validate_corpus(corpus, manifest.anonymous_tokens);
  // Domain -> WHOIS must be a function over the links.
  std::map<std::string, std::optional<WhoisRecord>> whois;
  for (const ShortLinkRecord& link : corpus.links) {
    auto [it, inserted] = whois.emplace(link.domain, link.whois);
    if (!inserted && it->second != link.whois)
      fail(ErrorKind::kInvariantViolation,
           "links on domain '" + link.domain + "' disagree on WHOIS");
  }
  fs::create_directories(dir);

  std::string links_text;
  for (const ShortLinkRecord& link : corpus.links) {
    links_text += to_json(link).dump() + "\n";
  }
  write_text_file(dir / "links.jsonl", links_text);

  std::string whois_text;
  for (const auto& [domain, record] : whois) {
    if (!record) continue;
    ordered_json j;
    j["domain"] = domain;
    const ordered_json fields = to_json(*record);
    for (const auto& [k, v] : fields.items()) j[k] = v;
    whois_text += j.dump() + "\n";
  }
  write_text_file(dir / "whois.jsonl", whois_text);

  std::string encoders_text;
  for (const auto& [id, profile] : corpus.encoders) {
    encoders_text += to_json(profile).dump() + "\n";
  }
  write_text_file(dir / "encoders.jsonl", encoders_text);

  ordered_json m;
  m["schema_version"] = manifest.schema_version;
  m["anonymous_tokens"] = manifest.anonymous_tokens;
  if (manifest.generator_seed) {
    m["generator"] = {{"seed", *manifest.generator_seed},
                      {"config", manifest.generator_config.value_or(
                                     ordered_json::object())}};
  }
  write_text_file(dir / "MANIFEST.json", m.dump(2) + "\n");
}

std::map<std::string, bool> load_truth(const fs::path& dir) {
  std::map<std::string, bool> truth;
  const fs::path p = dir / "truth.jsonl";
  if (!fs::exists(p)) fail(ErrorKind::kInputMissing, "missing " + p.string());
  for_each_jsonl(p, [&](const json& j, std::size_t) {
    const json& v = field(j, "malicious");
    if (!v.is_boolean()) field_error("malicious", "expected a boolean");
    truth[get_string(j, "short_hash")] = v.get<bool>();
  });
  return truth;
}

void save_truth(const std::map<std::string, bool>& truth, const fs::path& dir) {
  std::string text;
  for (const auto& [hash, malicious] : truth) {
    ordered_json j;
    j["short_hash"] = hash;
    j["malicious"] = malicious;
    text += j.dump() + "\n";
  }
  write_text_file(dir / "truth.jsonl", text);
}

}  // namespace linkwatch
