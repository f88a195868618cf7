#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "json.hpp"
#include "linkwatch/core/types.hpp"

namespace linkwatch {

inline constexpr int kCorpusSchemaVersion = 1;

struct CorpusManifest {
  int schema_version = kCorpusSchemaVersion;
  std::set<std::string, std::less<>> anonymous_tokens =
      default_anonymous_tokens();
  // Present for generated corpora.
  std::optional<std::uint64_t> generator_seed;
  std::optional<nlohmann::ordered_json> generator_config;
};

struct LoadedCorpus {
  Corpus corpus;
  CorpusManifest manifest;
};

// Reads links.jsonl, whois.jsonl, encoders.jsonl and MANIFEST.json from
// `dir`. Only links.jsonl is mandatory. Errors carry file, line and field.
LoadedCorpus load_corpus_dir(const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

// Writes the same layout. WHOIS records are stored once per domain, so
// links sharing a domain must agree on them.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir,
                 const CorpusManifest& manifest = {});

// Ground-truth sidecar (short_hash -> malicious).
std::map<std::string, bool> load_truth(const std::filesystem::path& dir);
void save_truth(const std::map<std::string, bool>& truth,
                const std::filesystem::path& dir);

// Record codecs, exposed for fixtures and tests.
nlohmann::ordered_json to_json(const ShortLinkRecord& link);
ShortLinkRecord link_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const WhoisRecord& whois);
WhoisRecord whois_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const EncoderProfile& profile);
EncoderProfile profile_from_json(const nlohmann::json& j);

// Line-oriented helpers shared by the other file formats.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// Calls `fn(json, line_number)` for every non-blank line; wraps
// parse/field errors with "<file>:<line>".
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn);

}  // namespace linkwatch

#include "linkwatch/core/jsonl_inl.hpp"
