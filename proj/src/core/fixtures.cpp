#include "linkwatch/core/fixtures.hpp"

#include <algorithm>
#include <sstream>

#include "linkwatch/core/corpus_io.hpp"
#include "linkwatch/core/error.hpp"

namespace linkwatch {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Strips comments ('#' at line start or after whitespace) and surrounding
// blanks, then splits on whitespace.
std::vector<std::string> fields_of(const std::string& raw) {
  std::string line = raw;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      line.resize(i);
      break;
    }
  }
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

}  // namespace

ordered_json to_json(const ProbeResponse& r) {
  ordered_json j;
  if (r.transport_error) {
    j["error"] = *r.transport_error;
    return j;
  }
  j["status"] = r.status;
  j["final_url"] = r.final_url;
  j["chain"] = r.chain;
  return j;
}

ProbeResponse probe_response_from_json(const json& j) {
  ProbeResponse r;
  if (auto it = j.find("error"); it != j.end() && !it->is_null()) {
    r.transport_error = it->get<std::string>();
    return r;
  }
  try {
    r.status = j.at("status").get<int>();
    r.final_url = j.value("final_url", std::string());
    if (j.contains("chain")) r.chain = j.at("chain").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kSchemaViolation, std::string("probe response: ") + e.what());
  }
  return r;
}

std::vector<BlacklistEntry> parse_blacklist(const std::string& text) {
  std::vector<BlacklistEntry> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f = fields_of(line);
    if (f.empty()) continue;
    BlacklistEntry e{f[0], std::nullopt};
    if (f.size() > 1) e.category = f[1];
    out.push_back(std::move(e));
  }
  return out;
}

std::set<std::string> parse_domain_list(const std::string& text) {
  std::set<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f = fields_of(line);
    if (!f.empty()) out.insert(f[0]);
  }
  return out;
}

FixtureSet load_fixtures(const fs::path& dir) {
  if (!fs::is_directory(dir))
    fail(ErrorKind::kInputMissing, "fixtures directory not found: " + dir.string());
  FixtureSet fx;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    const std::string name = p.filename().string();
    if (name.starts_with("blacklist_") && name.ends_with(".txt")) {
      std::string provider = name.substr(10, name.size() - 14);
      fx.blacklists[provider] = parse_blacklist(read_text_file(p));
    }
  }
  if (fs::path p = dir / "probes.jsonl"; fs::exists(p)) {
    for_each_jsonl(p, [&](const json& j, std::size_t) {
      auto it = j.find("url");
      if (it == j.end() || !it->is_string())
        fail(ErrorKind::kSchemaViolation, "field 'url': missing");
      fx.probes[it->get<std::string>()] = probe_response_from_json(j);
    });
  }
  if (fs::path p = dir / "whitelist.txt"; fs::exists(p))
    fx.whitelist = parse_domain_list(read_text_file(p));
  return fx;
}

void save_fixtures(const FixtureSet& fx, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [provider, entries] : fx.blacklists) {
    std::string text = "# " + provider + " deny list\n";
    for (const BlacklistEntry& e : entries) {
      text += e.value;
      if (e.category) text += " " + *e.category;
      text += "\n";
    }
    write_text_file(dir / ("blacklist_" + provider + ".txt"), text);
  }
  std::string probes;
  for (const auto& [url, response] : fx.probes) {
    ordered_json j;
    j["url"] = url;
    const ordered_json fields = to_json(response);
    for (const auto& [k, v] : fields.items()) j[k] = v;
    probes += j.dump() + "\n";
  }
  write_text_file(dir / "probes.jsonl", probes);
  std::string whitelist = "# legitimate domains\n";
  for (const std::string& d : fx.whitelist) whitelist += d + "\n";
  write_text_file(dir / "whitelist.txt", whitelist);
}

}  // namespace linkwatch
