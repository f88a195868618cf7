#include "linkwatch/core/domain.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include <unicode/uidna.h>

#include "linkwatch/core/error.hpp"

namespace linkwatch {

namespace detail {
extern const std::string_view kEmbeddedPublicSuffixList;
extern const std::string_view kEmbeddedPublicSuffixListVersion;
}  // namespace detail

namespace {

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Offsets of each label start, leftmost first.
std::vector<std::size_t> label_starts(std::string_view host) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < host.size(); ++i) {
    if (host[i] == '.') starts.push_back(i + 1);
  }
  return starts;
}

// ACE ("xn--") spelling of an internationalized rule; hosts arrive in that form.
std::string to_ascii_rule(const std::string& rule) {
  if (std::all_of(rule.begin(), rule.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; }))
    return rule;
  UErrorCode status = U_ZERO_ERROR;
  static UIDNA* idna = uidna_openUTS46(UIDNA_DEFAULT, &status);
  if (idna == nullptr) return rule;
  char buf[256];
  UIDNAInfo info = UIDNA_INFO_INITIALIZER;
  status = U_ZERO_ERROR;
  const int32_t n = uidna_nameToASCII_UTF8(idna, rule.data(), static_cast<int32_t>(rule.size()), buf,
                                           sizeof(buf), &info, &status);
  if (U_FAILURE(status) || info.errors != 0 || n <= 0 || n >= static_cast<int32_t>(sizeof(buf))) return rule;
  return std::string(buf, static_cast<std::size_t>(n));
}

[[noreturn]] void bad_url(std::string_view url, std::string_view why) {
  fail(ErrorKind::kInvalidArgument,
       "unparseable URL '" + std::string(url) + "': " + std::string(why));
}

}  // namespace

PublicSuffixList PublicSuffixList::parse(std::string_view list_text) {
  PublicSuffixList list;
  std::size_t pos = 0;
  while (pos <= list_text.size()) {
    std::size_t eol = list_text.find('\n', pos);
    if (eol == std::string_view::npos) eol = list_text.size();
    std::string_view line = trim(list_text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.starts_with("//")) continue;
    // Only the first whitespace-delimited token is the rule.
    auto ws = std::find_if(line.begin(), line.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c));
    });
    line = line.substr(0, static_cast<std::size_t>(ws - line.begin()));
    if (line.starts_with("!")) {
      list.exceptions_.insert(to_ascii_rule(to_lower_ascii(line.substr(1))));
    } else if (line.starts_with("*.")) {
      list.wildcards_.insert(to_ascii_rule(to_lower_ascii(line.substr(2))));
    } else {
      list.rules_.insert(to_ascii_rule(to_lower_ascii(line)));
    }
  }
  return list;
}

const PublicSuffixList& PublicSuffixList::bundled() {
  static const PublicSuffixList list = parse(detail::kEmbeddedPublicSuffixList);
  return list;
}

std::string_view PublicSuffixList::bundled_version() {
  return detail::kEmbeddedPublicSuffixListVersion;
}

std::size_t PublicSuffixList::suffix_start_label(std::string_view host) const {
  const std::vector<std::size_t> starts = label_starts(host);
  const std::size_t n = starts.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (exceptions_.count(std::string(host.substr(starts[i])))) return i + 1;
  }
  // Leftmost match covers the most labels.
  for (std::size_t i = 0; i < n; ++i) {
    if (rules_.count(std::string(host.substr(starts[i])))) return i;
    if (i + 1 < n && wildcards_.count(std::string(host.substr(starts[i + 1]))))
      return i;
  }
  return n - 1;
}

std::string PublicSuffixList::public_suffix(std::string_view host) const {
  const std::vector<std::size_t> starts = label_starts(host);
  std::size_t label = suffix_start_label(host);
  if (label >= starts.size()) return std::string(host);
  return std::string(host.substr(starts[label]));
}

std::string PublicSuffixList::registrable(std::string_view host) const {
  const std::vector<std::size_t> starts = label_starts(host);
  std::size_t label = suffix_start_label(host);
  if (label == 0 || label > starts.size()) return std::string(host);
  return std::string(host.substr(starts[label - 1]));
}

std::string url_host(std::string_view url) {
  url = trim(url);
  std::size_t sep = url.find("://");
  if (sep == std::string_view::npos || sep == 0) bad_url(url, "missing scheme");
  if (!std::isalpha(static_cast<unsigned char>(url[0])))
    bad_url(url, "bad scheme");
  for (std::size_t i = 1; i < sep; ++i) {
    char c = url[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      bad_url(url, "bad scheme");
  }
  std::string_view rest = url.substr(sep + 3);
  std::size_t end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, end);
  if (std::size_t at = authority.rfind('@'); at != std::string_view::npos)
    authority.remove_prefix(at + 1);
  if (authority.starts_with("[")) bad_url(url, "IP literal hosts unsupported");
  if (std::size_t colon = authority.find(':'); colon != std::string_view::npos) {
    std::string_view port = authority.substr(colon + 1);
    for (char c : port) {
      if (!std::isdigit(static_cast<unsigned char>(c))) bad_url(url, "bad port");
    }
    authority = authority.substr(0, colon);
  }
  while (authority.ends_with(".")) authority.remove_suffix(1);
  if (authority.empty()) bad_url(url, "empty host");
  std::string host = to_lower_ascii(authority);
  std::size_t label_len = 0;
  for (char c : host) {
    unsigned char u = static_cast<unsigned char>(c);
    if (c == '.') {
      if (label_len == 0) bad_url(url, "empty label");
      label_len = 0;
      continue;
    }
    if (!(std::isalnum(u) || c == '-' || c == '_' || u >= 0x80))
      bad_url(url, "invalid host character");
    ++label_len;
  }
  return host;
}

std::string registrable_domain(std::string_view url) {
  std::string host = url_host(url);
  bool dotted_quad = std::count(host.begin(), host.end(), '.') == 3 &&
                     std::all_of(host.begin(), host.end(), [](char c) {
                       return c == '.' || (c >= '0' && c <= '9');
                     });
  if (dotted_quad) return host;
  return PublicSuffixList::bundled().registrable(host);
}

}  // namespace linkwatch
