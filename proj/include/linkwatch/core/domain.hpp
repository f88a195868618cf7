#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

namespace linkwatch {

// Public-suffix rule set in the publicsuffix.org list format: plain rules,
// "*." wildcard rules and "!" exception rules, "//" comments.
class PublicSuffixList {
 public:
  static PublicSuffixList parse(std::string_view list_text);

  // The snapshot compiled into the library.
  static const PublicSuffixList& bundled();
  static std::string_view bundled_version();

  // Public suffix of a lowercase host. Unlisted TLDs fall back to the
  // implicit "*" rule.
  std::string public_suffix(std::string_view host) const;

  // Suffix plus one label. A host that is itself a public suffix is
  // returned unchanged.
  std::string registrable(std::string_view host) const;

  std::size_t rule_count() const {
    return rules_.size() + wildcards_.size() + exceptions_.size();
  }

 private:
  std::size_t suffix_start_label(std::string_view host) const;

  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcards_;   // stored without "*."
  std::unordered_set<std::string> exceptions_;  // stored without "!"
};

// Lowercased host of an absolute URL ("scheme://[userinfo@]host[:port]...").
// Throws Error(kInvalidArgument) for anything that does not parse.
std::string url_host(std::string_view url);

// Lowercase registrable domain of an absolute URL using the bundled list.
std::string registrable_domain(std::string_view url);

}  // namespace linkwatch
