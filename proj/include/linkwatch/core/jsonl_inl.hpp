#pragma once

#include <sstream>

#include "linkwatch/core/error.hpp"

namespace linkwatch {

template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.filename().string() + ":" +
                              std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kSchemaViolation, where + ": malformed JSON: " + e.what());
    }
    try {
      fn(j, line_no);
    } catch (const Error& e) {
      fail(e.kind(), where + ": " + e.what());
    }
  }
}

}  // namespace linkwatch
