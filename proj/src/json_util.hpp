#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "patmine/diagnostics.hpp"

namespace patmine::detail {

using Json = nlohmann::ordered_json;

inline std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw IoError("cannot read file: " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& file,
                            const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write file: " + file.string());
  }
  out << content;
  if (!out) {
    throw IoError("write failed: " + file.string());
  }
}

inline Json parse_json_file(const std::filesystem::path& file) {
  const std::string text = read_text_file(file);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

inline const Json& require_field(const Json& j, const char* key,
                                 const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(where + ": missing required field '" + key + "'");
  }
  return *it;
}

inline std::string require_string(const Json& j, const char* key,
                                  const std::string& where) {
  const Json& v = require_field(j, key, where);
  if (!v.is_string()) {
    throw ParseError(where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

inline std::string optional_string(const Json& j, const char* key,
                                   const std::string& fallback = "") {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_string()) return fallback;
  return it->get<std::string>();
}

inline std::vector<std::string> string_list(const Json& j, const char* key,
                                            const std::string& where) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw ParseError(where + ": field '" + key + "' must be an array of strings");
  }
  for (const Json& v : *it) {
    if (!v.is_string()) {
      throw ParseError(where + ": field '" + key + "' must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace patmine::detail
