#pragma once

// Set files. Two formats are accepted:
//   text: one integer per line, blank lines ignored, '#' starts a comment;
//   JSON: {"name": "...", "elements": [ ... ]}.
// save_set writes the canonical JSON form.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sumfree/core.hpp"

namespace sumfree {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Error::Kind::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Error::Kind::kIo, "cannot write '" + path + "'");
  out << content;
}

namespace detail {

inline IntegerSet validated(std::vector<std::int64_t> v, std::vector<std::string> where, std::string name) {
  if (v.empty()) fail(Error::Kind::kParse, "empty set rejected");
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) fail(Error::Kind::kParse, where[i] + ": zero element");
  }
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (v[order[i]] == v[order[i - 1]])
      fail(Error::Kind::kParse, where[order[i]] + ": duplicate element " + std::to_string(v[order[i]]));
  }
  return IntegerSet(std::move(v), std::move(name));
}

}  // namespace detail

inline IntegerSet parse_set_text(const std::string& text, std::string name = {}) {
  std::vector<std::int64_t> v;
  std::vector<std::string> where;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string tok = line.substr(b, e - b + 1);
    std::size_t used = 0;
    long long x = 0;
    try {
      x = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty())
      fail(Error::Kind::kParse, "line " + std::to_string(lineno) + ": not an integer: '" + tok + "'");
    v.push_back(x);
    where.push_back("line " + std::to_string(lineno));
  }
  return detail::validated(std::move(v), std::move(where), std::move(name));
}

inline IntegerSet parse_set_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(Error::Kind::kParse, "JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
    fail(Error::Kind::kParse, "JSON set needs an \"elements\" array");
  std::vector<std::int64_t> v;
  std::vector<std::string> where;
  for (std::size_t i = 0; i < j["elements"].size(); ++i) {
    const auto& e = j["elements"][i];
    if (!e.is_number_integer()) fail(Error::Kind::kParse, "elements[" + std::to_string(i) + "]: not an integer");
    v.push_back(e.get<std::int64_t>());
    where.push_back("elements[" + std::to_string(i) + "]");
  }
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : std::string{};
  return detail::validated(std::move(v), std::move(where), std::move(name));
}

/// JSON if the first non-blank character is '{', text otherwise.
inline IntegerSet parse_set(const std::string& content) {
  auto b = content.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && content[b] == '{') return parse_set_json(content);
  return parse_set_text(content);
}

/// Sets without a name take the file stem.
inline IntegerSet load_set(const std::string& path) {
  IntegerSet a = parse_set(read_file(path));
  if (a.name().empty()) a = IntegerSet(a.elements(), std::filesystem::path(path).stem().string());
  return a;
}

inline std::string set_to_json_string(const IntegerSet& a) {
  Json j;
  j["name"] = a.name();
  j["elements"] = a.elements();
  return j.dump(2) + "\n";
}

inline void save_set(const IntegerSet& a, const std::string& path) { write_file(path, set_to_json_string(a)); }

inline Json to_json(const Rational& r) { return r.str(); }

}  // namespace sumfree
