#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>

#include <json.hpp>

#include "tasp/ewdg.hpp"

namespace tasp {

/// Syntax or schema error in an instance document. Syntax messages carry the
/// parser's line/column; schema messages name the offending field.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class SerializeError : public std::runtime_error {
 public:
  explicit SerializeError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace io_detail {

inline Rational number_to_rational(const nlohmann::json& j, const std::string& ctx) {
  if (j.is_number_integer()) {
    const long long v = j.get<long long>();
    if (v < 0) throw ParseError("schema error: negative number at " + ctx);
    return Rational(v);
  }
  if (j.is_number_unsigned()) {
    const unsigned long long v = j.get<unsigned long long>();
    if (v > static_cast<unsigned long long>(INT64_MAX))
      throw ParseError("schema error: number too large at " + ctx);
    return Rational(static_cast<long long>(v));
  }
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (!(d >= 0) || d > 9.2e18)
      throw ParseError("schema error: number out of range at " + ctx);
    // Shortest round-trip text of the double, re-read as an exact decimal.
    return Rational::parse(nlohmann::json(d).dump());
  }
  throw ParseError("schema error: expected a number at " + ctx);
}

inline std::string get_string(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_string()) throw ParseError("schema error: expected a string at " + ctx);
  return j.get<std::string>();
}

inline void check_keys(const nlohmann::json& obj, const std::string& ctx,
                       std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
  for (const char* key : required)
    if (!obj.contains(key))
      throw ParseError("schema error: missing field \"" + std::string(key) +
                       "\" in " + ctx);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : required) known = known || it.key() == key;
    for (const char* key : optional) known = known || it.key() == key;
    if (!known)
      throw ParseError("schema error: unknown field \"" + it.key() + "\" in " + ctx);
  }
}

inline void append_json_string(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

/// Exact decimal rendering; defined only for denominators of the form
/// 2^a * 5^b, which covers everything the generator and the format emit.
inline std::string number_text(const Rational& r) {
  if (r.is_infinite()) throw SerializeError("cannot serialize an infinite bound");
  if (r.num() < 0) throw SerializeError("cannot serialize a negative number");
  if (r.is_integer()) return std::to_string(r.num());
  long long q = r.den();
  int twos = 0, fives = 0;
  while (q % 2 == 0) { q /= 2; ++twos; }
  while (q % 5 == 0) { q /= 5; ++fives; }
  if (q != 1)
    throw SerializeError("rational " + r.str() + " has no finite decimal form");
  const int k = std::max(twos, fives);
  __int128 scaled = r.num();
  for (int i = twos; i < k; ++i) scaled *= 2;
  for (int i = fives; i < k; ++i) scaled *= 5;
  std::string digits;
  while (scaled > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
  digits.insert(digits.size() - k, ".");
  return digits;
}

}  // namespace io_detail

/// Parses an instance document. Enforces syntax and schema only; semantic
/// invariants (nesting, containment, ...) are validate_instance's job, so a
/// well-formed document describing an invalid instance parses successfully.
inline ProblemInstance parse_instance(std::string_view text) {
  namespace d = io_detail;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
  if (!j.is_object())
    throw ParseError("schema error: top-level value must be an object");
  d::check_keys(j, "instance", {"name", "nodes", "source", "goals", "edges"});

  ProblemInstance inst;
  inst.name = d::get_string(j["name"], "name");
  if (!j["nodes"].is_array())
    throw ParseError("schema error: \"nodes\" must be an array");
  for (size_t i = 0; i < j["nodes"].size(); ++i)
    inst.nodes.push_back(d::get_string(j["nodes"][i], "nodes[" + std::to_string(i) + "]"));
  inst.source = d::get_string(j["source"], "source");
  if (!j["goals"].is_array())
    throw ParseError("schema error: \"goals\" must be an array");
  for (size_t i = 0; i < j["goals"].size(); ++i)
    inst.goals.push_back(d::get_string(j["goals"][i], "goals[" + std::to_string(i) + "]"));

  if (!j["edges"].is_array())
    throw ParseError("schema error: \"edges\" must be an array");
  std::unordered_set<std::string> edge_keys;
  for (size_t i = 0; i < j["edges"].size(); ++i) {
    const auto& je = j["edges"][i];
    const std::string ctx = "edges[" + std::to_string(i) + "]";
    if (!je.is_object()) throw ParseError("schema error: " + ctx + " must be an object");
    d::check_keys(je, ctx, {"from", "to", "levels"}, {"true_cost"});
    EdgeSpec e;
    e.from = d::get_string(je["from"], ctx + ".from");
    e.to = d::get_string(je["to"], ctx + ".to");
    if (!edge_keys.insert(e.from + "\x1f" + e.to).second)
      throw ParseError("schema error: parallel edge " + e.from + "->" + e.to);
    if (!je["levels"].is_array())
      throw ParseError("schema error: " + ctx + ".levels must be an array");
    for (size_t k = 0; k < je["levels"].size(); ++k) {
      const auto& jl = je["levels"][k];
      const std::string lctx = ctx + ".levels[" + std::to_string(k) + "]";
      if (!jl.is_object()) throw ParseError("schema error: " + lctx + " must be an object");
      d::check_keys(jl, lctx, {"l", "u"});
      e.levels.push_back(EstimatorLevel{d::number_to_rational(jl["l"], lctx + ".l"),
                                        d::number_to_rational(jl["u"], lctx + ".u")});
    }
    if (je.contains("true_cost"))
      e.true_cost = d::number_to_rational(je["true_cost"], ctx + ".true_cost");
    inst.edges.push_back(std::move(e));
  }
  return inst;
}

/// Deterministic byte output: fixed key order, edges in declaration order,
/// two-space indentation, newline-terminated.
inline std::string serialize_instance(const ProblemInstance& inst) {
  namespace d = io_detail;
  std::string out = "{\n  \"name\": ";
  d::append_json_string(out, inst.name);
  out += ",\n  \"nodes\": [";
  for (size_t i = 0; i < inst.nodes.size(); ++i) {
    if (i) out += ", ";
    d::append_json_string(out, inst.nodes[i]);
  }
  out += "],\n  \"source\": ";
  d::append_json_string(out, inst.source);
  out += ",\n  \"goals\": [";
  for (size_t i = 0; i < inst.goals.size(); ++i) {
    if (i) out += ", ";
    d::append_json_string(out, inst.goals[i]);
  }
  out += "],\n  \"edges\": [";
  for (size_t i = 0; i < inst.edges.size(); ++i) {
    const EdgeSpec& e = inst.edges[i];
    out += i ? ",\n    {\n" : "\n    {\n";
    out += "      \"from\": ";
    d::append_json_string(out, e.from);
    out += ",\n      \"to\": ";
    d::append_json_string(out, e.to);
    out += ",\n      \"levels\": [";
    for (size_t k = 0; k < e.levels.size(); ++k) {
      if (k) out += ", ";
      out += "{\"l\": " + d::number_text(e.levels[k].l) +
             ", \"u\": " + d::number_text(e.levels[k].u) + "}";
    }
    out += "]";
    if (e.true_cost) out += ",\n      \"true_cost\": " + d::number_text(*e.true_cost);
    out += "\n    }";
  }
  out += inst.edges.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path);
}

inline ProblemInstance load_instance_file(const std::string& path) {
  return parse_instance(read_file(path));
}

}  // namespace tasp
