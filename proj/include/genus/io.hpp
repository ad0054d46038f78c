#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "genus/surface.hpp"

namespace genus {

using nlohmann::json;

// Canonical decimal rendering: integers without a point, everything else
// shortest round-trip. Keeps files byte-reproducible across runs.
inline std::string fmt_len(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", x);
    return buf;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_len(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw StructuralError(where + ": bad decimal string '" + s + "'");
  }
}

inline json embedding_to_json(const SurfaceEmbedding& emb) {
  json j;
  j["vertices"] = emb.base().vertices();
  json edges = json::array();
  for (const Edge& e : emb.base().edges()) {
    json je;
    je["id"] = e.id;
    je["u"] = e.u;
    je["v"] = e.v;
    je["len"] = fmt_len(e.len);
    je["sign"] = e.sign;
    edges.push_back(je);
  }
  j["edges"] = edges;
  json rot = json::object();
  for (const auto& [v, darts] : emb.rotation()) {
    json jr = json::array();
    for (const Dart& d : darts) jr.push_back(json::array({d.edge, d.end}));
    rot[std::to_string(v)] = jr;
  }
  j["rotation"] = rot;
  return j;
}

inline SurfaceEmbedding embedding_from_json(const json& j) {
  if (!j.is_object()) throw StructuralError("graph file: top level must be an object");
  for (const char* key : {"vertices", "edges", "rotation"})
    if (!j.contains(key))
      throw StructuralError(std::string("graph file: missing key '") + key + "'");

  std::vector<VId> vertices;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_number_integer()) throw StructuralError("vertices: ids must be integers");
    vertices.push_back(v.get<VId>());
  }
  std::vector<Edge> edges;
  int ei = 0;
  for (const auto& je : j.at("edges")) {
    std::string where = "edges[" + std::to_string(ei++) + "]";
    for (const char* key : {"id", "u", "v", "len", "sign"})
      if (!je.contains(key)) throw StructuralError(where + ": missing '" + key + "'");
    Edge e;
    e.id = je.at("id").get<EId>();
    e.u = je.at("u").get<VId>();
    e.v = je.at("v").get<VId>();
    if (!je.at("len").is_string()) throw StructuralError(where + ": 'len' must be a decimal string");
    e.len = parse_len(je.at("len").get<std::string>(), where);
    if (!(e.len > 0)) throw StructuralError(where + ": length must be strictly positive");
    e.sign = je.at("sign").get<int>();
    edges.push_back(e);
  }
  std::map<VId, std::vector<Dart>> rotation;
  for (const auto& [key, val] : j.at("rotation").items()) {
    VId v;
    try {
      v = std::stoi(key);
    } catch (const std::exception&) {
      throw StructuralError("rotation: bad vertex key '" + key + "'");
    }
    std::vector<Dart> darts;
    for (const auto& jd : val) {
      if (!jd.is_array() || jd.size() != 2)
        throw StructuralError("rotation[" + key + "]: dart must be [edge id, end]");
      darts.push_back({jd[0].get<EId>(), jd[1].get<int>()});
    }
    rotation[v] = std::move(darts);
  }
  // MetricGraph/SurfaceEmbedding constructors validate the full invariants.
  return SurfaceEmbedding(MetricGraph(std::move(vertices), std::move(edges)),
                          std::move(rotation));
}

inline std::string embedding_to_string(const SurfaceEmbedding& emb) {
  return embedding_to_json(emb).dump() + "\n";
}

inline void save_embedding(const SurfaceEmbedding& emb, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw StructuralError("cannot open for writing: " + path);
  f << embedding_to_string(emb);
}

inline SurfaceEmbedding load_embedding(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw StructuralError("cannot open: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw StructuralError(path + ": " + e.what());
  }
  return embedding_from_json(j);
}

inline MetricGraph graph_from_json(const json& j) {
  if (!j.is_object()) throw StructuralError("graph: top level must be an object");
  for (const char* key : {"vertices", "edges"})
    if (!j.contains(key))
      throw StructuralError(std::string("graph: missing key '") + key + "'");
  std::vector<VId> vertices;
  for (const auto& v : j.at("vertices")) vertices.push_back(v.get<VId>());
  std::vector<Edge> edges;
  int ei = 0;
  for (const auto& je : j.at("edges")) {
    std::string where = "edges[" + std::to_string(ei++) + "]";
    Edge e;
    e.id = je.at("id").get<EId>();
    e.u = je.at("u").get<VId>();
    e.v = je.at("v").get<VId>();
    if (!je.at("len").is_string())
      throw StructuralError(where + ": 'len' must be a decimal string");
    e.len = parse_len(je.at("len").get<std::string>(), where);
    if (!(e.len > 0)) throw StructuralError(where + ": length must be strictly positive");
    e.sign = je.value("sign", +1);
    edges.push_back(e);
  }
  return MetricGraph(std::move(vertices), std::move(edges));
}

inline json graph_to_json(const MetricGraph& g) {
  json j;
  j["vertices"] = g.vertices();
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    json je;
    je["id"] = e.id;
    je["u"] = e.u;
    je["v"] = e.v;
    je["len"] = fmt_len(e.len);
    je["sign"] = e.sign;
    edges.push_back(je);
  }
  j["edges"] = edges;
  return j;
}

}  // namespace genus
