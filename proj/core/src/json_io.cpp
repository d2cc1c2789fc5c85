#include "sweepcert/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace sweepcert {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("surface json: " + msg);
}

Model model_from_name(const std::string& name) {
  if (name == "flat") return Model::Flat;
  if (name == "spherical") return Model::Spherical;
  if (name == "hyperbolic") return Model::Hyperbolic;
  fail("unknown model '" + name + "'");
}

} // namespace

json surface_to_json(const ConformalSurface& s) {
  json j;
  j["format_version"] = 1;
  j["model"] = model_name(s.model);
  j["genus"] = s.genus;
  json verts = json::array();
  for (int v = 0; v < s.nv(); ++v)
    verts.push_back({{"id", v}, {"lambda", s.lambda[v]}});
  j["vertices"] = std::move(verts);
  json tris = json::array();
  for (int t = 0; t < s.nt(); ++t) {
    const Tri& tr = s.tris[t];
    tris.push_back({{"id", t},
                    {"vertex_ids", {tr.v[0], tr.v[1], tr.v[2]}},
                    {"model_edge_lengths", {tr.len[0], tr.len[1], tr.len[2]}}});
  }
  j["triangles"] = std::move(tris);
  json glue = json::array();
  for (const Edge& e : s.edges)
    if (!e.boundary())
      glue.push_back({{"triangle_a", e.s0.tri},
                      {"local_edge_a", e.s0.side},
                      {"triangle_b", e.s1.tri},
                      {"local_edge_b", e.s1.side}});
  j["edge_gluings"] = std::move(glue);
  return j;
}

ConformalSurface surface_from_json(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  for (const char* key : {"format_version", "model", "genus", "vertices", "triangles",
                          "edge_gluings"})
    if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
  if (j["format_version"].get<int>() != 1) fail("unsupported format_version");
  Model model = model_from_name(j["model"].get<std::string>());
  int genus = j["genus"].get<int>();

  const json& jv = j["vertices"];
  std::vector<double> lambda(jv.size(), 0.0);
  std::vector<char> seen(jv.size(), 0);
  for (const json& v : jv) {
    int id = v.at("id").get<int>();
    if (id < 0 || id >= (int)jv.size() || seen[id]) fail("vertex ids must be 0..n-1, unique");
    seen[id] = 1;
    lambda[id] = v.at("lambda").get<double>();
  }

  const json& jt = j["triangles"];
  std::vector<TriSpec> specs(jt.size());
  std::vector<char> tseen(jt.size(), 0);
  for (const json& t : jt) {
    int id = t.at("id").get<int>();
    if (id < 0 || id >= (int)jt.size() || tseen[id]) fail("triangle ids must be 0..n-1, unique");
    tseen[id] = 1;
    const json& vs = t.at("vertex_ids");
    const json& ls = t.at("model_edge_lengths");
    if (vs.size() != 3 || ls.size() != 3) fail("triangle needs 3 vertices and 3 lengths");
    for (int c = 0; c < 3; ++c) {
      specs[id].v[c] = vs[c].get<int>();
      specs[id].len[c] = ls[c].get<double>();
    }
  }

  std::vector<GluingSpec> glue;
  for (const json& g : j["edge_gluings"])
    glue.push_back({g.at("triangle_a").get<int>(), g.at("local_edge_a").get<int>(),
                    g.at("triangle_b").get<int>(), g.at("local_edge_b").get<int>()});

  ConformalSurface s = build_surface(model, std::move(lambda), std::move(specs), glue);
  if (s.genus != genus) fail("declared genus does not match the triangulation");
  return s;
}

void save_surface(const ConformalSurface& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "' for writing");
  out << surface_to_json(s).dump(2) << "\n";
}

ConformalSurface load_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(std::string("parse error: ") + e.what());
  }
  return surface_from_json(j);
}

} // namespace sweepcert
