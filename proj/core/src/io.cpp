#include "coarse/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse::io {

namespace {

using metric::FiniteMetricSpace;
using metric::PointId;
using metric::PointSubset;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::ParseError, what); }

const json& field(const json& doc, const char* key) {
  if (!doc.is_object()) bad("expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

template <typename T>
T as(const json& value, const char* what) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    bad(std::string("field \"") + what + "\" has the wrong type");
  }
}

void check_version(const json& doc) {
  const auto& v = field(doc, "v");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    bad("unsupported schema version " + v.dump());
}

// JSON has no infinities; they travel as null.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double real_from(const json& v, const char* what) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (!v.is_number()) bad(std::string("field \"") + what + "\" must be a number");
  return v.get<double>();
}

json subset_to_json(const PointSubset& s) {
  json a = json::array();
  for (PointId x : s) a.push_back(x);
  return a;
}

PointSubset subset_from_json(const json& a) {
  if (!a.is_array()) bad("point list must be an array");
  std::vector<PointId> ids;
  for (const auto& x : a) {
    if (!x.is_number_unsigned()) bad("point ids must be nonnegative integers");
    ids.push_back(x.get<PointId>());
  }
  return PointSubset(std::move(ids));
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::BadParams, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

// ------------------------------------------------------------------- space

json space_to_json(const FiniteMetricSpace& space) {
  json doc;
  doc["v"] = kSchemaVersion;
  const std::size_t n = space.size();
  switch (space.provenance()) {
    case metric::Provenance::matrix: {
      doc["kind"] = "matrix";
      doc["n"] = n;
      json rows = json::array();
      for (std::size_t x = 0; x < n; ++x) rows.push_back(space.row(static_cast<PointId>(x)));
      doc["data"] = std::move(rows);
      break;
    }
    case metric::Provenance::graph: {
      doc["kind"] = "graph";
      doc["n"] = n;
      json edges = json::array();
      for (const auto& e : space.edges()) edges.push_back(json::array({e.u, e.v, e.weight}));
      doc["data"] = std::move(edges);
      break;
    }
    case metric::Provenance::points: {
      doc["kind"] = "points";
      doc["n"] = n;
      json data;
      data["p"] = std::isinf(space.norm_p()) ? json("inf") : json(space.norm_p());
      data["coords"] = space.coords();
      doc["data"] = std::move(data);
      break;
    }
  }
  return doc;
}

FiniteMetricSpace space_from_json(const json& doc) {
  check_version(doc);
  const auto kind = as<std::string>(field(doc, "kind"), "kind");
  const auto n = as<std::size_t>(field(doc, "n"), "n");
  const auto& data = field(doc, "data");
  if (kind == "matrix") {
    auto rows = as<std::vector<std::vector<double>>>(data, "data");
    if (rows.size() != n) bad("matrix has " + std::to_string(rows.size()) + " rows, n = " +
                              std::to_string(n));
    return FiniteMetricSpace::from_matrix(rows);
  }
  if (kind == "graph") {
    if (!data.is_array()) bad("graph data must be an edge list");
    std::vector<metric::Edge> edges;
    for (const auto& e : data) {
      if (!e.is_array() || e.size() != 3) bad("edges are [u, v, weight] triples");
      edges.push_back({as<PointId>(e[0], "edge"), as<PointId>(e[1], "edge"),
                       as<double>(e[2], "edge")});
    }
    return FiniteMetricSpace::from_graph(n, edges);
  }
  if (kind == "points") {
    const double p = real_from(field(data, "p"), "p");
    auto coords = as<std::vector<std::vector<double>>>(field(data, "coords"), "coords");
    if (coords.size() != n) bad("coords has " + std::to_string(coords.size()) + " points, n = " +
                                std::to_string(n));
    return FiniteMetricSpace::from_points(std::move(coords), p);
  }
  bad("unknown space kind \"" + kind + "\"");
}

// --------------------------------------------------------------------- pou

json pou_to_json(const simplex::PartitionOfUnity& f, const std::string& space_ref) {
  json doc;
  doc["v"] = kSchemaVersion;
  doc["space"] = space_ref;
  doc["n"] = f.universe();
  json entries = json::object();
  for (PointId x : f.domain()) {
    json point = json::array();
    for (const auto& [v, w] : f.at(x).entries())
      point.push_back(json::array({simplex::to_string(v), w}));
    entries[std::to_string(x)] = std::move(point);
  }
  doc["entries"] = std::move(entries);
  return doc;
}

simplex::PartitionOfUnity pou_from_json(const json& doc, std::size_t universe) {
  check_version(doc);
  const auto& entries = field(doc, "entries");
  if (!entries.is_object()) bad("\"entries\" must be an object");
  simplex::PartitionOfUnity f(universe);
  for (const auto& [key, value] : entries.items()) {
    if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
      bad("point key \"" + key + "\" is not a point id");
    const unsigned long long x = std::stoull(key);
    if (x >= universe)
      throw Error(Errc::UnknownPoint, "point " + key + " is not in a space of size " +
                                          std::to_string(universe));
    if (!value.is_array()) bad("entry for point " + key + " must be an array");
    std::vector<simplex::SimplexPoint::Entry> weights;
    for (const auto& pair : value) {
      if (!pair.is_array() || pair.size() != 2) bad("weights are [\"ns:index\", w] pairs");
      weights.emplace_back(simplex::parse_vertex_id(as<std::string>(pair[0], "vertex")),
                           as<double>(pair[1], "weight"));
    }
    f.set(static_cast<PointId>(x), simplex::SimplexPoint::from_weights(std::move(weights)));
  }
  return f;
}

// -------------------------------------------------------------------- tree

json tree_to_json(const covers::DecompositionTree& tree) {
  json doc;
  doc["v"] = kSchemaVersion;
  doc["m"] = tree.m;
  doc["arity"] = tree.arity;
  doc["radii"] = tree.radii;
  json nodes = json::array();
  for (const auto& nd : tree.nodes) {
    json j;
    j["id"] = nd.id;
    j["level"] = nd.level;
    j["members"] = subset_to_json(nd.members);
    j["families"] = nd.families;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

covers::DecompositionTree tree_from_json(const json& doc) {
  check_version(doc);
  covers::DecompositionTree t;
  t.m = as<std::size_t>(field(doc, "m"), "m");
  t.arity = as<std::vector<std::size_t>>(field(doc, "arity"), "arity");
  t.radii = as<std::vector<double>>(field(doc, "radii"), "radii");
  const auto& nodes = field(doc, "nodes");
  if (!nodes.is_array()) bad("\"nodes\" must be an array");
  for (const auto& j : nodes) {
    covers::TreeNode nd;
    nd.id = as<std::size_t>(field(j, "id"), "id");
    nd.level = as<std::size_t>(field(j, "level"), "level");
    nd.members = subset_from_json(field(j, "members"));
    nd.families = as<std::vector<std::vector<std::size_t>>>(field(j, "families"), "families");
    t.nodes.push_back(std::move(nd));
  }
  return t;
}

json families_to_json(const std::vector<verify::CoverFamily>& families) {
  json doc;
  doc["v"] = kSchemaVersion;
  json fams = json::array();
  for (const auto& fam : families) {
    json j;
    json members = json::array();
    for (const auto& m : fam.members) members.push_back(subset_to_json(m));
    j["members"] = std::move(members);
    j["R"] = fam.claimed_R ? json(*fam.claimed_R) : json(nullptr);
    j["bound"] = fam.claimed_bound ? json(*fam.claimed_bound) : json(nullptr);
    fams.push_back(std::move(j));
  }
  doc["families"] = std::move(fams);
  return doc;
}

std::vector<verify::CoverFamily> families_from_json(const json& doc) {
  check_version(doc);
  std::vector<verify::CoverFamily> out;
  for (const auto& j : field(doc, "families")) {
    verify::CoverFamily fam;
    for (const auto& m : field(j, "members")) fam.members.push_back(subset_from_json(m));
    if (j.contains("R") && !j["R"].is_null()) fam.claimed_R = as<double>(j["R"], "R");
    if (j.contains("bound") && !j["bound"].is_null())
      fam.claimed_bound = as<double>(j["bound"], "bound");
    out.push_back(std::move(fam));
  }
  return out;
}

// ----------------------------------------------------------------- reports

json schedule_to_json(const extend::BudgetSchedule& s) {
  json doc;
  doc["v"] = kSchemaVersion;
  doc["epsilon"] = s.epsilon;
  doc["mode"] = extend::to_string(s.mode);
  doc["modulus"] = s.modulus;
  doc["m"] = s.m;
  doc["arity"] = s.arity;
  doc["N"] = s.N;
  doc["P"] = s.P;
  json R = json::array();
  for (double r : s.R) R.push_back(real(r));
  doc["R"] = std::move(R);
  doc["bottom"] = s.bottom;
  doc["floor"] = s.floor;
  doc["delta_leaf"] = s.delta_leaf;
  return doc;
}

json lipschitz_to_json(const verify::LipschitzReport& rep) {
  json j;
  j["check"] = "lipschitz";
  j["pass"] = rep.pass;
  j["tolerance"] = rep.tolerance;
  j["lambda"] = rep.lambda;
  j["C"] = rep.C;
  j["mode"] = verify::to_string(rep.mode);
  j["worst_slack"] = real(rep.worst_slack);
  j["witness"] = rep.witness ? json::array({rep.witness->first, rep.witness->second})
                             : json(nullptr);
  j["pairs_checked"] = rep.pairs_checked;
  j["restricted_radius"] = rep.restricted_radius ? real(*rep.restricted_radius) : json(nullptr);
  return j;
}

json cobounded_to_json(const verify::CoboundedReport& rep) {
  json j;
  j["check"] = "cobounded";
  j["pass"] = rep.pass;
  j["tolerance"] = rep.tolerance;
  j["bound"] = real(rep.bound);
  j["tight"] = rep.tight;
  j["witness"] = rep.worst_vertex ? json(simplex::to_string(*rep.worst_vertex)) : json(nullptr);
  j["vertices"] = rep.vertices;
  return j;
}

json tree_report_to_json(const covers::TreeReport& rep) {
  json j;
  j["check"] = "tree";
  j["pass"] = rep.pass;
  j["clause"] = rep.clause ? json(*rep.clause) : json(nullptr);
  j["node"] = rep.node ? json(*rep.node) : json(nullptr);
  j["message"] = rep.message;
  j["witness"] = rep.witness ? json::array({rep.witness->first, rep.witness->second})
                             : json(nullptr);
  j["witness_distance"] = rep.witness_distance ? json(*rep.witness_distance) : json(nullptr);
  j["K"] = rep.K;
  j["sfdc"] = rep.sfdc;
  return j;
}

json certificate_report_to_json(const extend::Certificate& cert) {
  json doc;
  doc["v"] = kSchemaVersion;
  doc["pass"] = cert.pass();
  doc["epsilon"] = cert.epsilon;
  doc["bound"] = real(cert.bound);
  doc["checks"] = json::array({lipschitz_to_json(cert.lipschitz), cobounded_to_json(cert.cobounded)});
  json stats;
  stats["branch1"] = cert.stats.branch1;
  stats["branch2"] = cert.stats.branch2;
  stats["glues"] = cert.stats.glues;
  stats["glue_budget_violations"] = cert.stats.glue_budget_violations;
  stats["min_glue_margin"] = real(cert.stats.min_glue_margin);
  doc["stats"] = std::move(stats);
  return doc;
}

extend::Modulus modulus_from_spec(const std::string& spec) {
  if (spec == "paper") return extend::Modulus::paper();
  if (spec.rfind("linear:", 0) == 0) {
    const std::string c = spec.substr(7);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(c, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != c.size())
      throw Error(Errc::BadParams, "bad linear modulus constant \"" + c + "\"");
    return extend::Modulus::linear(value);
  }
  if (spec.rfind("table:", 0) == 0) {
    const auto doc = read_json_file(spec.substr(6));
    check_version(doc);
    return extend::Modulus::table(
        as<std::vector<std::pair<double, double>>>(field(doc, "points"), "points"));
  }
  throw Error(Errc::BadParams, "modulus must be paper, linear:<c> or table:<path>");
}

}  // namespace coarse::io
