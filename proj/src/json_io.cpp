#include "hyperpot/json_io.hpp"

#include "hyperpot/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hyperpot {

namespace {

void dump_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
}

void dump_value(std::string& out, const Json& v, int depth) {
  const std::string pad(2 * std::size_t(depth + 1), ' ');
  const std::string close_pad(2 * std::size_t(depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_value(out, it.value(), depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& x : v) flat = flat && !x.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_value(out, v[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_value(out, v[i], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      dump_number(out, v.get<double>());
      return;
    default:
      out += v.dump();
  }
}

double as_double(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  return v.get<double>();
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::config_error, std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(Errc::config_error, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  dump_value(out, value, 0);
  out += "\n";
  return out;
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + path.string());
  out << dump_json(value);
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(Errc::config_error,
                origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": invalid JSON: " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

Json space_to_json(const DiscreteSpace& space) {
  const SpaceData& d = space.data();
  Json j;
  j["n_points"] = d.n_points;
  j["rho"] = d.rho;
  j["haar"] = d.haar;
  j["identity"] = d.identity;
  j["involution"] = d.involution;
  j["dim_exponent"] = d.dim_exponent;
  return j;
}

SpaceData space_from_json(const Json& j) {
  SpaceData d;
  d.n_points = field<std::size_t>(j, "n_points");
  d.rho = field<std::vector<double>>(j, "rho");
  d.haar = field<std::vector<double>>(j, "haar");
  d.identity = field<Index>(j, "identity");
  d.involution = field<std::vector<Index>>(j, "involution");
  d.dim_exponent = field<double>(j, "dim_exponent");
  return d;
}

Json table_to_json(const ConvolutionTable& table, const std::string& space_ref) {
  Json atoms = Json::array();
  const Index n = Index(table.size());
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const auto list = table.atoms(x, y);
      if (list.empty()) continue;
      Json masses = Json::array();
      for (const Atom& a : list) masses.push_back(Json::array({a.point, a.mass}));
      atoms.push_back(Json::array({x, y, std::move(masses)}));
    }
  Json j;
  j["space_ref"] = space_ref;
  j["atoms"] = std::move(atoms);
  j["safe_window"] = table.window();
  return j;
}

ConvolutionTable table_from_json(const Json& j, SpacePtr space) {
  const std::size_t n = space->size();
  std::vector<std::vector<Atom>> pairs(n * n);
  const auto& atoms = j.at("atoms");
  if (!atoms.is_array()) throw Error(Errc::config_error, "'atoms' must be an array");
  for (const auto& entry : atoms) {
    if (!entry.is_array() || entry.size() != 3) throw Error(Errc::config_error, "atom entry must be [x, y, [[z, mass], ...]]");
    const auto x = entry[0].get<std::size_t>(), y = entry[1].get<std::size_t>();
    if (x >= n || y >= n) throw Error(Errc::config_error, "atom pair index out of range");
    for (const auto& zm : entry[2]) {
      const auto z = zm.at(0).get<std::size_t>();
      if (z >= n) throw Error(Errc::config_error, "atom point out of range");
      pairs[x * n + y].push_back({Index(z), as_double(zm.at(1))});
    }
  }
  const std::size_t window = j.contains("safe_window") ? j["safe_window"].get<std::size_t>() : n;
  return ConvolutionTable(std::move(space), std::move(pairs), window);
}

ConvolutionTable load_instance(const std::filesystem::path& table_path, const std::filesystem::path& space_path) {
  const Json tj = read_json_file(table_path);
  std::filesystem::path sp = space_path;
  if (sp.empty()) {
    if (!tj.contains("space_ref")) throw Error(Errc::config_error, "table has no space_ref and no space was given");
    sp = table_path.parent_path() / tj["space_ref"].get<std::string>();
  }
  auto space = std::make_shared<const DiscreteSpace>(space_from_json(read_json_file(sp)));
  return table_from_json(tj, std::move(space));
}

Json to_json(const AxiomReport& report) {
  Json j;
  for (const auto& c : report.checks)
    j[c.name] = {{"pass", c.pass}, {"max_violation", c.max_violation}, {"checked", c.checked}};
  j["all_pass"] = report.all_pass();
  return j;
}

Json to_json(const ConditionCertificate& cert) {
  return {{"c1", cert.c1},         {"c2", cert.c2},
          {"c3", cert.c3},         {"D", cert.D},
          {"m", cert.m},           {"radii_tested", cert.radii_tested.size()},
          {"passed", cert.passed}, {"failure", cert.failure}};
}

Json to_json(const BoundednessReport& report, bool with_records) {
  Json j;
  j["suite"] = report.suite;
  j["sup_ratio"] = report.sup_ratio;
  j["pass"] = report.pass;
  j["refinement_drift"] = report.refinement_drift ? Json(*report.refinement_drift) : Json(nullptr);
  j["resolution_sups"] = report.resolution_sups;
  j["constants"] = report.constants;
  j["constant_drift"] = report.constant_drift;
  j["diagnostics"] = report.diagnostics;
  if (with_records) {
    Json recs = Json::array();
    for (const auto& r : report.records)
      recs.push_back({{"label", r.label}, {"norm_in", r.norm_in}, {"norm_out", r.norm_out}, {"ratio", r.ratio}});
    j["records"] = std::move(recs);
  }
  return j;
}

Json to_json(const DominationResult& result) {
  return {{"worst_ratio", result.worst_ratio},
          {"points_checked", result.points_checked},
          {"violations", result.violations},
          {"holds", result.holds()}};
}

}  // namespace hyperpot
