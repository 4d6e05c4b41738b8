#include "hyperpot/experiment.hpp"

#include "hyperpot/error.hpp"
#include "hyperpot/operators.hpp"
#include "hyperpot/svg.hpp"
#include "hyperpot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace hyperpot {

namespace {

namespace fs = std::filesystem;

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const Json::exception& e) {
    throw Error(Errc::config_error, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_grid_instance(const Json& instance) {
  const auto type = instance.value("type", std::string());
  return type == "chebyshev" || type == "bessel";
}

// Things computed once per resolution and shared by the suites.
struct Level {
  std::size_t resolution = 0;
  SpacePtr space;
  std::shared_ptr<const ConvolutionTable> table;
  std::vector<TestFunction> suite;
};

struct SuiteOutcome {
  Json json;
  bool pass = true;
};

PotentialConfig potential_config(const ExperimentConfig& cfg, const ConvolutionTable& table) {
  PotentialConfig pc;
  pc.kernel = cfg.kernel;
  pc.N = table.space().dim_exponent();
  return pc;
}

double corollary_alpha(const ExperimentConfig& cfg) {
  if (cfg.corollary_alpha) return *cfg.corollary_alpha;
  if (cfg.kernel.family != KernelSpec::Family::power)
    throw Error(Errc::config_error, "corollary suite needs a power kernel or an explicit corollary.alpha");
  return cfg.kernel.alpha;
}

void write_records_csv(const fs::path& path, const std::vector<Level>& levels,
                       const std::vector<BoundednessReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + path.string());
  out << "resolution,label,norm_in,norm_out,ratio\n";
  for (std::size_t k = 0; k < reports.size(); ++k)
    for (const auto& r : reports[k].records)
      out << levels[k].resolution << "," << r.label << "," << fmt17(r.norm_in) << "," << fmt17(r.norm_out) << ","
          << fmt17(r.ratio) << "\n";
}

SuiteOutcome bounded_suite(const std::string& name, const ExperimentConfig& cfg, const std::vector<Level>& levels,
                           const fs::path& out_dir) {
  std::vector<BoundednessReport> reports;
  std::optional<NFunction> phi;
  for (const Level& lv : levels) {
    const ConvolutionTable& table = *lv.table;
    if (name == "weak11") {
      reports.push_back(verify_weak_1_1(table, lv.suite));
    } else if (name == "strongpp") {
      reports.push_back(verify_strong_pp(table, lv.suite, cfg.p));
    } else if (name == "hedberg" || name == "theorem") {
      const PotentialConfig pc = potential_config(cfg, table);
      check_theorem_hypotheses(pc, cfg.p);
      if (!phi || phi->N() != pc.N) phi = build_nfunction(cfg.kernel, pc.N, cfg.p);
      reports.push_back(name == "hedberg" ? verify_hedberg_estimates(table, pc, *phi, cfg.p, lv.suite)
                                          : verify_theorem(table, pc, cfg.p, *phi, lv.suite));
    } else {
      reports.push_back(verify_corollary(table, corollary_alpha(cfg), cfg.p, lv.suite));
    }
  }
  const BoundednessReport combined = combine_resolutions(reports);
  SuiteOutcome out;
  out.json = to_json(combined, false);
  out.json["records"] = combined.records.size();
  if (name == "corollary")
    out.json["q"] = corollary_exponent(corollary_alpha(cfg), levels.front().space->dim_exponent(), cfg.p);
  out.pass = combined.pass;
  if (!out_dir.empty()) write_records_csv(out_dir / (cfg.name + "_" + name + ".csv"), levels, reports);
  return out;
}

SuiteOutcome axioms_suite(const std::vector<Level>& levels) {
  SuiteOutcome out;
  Json per = Json::array();
  for (const Level& lv : levels) {
    const AxiomReport rep = check_axioms(*lv.table);
    Json j = to_json(rep);
    j["resolution"] = lv.resolution;
    per.push_back(std::move(j));
    out.pass = out.pass && rep.all_pass();
  }
  out.json = {{"pass", out.pass}, {"resolutions", std::move(per)}};
  return out;
}

SuiteOutcome haar_suite(const std::vector<Level>& levels) {
  SuiteOutcome out;
  Json per = Json::array();
  for (const Level& lv : levels) {
    const auto solved = solve_haar(*lv.table);
    const auto stored = lv.space->haar().first(lv.table->window());
    double gap = 0.0;
    for (std::size_t i = 0; i < solved.size(); ++i) gap = std::max(gap, std::fabs(solved[i] - stored[i]));
    const double residual = haar_invariance_residual(*lv.table, solved);
    const bool ok = residual <= 1e-10 && gap <= 1e-10;
    per.push_back({{"resolution", lv.resolution}, {"invariance_residual", residual}, {"max_gap_to_space", gap},
                   {"pass", ok}});
    out.pass = out.pass && ok;
  }
  out.json = {{"pass", out.pass}, {"resolutions", std::move(per)}};
  return out;
}

SuiteOutcome conditions_suite(const std::vector<Level>& levels) {
  SuiteOutcome out;
  Json per = Json::array();
  for (const Level& lv : levels) {
    const ConditionCertificate cert = check_conditions(*lv.table);
    Json j = to_json(cert);
    j["resolution"] = lv.resolution;
    per.push_back(std::move(j));
    out.pass = out.pass && cert.passed;
  }
  out.json = {{"pass", out.pass}, {"resolutions", std::move(per)}};
  return out;
}

SuiteOutcome domination_suite(const std::vector<Level>& levels) {
  SuiteOutcome out;
  Json per = Json::array();
  for (const Level& lv : levels) {
    const ConditionCertificate cert = check_conditions(*lv.table);
    const DominationResult dom = check_domination(*lv.table, cert, lv.suite);
    Json j = to_json(dom);
    j["resolution"] = lv.resolution;
    j["factor"] = cert.c2 * std::pow(cert.D, cert.m);
    per.push_back(std::move(j));
    out.pass = out.pass && dom.holds();
  }
  out.json = {{"pass", out.pass}, {"resolutions", std::move(per)}};
  return out;
}

SuiteOutcome dilation_suite(const ExperimentConfig& cfg, const std::vector<Level>& levels) {
  SuiteOutcome out;
  Json per = Json::array();
  for (const Level& lv : levels) {
    const BoundednessReport rep = verify_corollary(*lv.table, corollary_alpha(cfg), cfg.p, dilation_family(*lv.table));
    double lo = INFINITY, hi = 0.0;
    Json ratios = Json::array();
    for (const auto& r : rep.records) {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
      ratios.push_back(r.ratio);
    }
    const double spread = lo > 0.0 ? hi / lo : INFINITY;
    const bool ok = spread <= 3.0;
    per.push_back({{"resolution", lv.resolution}, {"ratios", std::move(ratios)}, {"spread", spread}, {"pass", ok}});
    out.pass = out.pass && ok;
  }
  out.json = {{"pass", out.pass}, {"max_spread_allowed", 3.0}, {"resolutions", std::move(per)}};
  return out;
}

void write_plots(const ExperimentConfig& cfg, const std::vector<Level>& levels, const Json& suites,
                 const fs::path& out_dir) {
  // sup ratio against resolution for every bounded suite
  std::vector<PlotSeries> ratio_series;
  for (const auto& name : {"weak11", "strongpp", "hedberg", "theorem", "corollary"}) {
    if (!suites.contains(name) || !suites[name].contains("resolution_sups")) continue;
    PlotSeries s{name, {}, {}};
    const auto& sups = suites[name]["resolution_sups"];
    for (std::size_t k = 0; k < sups.size() && k < levels.size(); ++k) {
      s.x.push_back(double(levels[k].resolution));
      s.y.push_back(sups[k].is_number() ? sups[k].get<double>() : INFINITY);
    }
    ratio_series.push_back(std::move(s));
  }
  if (!ratio_series.empty())
    write_line_plot(out_dir / (cfg.name + "_ratios.svg"), ratio_series,
                    {cfg.name + ": sup ratio by resolution", "resolution", "sup ratio", true, false});

  const Level& fine = levels.back();
  const ConvolutionTable& table = *fine.table;
  const std::size_t w = table.window();

  const bool wants_phi = suites.contains("hedberg") || suites.contains("theorem");
  if (wants_phi) {
    const NFunction phi = build_nfunction(cfg.kernel, fine.space->dim_exponent(), cfg.p);
    PlotSeries inv{"phi_inverse", {}, {}};
    for (const auto& node : phi.nodes()) {
      inv.x.push_back(node.r);
      inv.y.push_back(node.inverse);
    }
    write_line_plot(out_dir / (cfg.name + "_phi_inverse.svg"), {inv},
                    {cfg.name + ": inverse N-function", "r", "phi^-1(r)", true, true});
    std::ofstream csv(out_dir / (cfg.name + "_nfunction.csv"), std::ios::binary);
    write_nfunction_csv(csv, phi);
  }

  // profiles of Mf and I_a f for the largest ball indicator in the suite
  const TestFunction* probe = nullptr;
  for (const auto& tf : fine.suite)
    if (tf.label.rfind("ball", 0) == 0) probe = &tf;
  if (!probe || w < 2) return;
  PlotSeries fser{"f", {}, {}}, mser{"Mf", {}, {}}, iser{"I_a f", {}, {}};
  const GridFunction mf = maximal_function(table, probe->f);
  std::optional<GridFunction> iaf;
  try {
    iaf = potential(table, potential_config(cfg, table), probe->f);
  } catch (const Error&) {
  }
  for (Index x = 0; x < w; ++x) {
    fser.x.push_back(x);
    fser.y.push_back(probe->f[x]);
    mser.x.push_back(x);
    mser.y.push_back(mf[x]);
    if (iaf) {
      iser.x.push_back(x);
      iser.y.push_back((*iaf)[x]);
    }
  }
  std::vector<PlotSeries> prof{fser, mser};
  if (iaf) prof.push_back(iser);
  write_line_plot(out_dir / (cfg.name + "_profiles.svg"), prof,
                  {cfg.name + ": " + probe->label + " at resolution " + std::to_string(fine.resolution),
                   "point index", "value", false, false});
}

}  // namespace

KernelSpec kernel_from_json(const Json& j) {
  if (j.is_string()) return KernelSpec::parse(j.get<std::string>());
  const auto family = get_or<std::string>(j, "family", "power");
  if (family == "power") {
    const double alpha = get_or(j, "alpha", 0.25);
    return KernelSpec::power(alpha, get_or(j, "decay_exponent", alpha));
  }
  if (family == "power_log") {
    const double alpha = get_or(j, "alpha", 0.25);
    return KernelSpec::power_log(alpha, get_or(j, "beta", 0.0), get_or(j, "decay_exponent", alpha + 0.125));
  }
  if (family == "tabulated")
    return KernelSpec::tabulated(get_or(j, "r", std::vector<double>{}), get_or(j, "a", std::vector<double>{}),
                                 get_or(j, "decay_exponent", 0.25));
  throw Error(Errc::config_error, "unknown kernel family '" + family + "'");
}

Json kernel_to_json(const KernelSpec& spec) {
  Json j;
  switch (spec.family) {
    case KernelSpec::Family::power: j["family"] = "power"; break;
    case KernelSpec::Family::power_log: j["family"] = "power_log"; break;
    case KernelSpec::Family::tabulated:
      j["family"] = "tabulated";
      j["r"] = spec.table_r;
      j["a"] = spec.table_a;
      break;
  }
  j["alpha"] = spec.alpha;
  j["beta"] = spec.beta;
  j["decay_exponent"] = spec.decay_exponent;
  return j;
}

std::vector<ExperimentConfig> parse_experiments(const Json& root, const fs::path& base_dir) {
  if (!root.is_object()) throw Error(Errc::config_error, "config must be a JSON object");
  std::vector<Json> entries;
  if (root.contains("experiments")) {
    if (!root["experiments"].is_array()) throw Error(Errc::config_error, "'experiments' must be an array");
    for (const auto& e : root["experiments"]) entries.push_back(e);
  } else {
    entries.push_back(root);
  }
  std::vector<ExperimentConfig> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Json& e = entries[i];
    ExperimentConfig c;
    c.base_dir = base_dir;
    c.name = get_or<std::string>(e, "name", entries.size() == 1 ? "experiment" : "experiment" + std::to_string(i));
    if (!names.insert(c.name).second) throw Error(Errc::config_error, "duplicate experiment name '" + c.name + "'");
    c.suites = get_or(e, "suites", std::vector<std::string>{});
    for (const auto& s : c.suites)
      if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
        throw Error(Errc::config_error, "unknown suite '" + s + "'");
    if (!c.suites.empty() && !e.contains("instance")) throw Error(Errc::config_error, "missing key 'instance'");
    c.instance = e.value("instance", Json::object());
    try {
      c.kernel = e.contains("kernel") ? kernel_from_json(e["kernel"]) : KernelSpec::power(0.25);
    } catch (const Error& err) {
      throw Error(Errc::config_error, std::string("kernel: ") + err.what());
    }
    c.p = get_or(e, "p", 2.0);
    if (!(c.p > 1.0)) throw Error(Errc::config_error, "p must exceed 1");
    if (e.contains("corollary")) c.corollary_alpha = get_or(e["corollary"], "alpha", c.kernel.alpha);
    c.resolutions = get_or(e, "resolutions", std::vector<std::size_t>{});
    c.seed = get_or<std::uint64_t>(e, "seed", 1);
    out.push_back(std::move(c));
  }
  return out;
}

ConvolutionTable build_instance(const Json& instance, std::optional<std::size_t> resolution, const fs::path& base_dir) {
  const auto type = get_or<std::string>(instance, "type", "");
  if (type == "cyclic") return make_cyclic(resolution.value_or(get_or<std::size_t>(instance, "n", 64)));
  if (type == "chebyshev") return make_chebyshev(resolution.value_or(get_or<std::size_t>(instance, "M", 64)));
  if (type == "bessel") {
    BesselOptions opt;
    opt.alpha = get_or(instance, "alpha", opt.alpha);
    opt.grid_size = resolution.value_or(get_or(instance, "grid_size", opt.grid_size));
    opt.step = get_or(instance, "step", opt.step);
    // a fixed extent makes resolution refine the same interval
    if (instance.contains("extent")) opt.step = get_or(instance, "extent", 1.0) / double(opt.grid_size);
    return make_bessel(opt);
  }
  if (resolution) throw Error(Errc::config_error, "instance type '" + type + "' has no resolution parameter");
  if (type == "conjugacy")
    return make_conjugacy(FiniteGroup::by_name(get_or<std::string>(instance, "group", "S3")),
                          get_or(instance, "metric_scale", 1.0));
  if (type == "file") {
    const fs::path table = base_dir / get_or<std::string>(instance, "table", "");
    const auto space = get_or<std::string>(instance, "space", "");
    return load_instance(table, space.empty() ? fs::path() : base_dir / space);
  }
  throw Error(Errc::config_error, "unknown instance type '" + type + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  ExperimentResult result;
  Json& rep = result.report;
  rep["name"] = cfg.name;
  rep["instance"] = cfg.instance;
  rep["kernel"] = kernel_to_json(cfg.kernel);
  rep["p"] = cfg.p;
  rep["seed"] = cfg.seed;
  rep["suites"] = Json::object();
  if (cfg.suites.empty()) {
    rep["resolutions"] = Json::array();
    rep["pass"] = true;
    return result;
  }

  std::vector<std::optional<std::size_t>> res;
  for (auto r : cfg.resolutions) res.push_back(r);
  if (res.empty()) res.push_back(std::nullopt);

  const bool dilations = is_grid_instance(cfg.instance);
  std::vector<Level> levels;
  for (const auto& r : res) {
    Level lv;
    lv.table = std::make_shared<const ConvolutionTable>(build_instance(cfg.instance, r, cfg.base_dir));
    lv.space = lv.table->space_ptr();
    lv.resolution = r.value_or(lv.table->size());
    SuiteOptions opt;
    opt.seed = cfg.seed;
    lv.suite = default_suite(*lv.table, opt);
    if (dilations) {
      try {
        auto family = dilation_family(*lv.table);
        lv.suite.insert(lv.suite.end(), family.begin(), family.end());
      } catch (const Error&) {
        // grid too small for the dilated family; the dilation suite reports it
      }
    }
    levels.push_back(std::move(lv));
  }
  Json resolutions = Json::array();
  for (const auto& lv : levels)
    resolutions.push_back({{"resolution", lv.resolution},
                           {"points", lv.table->size()},
                           {"window", lv.table->window()},
                           {"suite_size", lv.suite.size()}});
  rep["resolutions"] = std::move(resolutions);

  for (const auto& name : cfg.suites) {
    SuiteOutcome outcome;
    if (name == "axioms") outcome = axioms_suite(levels);
    else if (name == "haar") outcome = haar_suite(levels);
    else if (name == "conditions") outcome = conditions_suite(levels);
    else if (name == "domination") outcome = domination_suite(levels);
    else if (name == "dilation") outcome = dilation_suite(cfg, levels);
    else outcome = bounded_suite(name, cfg, levels, out_dir);
    rep["suites"][name] = std::move(outcome.json);
    result.pass = result.pass && outcome.pass;
  }
  rep["pass"] = result.pass;
  if (!out_dir.empty()) write_plots(cfg, levels, rep["suites"], out_dir);
  return result;
}

int run_config_file(const fs::path& config_path, const fs::path& out_dir, std::ostream& log) {
  std::vector<ExperimentConfig> configs;
  try {
    configs = parse_experiments(read_json_file(config_path), config_path.parent_path());
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  Json report;
  report["schema"] = 1;
  report["config"] = config_path.filename().string();
  report["experiments"] = Json::array();
  bool pass = true;
  try {
    if (!out_dir.empty()) fs::create_directories(out_dir);
    for (const auto& cfg : configs) {
      ExperimentResult r = run_experiment(cfg, out_dir);
      log << cfg.name << ": " << (r.pass ? "pass" : "FAIL") << "\n";
      for (const auto& [suite, body] : r.report["suites"].items())
        log << "  " << suite << ": " << (body.value("pass", false) ? "pass" : "FAIL") << "\n";
      pass = pass && r.pass;
      report["experiments"].push_back(std::move(r.report));
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  report["pass"] = pass;
  if (!out_dir.empty()) write_json_file(out_dir / "report.json", report);
  return pass ? 0 : 1;
}

}  // namespace hyperpot
