// hyperpot: build hypergroup instances, check them, and run the operator
// verification suites.
#include "hyperpot/error.hpp"
#include "hyperpot/experiment.hpp"
#include "hyperpot/json_io.hpp"
#include "hyperpot/operators.hpp"
#include "hyperpot/parallel.hpp"
#include "hyperpot/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hyperpot;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ConvolutionTable load(const std::string& table, const std::string& space) {
  return load_instance(table, space.empty() ? fs::path() : fs::path(space));
}

// JSON array, or text with one value per line ("value" or "index,value").
std::vector<double> read_function_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_error, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<double> values;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    values = parse_json_text(text, path).get<std::vector<double>>();
  } else {
    values.assign(n, 0.0);
    std::istringstream lines(text);
    std::size_t row = 0;
    for (std::string line; std::getline(lines, line);) {
      if (line.empty() || line[0] == '#' || line.find_first_of("0123456789") == std::string::npos) continue;
      const auto comma = line.find(',');
      std::size_t idx = row++;
      double v = 0.0;
      try {
        if (comma != std::string::npos) {
          idx = std::stoul(line.substr(0, comma));
          v = std::stod(line.substr(comma + 1));
        } else {
          v = std::stod(line);
        }
      } catch (const std::exception&) {
        continue;  // header line
      }
      if (idx >= n) throw Error(Errc::config_error, "function index out of range in " + path);
      values[idx] = v;
    }
  }
  if (values.size() != n) throw Error(Errc::space_mismatch, "function has " + std::to_string(values.size()) +
                                                                " values, space has " + std::to_string(n));
  return values;
}

void write_values_csv(std::ostream& out, const GridFunction& g) {
  out << "point_index,value\n";
  for (Index i = 0; i < g.size(); ++i) out << i << "," << fmt17(g[i]) << "\n";
}

void emit(const Json& j, const std::string& out_dir, const std::string& file) {
  if (out_dir.empty()) {
    std::cout << dump_json(j);
    return;
  }
  fs::create_directories(out_dir);
  write_json_file(fs::path(out_dir) / file, j);
  std::cout << "wrote " << (fs::path(out_dir) / file).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potential operators and maximal functions on discrete hypergroups"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // make
  auto* make = app.add_subcommand("make", "write an instance as space/table JSON files");
  std::string kind, out_prefix = "instance", group = "S3";
  std::size_t n = 6, M = 64, grid = 128;
  double alpha_b = 0.5, step = 1.0, metric_scale = 1.0;
  make->add_option("kind", kind, "cyclic | conjugacy | chebyshev | bessel")
      ->required()
      ->check(CLI::IsMember({"cyclic", "conjugacy", "chebyshev", "bessel"}));
  make->add_option("--n", n, "cyclic group order");
  make->add_option("--group", group, "S3, Q8, D4, Zn, ... for conjugacy");
  make->add_option("--metric-scale", metric_scale, "conjugacy metric value between distinct classes");
  make->add_option("--M", M, "Chebyshev truncation degree");
  make->add_option("--alpha", alpha_b, "Bessel parameter (N = 2 alpha + 2)");
  make->add_option("--grid", grid, "Bessel grid size");
  make->add_option("--step", step, "Bessel grid step");
  make->add_option("--out", out_prefix, "output prefix; writes PREFIX.space.json and PREFIX.table.json");

  // check-axioms / check-conditions
  std::string space_path, table_path;
  auto* axioms = app.add_subcommand("check-axioms", "check the hypergroup axioms on the safe window");
  axioms->add_option("--table", table_path)->required();
  axioms->add_option("--space", space_path);
  auto* conditions = app.add_subcommand("check-conditions", "measure c1, c2, c3, D and m");
  conditions->add_option("--table", table_path)->required();
  conditions->add_option("--space", space_path);

  // verify
  auto* verify = app.add_subcommand("verify", "run one verification suite on one instance");
  std::string suite, kernel_text = "power:0.25", out_dir;
  double p = 2.0;
  std::uint64_t seed = 1;
  verify->add_option("suite", suite)->required()->check(
      CLI::IsMember({"weak11", "strongpp", "hedberg", "theorem", "corollary"}));
  verify->add_option("--table", table_path)->required();
  verify->add_option("--space", space_path);
  verify->add_option("--kernel", kernel_text, "power:A[,decay] or power_log:A,B[,decay]");
  verify->add_option("--p", p);
  verify->add_option("--seed", seed);
  verify->add_option("--out", out_dir, "directory for report.json (default: stdout)");

  // op
  auto* op = app.add_subcommand("op", "evaluate an operator on a function file");
  std::string op_name, f_path, singularity = "smoothed";
  Index point = 0;
  op->add_option("operator", op_name)->required()->check(CLI::IsMember({"maximal", "potential", "hedberg"}));
  op->add_option("--table", table_path)->required();
  op->add_option("--space", space_path);
  op->add_option("--kernel", kernel_text);
  op->add_option("--f", f_path, "JSON array or CSV (index,value) of f")->required();
  op->add_option("--x", point, "evaluation point for hedberg");
  op->add_option("--singularity", singularity)->check(CLI::IsMember({"smoothed", "zero"}));

  // run / report
  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string config_path, bundle = "out";
  run->add_option("--config", config_path)->required();
  run->add_option("--out", bundle, "output directory");
  auto* report = app.add_subcommand("report", "summarize a report bundle");
  report->add_option("--bundle", bundle)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  set_parallelism(threads);

  try {
    if (*make) {
      ConvolutionTable table = [&] {
        if (kind == "cyclic") return make_cyclic(n);
        if (kind == "conjugacy") return make_conjugacy(FiniteGroup::by_name(group), metric_scale);
        if (kind == "chebyshev") return make_chebyshev(M);
        return make_bessel({alpha_b, grid, step});
      }();
      const fs::path prefix(out_prefix);
      if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
      const fs::path space_file = prefix.string() + ".space.json";
      const fs::path table_file = prefix.string() + ".table.json";
      write_json_file(space_file, space_to_json(table.space()));
      write_json_file(table_file, table_to_json(table, space_file.filename().string()));
      std::cout << "wrote " << space_file.string() << " and " << table_file.string() << " (" << table.size()
                << " points, window " << table.window() << ")\n";
      return 0;
    }
    if (*axioms) {
      const auto table = load(table_path, space_path);
      const AxiomReport rep = check_axioms(table);
      std::cout << dump_json(to_json(rep));
      return rep.all_pass() ? 0 : 1;
    }
    if (*conditions) {
      const auto table = load(table_path, space_path);
      const ConditionCertificate cert = check_conditions(table);
      std::cout << dump_json(to_json(cert));
      return cert.passed ? 0 : 1;
    }
    if (*verify) {
      const auto table = load(table_path, space_path);
      const KernelSpec kernel = KernelSpec::parse(kernel_text);
      SuiteOptions opt;
      opt.seed = seed;
      const auto tests = default_suite(table, opt);
      PotentialConfig pc;
      pc.kernel = kernel;
      pc.N = table.space().dim_exponent();
      BoundednessReport rep;
      if (suite == "weak11") rep = verify_weak_1_1(table, tests);
      else if (suite == "strongpp") rep = verify_strong_pp(table, tests, p);
      else if (suite == "theorem") rep = verify_theorem(table, pc, p, tests);
      else if (suite == "corollary") rep = verify_corollary(table, kernel.alpha, p, tests);
      else {
        check_theorem_hypotheses(pc, p);
        rep = verify_hedberg_estimates(table, pc, build_nfunction(kernel, pc.N, p), p, tests);
      }
      Json j;
      j["schema"] = 1;
      j["kernel"] = kernel_to_json(kernel);
      j["p"] = p;
      j["seed"] = seed;
      j["report"] = to_json(rep);
      emit(j, out_dir, "report.json");
      return rep.pass ? 0 : 1;
    }
    if (*op) {
      const auto table = load(table_path, space_path);
      const GridFunction f(table.space_ptr(), read_function_file(f_path, table.size()));
      PotentialConfig pc;
      pc.kernel = KernelSpec::parse(kernel_text);
      pc.N = table.space().dim_exponent();
      pc.singularity = singularity == "zero" ? SingularityPolicy::zero : SingularityPolicy::smoothed;
      if (op_name == "maximal") {
        write_values_csv(std::cout, maximal_function(table, f));
      } else if (op_name == "potential") {
        write_values_csv(std::cout, potential(table, pc, f));
      } else {
        if (point >= table.size()) throw Error(Errc::invalid_parameter, "--x out of range");
        const auto prof = hedberg_profile(table, potential_kernel(table.space(), pc), f.values(), point);
        std::cout << "r,near,far\n";
        for (std::size_t j = 0; j < prof.radii.size(); ++j)
          std::cout << fmt17(prof.radii[j]) << "," << fmt17(prof.near[j]) << "," << fmt17(prof.far[j]) << "\n";
      }
      return 0;
    }
    if (*run) return run_config_file(config_path, bundle, std::cout);
    if (*report) {
      const Json j = read_json_file(fs::path(bundle) / "report.json");
      bool pass = j.value("pass", false);
      const Json experiments = j.value("experiments", Json::array());
      for (const auto& exp : experiments) {
        std::cout << exp.value("name", std::string("?")) << ": " << (exp.value("pass", false) ? "pass" : "FAIL")
                  << "\n";
        const Json suites = exp.value("suites", Json::object());
        for (const auto& [name, body] : suites.items()) {
          std::cout << "  " << name << ": " << (body.value("pass", false) ? "pass" : "FAIL");
          if (body.contains("sup_ratio")) std::cout << "  sup_ratio=" << body["sup_ratio"].dump();
          if (body.contains("refinement_drift") && !body["refinement_drift"].is_null())
            std::cout << "  drift=" << body["refinement_drift"].dump();
          std::cout << "\n";
        }
      }
      return pass ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
