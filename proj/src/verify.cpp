#include "hyperpot/verify.hpp"

#include "hyperpot/error.hpp"
#include "hyperpot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hyperpot {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return den == 0.0 ? inf : num / den;
}

double relative_drift(double coarse, double fine) {
  if (!std::isfinite(coarse) || !std::isfinite(fine)) return inf;
  if (coarse == fine) return 0.0;
  return std::fabs(fine - coarse) / std::fabs(coarse);
}

std::span<const double> window_haar(const ConvolutionTable& table) {
  return table.space().haar().first(table.window());
}

// Per-function work is independent; results land in their own slot and are
// reduced afterwards in suite order.
template <class F>
std::vector<FunctionRecord> map_suite(const std::vector<TestFunction>& suite, F&& per_function) {
  std::vector<FunctionRecord> records(suite.size());
  parallel_for(suite.size(), [&](std::size_t i) {
    records[i] = per_function(suite[i]);
    records[i].label = suite[i].label;
  });
  return records;
}

}  // namespace

std::span<const double> window_view(const ConvolutionTable& table, std::span<const double> values) {
  return values.first(table.window());
}

void finalize(BoundednessReport& report) {
  report.sup_ratio = 0.0;
  for (const auto& r : report.records) report.sup_ratio = std::max(report.sup_ratio, r.ratio);
  report.pass = std::isfinite(report.sup_ratio);
  for (const auto& [name, value] : report.constants) report.pass = report.pass && std::isfinite(value);
  report.resolution_sups = {report.sup_ratio};
}

BoundednessReport combine_resolutions(const std::vector<BoundednessReport>& reports, double threshold) {
  if (reports.empty()) throw Error(Errc::empty_sample, "no resolutions to combine");
  BoundednessReport out = reports.back();
  out.resolution_sups.clear();
  out.pass = true;
  double drift = 0.0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    out.resolution_sups.push_back(reports[k].sup_ratio);
    out.pass = out.pass && reports[k].pass;
    if (k > 0) drift = std::max(drift, relative_drift(reports[k - 1].sup_ratio, reports[k].sup_ratio));
  }
  out.constant_drift.clear();
  for (const auto& [name, value] : out.constants) {
    double d = 0.0;
    for (std::size_t k = 1; k < reports.size(); ++k) {
      auto a = reports[k - 1].constants.find(name), b = reports[k].constants.find(name);
      if (a != reports[k - 1].constants.end() && b != reports[k].constants.end())
        d = std::max(d, relative_drift(a->second, b->second));
    }
    out.constant_drift[name] = d;
    if (reports.size() > 1) out.pass = out.pass && d <= threshold;
  }
  if (reports.size() > 1) {
    out.refinement_drift = drift;
    out.pass = out.pass && drift <= threshold;
  }
  return out;
}

BoundednessReport verify_weak_1_1(const ConvolutionTable& table, const std::vector<TestFunction>& suite) {
  const auto haar = window_haar(table);
  BoundednessReport report;
  report.suite = "weak11";
  report.records = map_suite(suite, [&](const TestFunction& tf) {
    const GridFunction mf = maximal_function(table, tf.f);
    const auto vals = window_view(table, mf.values());
    std::vector<std::size_t> idx(vals.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    // sup_t t·λ{Mf > t} is approached as t ↑ v for each attained value v
    double best = 0.0, measure = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      measure += haar[idx[k]];
      if (k + 1 == idx.size() || vals[idx[k + 1]] != vals[idx[k]]) best = std::max(best, vals[idx[k]] * measure);
    }
    FunctionRecord rec;
    rec.norm_in = lp_norm(tf.f, 1.0);
    rec.norm_out = best;
    rec.ratio = safe_ratio(best, rec.norm_in);
    return rec;
  });
  finalize(report);
  return report;
}

BoundednessReport verify_strong_pp(const ConvolutionTable& table, const std::vector<TestFunction>& suite, double p) {
  if (!(p > 1.0)) throw Error(Errc::invalid_parameter, "strong-type exponent must exceed 1");
  const auto haar = window_haar(table);
  BoundednessReport report;
  report.suite = "strongpp";
  report.records = map_suite(suite, [&](const TestFunction& tf) {
    const GridFunction mf = maximal_function(table, tf.f);
    FunctionRecord rec;
    rec.norm_in = lp_norm(tf.f, p);
    rec.norm_out = lp_norm(window_view(table, mf.values()), haar, p);
    rec.ratio = safe_ratio(rec.norm_out, rec.norm_in);
    return rec;
  });
  finalize(report);
  return report;
}

DominationResult check_domination(const ConvolutionTable& table, const ConditionCertificate& cert,
                                  const std::vector<TestFunction>& suite) {
  const double factor = cert.c2 * std::pow(cert.D, cert.m);
  std::vector<DominationResult> parts(suite.size());
  parallel_for(suite.size(), [&](std::size_t i) {
    const GridFunction mf = maximal_function(table, suite[i].f);
    const GridFunction mr = rho_maximal_function(table.space(), suite[i].f);
    DominationResult& part = parts[i];
    for (Index x = 0; x < table.window(); ++x) {
      ++part.points_checked;
      const double bound = factor * mr[x];
      if (mf[x] > bound * (1.0 + 1e-12)) ++part.violations;
      if (mr[x] > 0.0) part.worst_ratio = std::max(part.worst_ratio, mf[x] / bound);
    }
  });
  DominationResult total;
  for (const auto& part : parts) {
    total.points_checked += part.points_checked;
    total.violations += part.violations;
    total.worst_ratio = std::max(total.worst_ratio, part.worst_ratio);
  }
  return total;
}

BoundednessReport verify_hedberg_estimates(const ConvolutionTable& table, const PotentialConfig& config,
                                           const NFunction& phi, double p, const std::vector<TestFunction>& suite) {
  const DiscreteSpace& space = table.space();
  const auto kernel = potential_kernel(space, config);
  const double N = config.N;

  struct Part {
    double c_ar = 0.0, c_br = 0.0, c_hedberg = 0.0, partition = 0.0, forms = 0.0;
  };
  std::vector<Part> parts(suite.size());
  BoundednessReport report;
  report.suite = "hedberg";
  report.records.resize(suite.size());

  // A(r) only depends on the canonical radius
  const auto radii = space.canonical_radii(space.identity());
  std::vector<double> a_of_r(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) a_of_r[j] = a_integral(config.kernel, radii[j]);

  parallel_for(suite.size(), [&](std::size_t i) {
    const double norm = lp_norm(suite[i].f, p);
    GridFunction f = suite[i].f;
    if (norm > 0.0) f *= 1.0 / norm;
    const GridFunction mf = maximal_function(table, f);
    const GridFunction iaf = potential(table, config, f);
    Part& part = parts[i];
    for (Index x = 0; x < table.window(); ++x) {
      const HedbergProfile prof = hedberg_profile(table, kernel, f.values(), x);
      for (std::size_t j = 0; j < prof.radii.size(); ++j) {
        part.c_ar = std::max(part.c_ar, safe_ratio(prof.near[j], a_of_r[j] * mf[x]));
        part.c_br = std::max(part.c_br, safe_ratio(prof.far[j], a_of_r[j] * std::pow(prof.radii[j], -N / p)));
        const double scale = std::max(std::fabs(prof.total), std::numeric_limits<double>::min());
        part.partition = std::max(part.partition, std::fabs(prof.near[j] + prof.far[j] - prof.total) / scale);
      }
      const double gap_scale = std::max({std::fabs(iaf[x]), std::fabs(prof.total), 1e-300});
      part.forms = std::max(part.forms, std::fabs(iaf[x] - prof.total) / gap_scale);
      part.c_hedberg = std::max(part.c_hedberg, safe_ratio(iaf[x], phi.inverse(std::pow(mf[x], p))));
    }
    FunctionRecord& rec = report.records[i];
    rec.label = suite[i].label;
    rec.norm_in = norm > 0.0 ? 1.0 : 0.0;
    rec.norm_out = lp_norm(window_view(table, iaf.values()), space.haar().first(table.window()), p);
    rec.ratio = part.c_hedberg;
  });

  Part all;
  for (const auto& part : parts) {
    all.c_ar = std::max(all.c_ar, part.c_ar);
    all.c_br = std::max(all.c_br, part.c_br);
    all.c_hedberg = std::max(all.c_hedberg, part.c_hedberg);
    all.partition = std::max(all.partition, part.partition);
    all.forms = std::max(all.forms, part.forms);
  }
  report.constants["C_ar"] = all.c_ar;
  report.constants["C_br"] = all.c_br;
  report.constants["C_hedberg"] = all.c_hedberg;
  // a(r) <= C' A(r), used to pass from a(r) r^{-N/p} to A(r) r^{-N/p}
  report.constants["C_a_over_A"] = kernel_to_integral_constant(config.kernel, log_grid(1e-6, 1e6, 1201));
  report.diagnostics["partition_residual"] = all.partition;
  report.diagnostics["potential_form_gap"] = all.forms;
  finalize(report);
  return report;
}

void check_theorem_hypotheses(const PotentialConfig& config, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(Errc::hypothesis_violation, "p must lie in (1, inf)");
  const double d = config.kernel.decay_exponent;
  if (!(d > 0.0 && d < config.N / p))
    throw Error(Errc::hypothesis_violation, "decay exponent " + std::to_string(d) + " is not in (0, N/p)");
  const auto grid = log_grid(1e-6, 1e6, 1201);
  const auto cert = kernel_certificates(config.kernel, grid);
  if (!std::isfinite(cert.c_inc)) throw Error(Errc::hypothesis_violation, "kernel is not almost increasing");
  if (!std::isfinite(cert.c_dec))
    throw Error(Errc::hypothesis_violation, "a(r)/r^decay is not almost decreasing");
  double head = 0.0;
  try {
    head = a_integral(config.kernel, 1.0);
  } catch (const Error&) {
    throw Error(Errc::hypothesis_violation, "integral of a(t)/t over (0,1) diverges");
  }
  if (!std::isfinite(head)) throw Error(Errc::hypothesis_violation, "integral of a(t)/t over (0,1) diverges");
}

BoundednessReport verify_theorem(const ConvolutionTable& table, const PotentialConfig& config, double p,
                                 const std::vector<TestFunction>& suite, const NFunctionGrid& grid) {
  check_theorem_hypotheses(config, p);
  const NFunction phi = build_nfunction(config.kernel, config.N, p, grid);
  return verify_theorem(table, config, p, phi, suite);
}

BoundednessReport verify_theorem(const ConvolutionTable& table, const PotentialConfig& config, double p,
                                 const NFunction& phi, const std::vector<TestFunction>& suite) {
  check_theorem_hypotheses(config, p);
  const auto haar = window_haar(table);
  BoundednessReport report;
  report.suite = "theorem";
  std::vector<TestFunction> usable;
  for (const auto& tf : suite)
    if (lp_norm(tf.f, p) > 0.0) usable.push_back(tf);
  report.records = map_suite(usable, [&](const TestFunction& tf) {
    GridFunction f = tf.f;
    f *= 1.0 / lp_norm(tf.f, p);
    const GridFunction iaf = potential(table, config, f);
    FunctionRecord rec;
    rec.norm_in = 1.0;
    rec.norm_out = luxemburg_norm(window_view(table, iaf.values()), haar, [&phi](double s) { return phi(s); });
    rec.ratio = rec.norm_out;
    return rec;
  });
  finalize(report);
  return report;
}

double corollary_exponent(double alpha, double N, double p) {
  if (!(alpha > 0.0 && alpha < N)) throw Error(Errc::hypothesis_violation, "Riesz order must lie in (0, N)");
  if (!(p > 1.0 && p < N / alpha)) throw Error(Errc::hypothesis_violation, "p must lie in (1, N/alpha)");
  return 1.0 / (1.0 / p - alpha / N);
}

BoundednessReport verify_corollary(const ConvolutionTable& table, double alpha, double p,
                                   const std::vector<TestFunction>& suite) {
  const double N = table.space().dim_exponent();
  const double q = corollary_exponent(alpha, N, p);
  const auto haar = window_haar(table);
  BoundednessReport report;
  report.suite = "corollary";
  report.records = map_suite(suite, [&](const TestFunction& tf) {
    const GridFunction iaf = riesz_potential(table, alpha, tf.f);
    FunctionRecord rec;
    rec.norm_in = lp_norm(tf.f, p);
    rec.norm_out = lp_norm(window_view(table, iaf.values()), haar, q);
    rec.ratio = safe_ratio(rec.norm_out, rec.norm_in);
    return rec;
  });
  finalize(report);
  report.constants.clear();
  return report;
}

}  // namespace hyperpot
