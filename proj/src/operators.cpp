#include "hyperpot/operators.hpp"

#include "hyperpot/error.hpp"
#include "hyperpot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperpot {

std::vector<double> potential_kernel(const DiscreteSpace& space, const PotentialConfig& config) {
  if (!(config.N > 0.0)) throw Error(Errc::invalid_parameter, "potential needs N > 0");
  if (std::fabs(config.N - space.dim_exponent()) > 1e-12)
    throw Error(Errc::invalid_parameter, "potential N differs from the space's dimension exponent");
  const Index e = space.identity();
  std::vector<double> k(space.size());
  for (Index y = 0; y < space.size(); ++y) {
    if (y == e) continue;
    const double d = space.distance(e, y);
    k[y] = kernel_eval(config.kernel, d) / std::pow(d, config.N);
    if (!std::isfinite(k[y]))
      throw Error(Errc::overflow, "kernel overflows at distance " + std::to_string(d) + " from e");
  }
  if (config.singularity == SingularityPolicy::smoothed) {
    const double h = config.smoothing_scale.value_or(space.min_positive_distance(e));
    if (!(h > 0.0)) throw Error(Errc::invalid_parameter, "smoothing scale must be positive");
    k[e] = std::isinf(h) ? 0.0 : kernel_eval(config.kernel, h) / std::pow(h, config.N);
    if (!std::isfinite(k[e]))
      throw Error(Errc::overflow, "kernel overflows at the smoothing scale " + std::to_string(h));
  }
  return k;
}

namespace {

// Points grouped by distance from e: level_end[j] is one past the last index
// (in by_distance order) of the j-th distance level.
struct LevelIndex {
  std::span<const Index> order;
  std::vector<std::size_t> level_end;
  std::vector<double> level;
};

LevelIndex levels_about(const DiscreteSpace& space, Index center) {
  LevelIndex li;
  li.order = space.by_distance(center);
  const auto row = space.distance_row(center);
  for (std::size_t k = 0; k < li.order.size(); ++k) {
    const double d = row[li.order[k]];
    if (li.level.empty() || d != li.level.back()) {
      if (!li.level.empty()) li.level_end.push_back(k);
      li.level.push_back(d);
    }
  }
  li.level_end.push_back(li.order.size());
  return li;
}

}  // namespace

GridFunction maximal_function(const ConvolutionTable& table, const GridFunction& f) {
  require_same_space(table.space_ptr(), f.space());
  const DiscreteSpace& space = table.space();
  const std::size_t n = space.size();
  const LevelIndex li = levels_about(space, space.identity());
  const GridFunction g = f.abs();

  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t x) {
    std::vector<double> row(n);
    translate_into(table, g.values(), Index(x), row);
    double best = 0.0, numer = 0.0, denom = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < li.level_end.size(); ++j) {
      for (; k < li.level_end[j]; ++k) {
        const Index y = li.order[k];
        numer += row[y] * space.haar(y);
        denom += space.haar(y);
      }
      best = std::max(best, numer / denom);
    }
    out[x] = best;
  });
  return GridFunction(f.space(), std::move(out));
}

GridFunction maximal_function(const ConvolutionTable& table, const GridFunction& f, std::span<const double> radii) {
  require_same_space(table.space_ptr(), f.space());
  const DiscreteSpace& space = table.space();
  const std::size_t n = space.size();
  const Index e = space.identity();
  for (double r : radii)
    if (!(r > 0.0)) throw Error(Errc::invalid_radius, "maximal-function radii must be positive");
  const auto order = space.by_distance(e);
  const GridFunction g = f.abs();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t x) {
    std::vector<double> row(n);
    translate_into(table, g.values(), Index(x), row);
    double best = 0.0;
    for (double r : radii) {
      // same accumulation order as the canonical-radius sweep
      const std::size_t count = space.count_within(e, r);
      double numer = 0.0, denom = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        numer += row[order[k]] * space.haar(order[k]);
        denom += space.haar(order[k]);
      }
      best = std::max(best, numer / denom);
    }
    out[x] = best;
  });
  return GridFunction(f.space(), std::move(out));
}

GridFunction rho_maximal_function(const DiscreteSpace& space, const GridFunction& f) {
  if (f.size() != space.size()) throw Error(Errc::space_mismatch, "function does not live on this space");
  const std::size_t n = space.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t x) {
    const auto order = space.by_distance(Index(x));
    const auto row = space.distance_row(Index(x));
    double best = 0.0, numer = 0.0, denom = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Index y = order[k];
      numer += std::fabs(f[y]) * space.haar(y);
      denom += space.haar(y);
      if (k + 1 == n || row[order[k + 1]] != row[y]) best = std::max(best, numer / denom);
    }
    out[x] = best;
  });
  return GridFunction(f.space(), std::move(out));
}

GridFunction potential(const ConvolutionTable& table, const PotentialConfig& config, const GridFunction& f) {
  require_same_space(table.space_ptr(), f.space());
  const DiscreteSpace& space = table.space();
  const std::size_t n = space.size();
  const auto k = potential_kernel(space, config);

  // only y with f(y~) ≠ 0 contribute
  std::vector<Index> support;
  for (Index y = 0; y < n; ++y)
    if (f[space.involution(y)] != 0.0) support.push_back(y);

  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t x) {
    std::vector<double> terms;
    terms.reserve(support.size());
    for (Index y : support) {
      double tk = 0.0;
      for (const Atom& a : table.atoms(Index(x), y)) tk += a.mass * k[a.point];
      terms.push_back(tk * f[space.involution(y)] * space.haar(y));
    }
    out[x] = pairwise_sum(terms);
  });
  return GridFunction(f.space(), std::move(out));
}

GridFunction riesz_potential(const ConvolutionTable& table, double alpha, const GridFunction& f) {
  const double N = table.space().dim_exponent();
  if (!(alpha > 0.0 && alpha < N)) throw Error(Errc::invalid_parameter, "Riesz order must lie in (0, N)");
  PotentialConfig config;
  config.kernel = KernelSpec::power(alpha);
  config.N = N;
  return potential(table, config, f);
}

HedbergProfile hedberg_profile(const ConvolutionTable& table, std::span<const double> kernel,
                               std::span<const double> f, Index x) {
  const DiscreteSpace& space = table.space();
  const std::size_t n = space.size();
  const LevelIndex li = levels_about(space, space.identity());
  std::vector<double> tf(n);
  translate_into(table, f, x, tf);

  std::vector<double> level_sum(li.level.size());
  std::size_t k = 0;
  for (std::size_t j = 0; j < li.level.size(); ++j) {
    double s = 0.0;
    for (; k < li.level_end[j]; ++k) {
      const Index y = li.order[k];
      s += kernel[y] * tf[space.involution(y)] * space.haar(y);
    }
    level_sum[j] = s;
  }

  HedbergProfile prof;
  const std::size_t L = li.level.size();
  // suffix sums give the far part; near + far uses the same split for every r
  std::vector<double> suffix(L + 1, 0.0);
  for (std::size_t j = L; j-- > 0;) suffix[j] = suffix[j + 1] + level_sum[j];
  double near = 0.0;
  for (std::size_t j = 0; j < L; ++j) {
    near += level_sum[j];
    prof.radii.push_back(j + 1 < L ? 0.5 * (li.level[j] + li.level[j + 1]) : space.diameter() + 1.0);
    prof.near.push_back(near);
    prof.far.push_back(suffix[j + 1]);
  }
  prof.total = suffix[0];
  return prof;
}

HedbergSplit hedberg_split(const ConvolutionTable& table, const PotentialConfig& config, const GridFunction& f,
                           Index x, double r) {
  require_same_space(table.space_ptr(), f.space());
  if (!(r > 0.0)) throw Error(Errc::invalid_radius, "split radius must be positive");
  if (x >= table.size()) throw Error(Errc::invalid_parameter, "point out of range");
  const DiscreteSpace& space = table.space();
  const std::size_t n = space.size();
  const auto k = potential_kernel(space, config);
  std::vector<double> tf(n);
  translate_into(table, f.values(), x, tf);
  HedbergSplit split;
  const Index e = space.identity();
  for (Index y = 0; y < n; ++y) {
    const double term = k[y] * tf[space.involution(y)] * space.haar(y);
    (space.distance(e, y) < r ? split.near : split.far) += term;
  }
  return split;
}

double hedberg_pointwise_ratio(const ConvolutionTable& table, const PotentialConfig& config, const NFunction& phi,
                               double p, const GridFunction& f, Index x) {
  const GridFunction mf = maximal_function(table, f);
  const GridFunction iaf = potential(table, config, f);
  const double numer = iaf[x];
  if (numer == 0.0) return 0.0;
  const double denom = phi.inverse(std::pow(mf[x], p));
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return numer / denom;
}

}  // namespace hyperpot
