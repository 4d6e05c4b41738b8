#include "hyperpot/error.hpp"
#include "hyperpot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperpot {

namespace {

struct Event {
  double level;  // ρ(e, z) of the atom
  Index y;
  double mass;
};

}  // namespace

ConditionCertificate check_conditions(const ConvolutionTable& table) {
  const DiscreteSpace& space = table.space();
  const std::size_t n = space.size();
  const Index e = space.identity();
  const auto levels = space.distance_levels(e);
  const double inf = std::numeric_limits<double>::infinity();

  ConditionCertificate cert;
  cert.radii_tested = space.canonical_radii(e);
  cert.D = n >= 2 ? doubling_constant(space) : 1.0;

  std::vector<double> ball_e(levels.size());  // λB(e, r) for r just above levels[j]
  for (std::size_t j = 0; j < levels.size(); ++j)
    ball_e[j] = space.measure_within(e, j + 1 < levels.size() ? levels[j + 1] : inf);

  // Λ_x(y) = T^x χ_{B(e,r)}(y~) as written, and its adjoint
  // Λ*_x(z) = Σ_y c(x,y,z) χ_{B(e,r)}(y~) λ(y) / λ(z), the density for which
  // (|f| ∗ χ_{B(e,r)})(x) = Σ_z |f(z)| Λ*_x(z) λ(z) holds exactly. The two
  // coincide on exact hypergroups; the constants cover both.
  std::vector<Event> direct, adjoint;
  std::vector<double> lambda(n);
  auto sweep = [&](std::vector<Event>& events, Index x) {
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.level < b.level; });
    std::fill(lambda.begin(), lambda.end(), 0.0);
    double max_lambda = 0.0, max_reach = 0.0;
    std::size_t next = 0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      // r ∈ (levels[j], levels[j+1]]: Λ_x sums atoms at e-levels <= levels[j]
      for (; next < events.size() && events[next].level <= levels[j]; ++next) {
        const Event& ev = events[next];
        lambda[ev.y] += ev.mass;
        max_lambda = std::max(max_lambda, lambda[ev.y]);
        max_reach = std::max(max_reach, space.distance(x, ev.y));
      }
      const double c1 = levels[j] > 0.0 ? max_reach / levels[j] : (max_reach > 0.0 ? inf : 0.0);
      cert.c1 = std::max(cert.c1, c1);
      // λB(x, r) is largest at the right end of the interval
      const double ball_x = space.measure_within(x, j + 1 < levels.size() ? levels[j + 1] : inf);
      cert.c2 = std::max(cert.c2, ball_x * max_lambda / ball_e[j]);
    }
  };
  for (Index x = 0; x < table.window(); ++x) {
    direct.clear();
    adjoint.clear();
    for (Index y = 0; y < n; ++y) {
      for (const Atom& a : table.atoms(x, space.involution(y))) direct.push_back({space.distance(e, a.point), y, a.mass});
      const double level = space.distance(e, y);
      for (const Atom& a : table.atoms(x, y))
        adjoint.push_back({level, a.point, a.mass * space.haar(y) / space.haar(a.point)});
    }
    sweep(direct, x);
    sweep(adjoint, x);
  }

  double size_ratio = 0.0;
  for (double r : cert.radii_tested)
    size_ratio = std::max(size_ratio, space.measure_within(e, r) / std::pow(r, space.dim_exponent()));
  cert.c3 = cert.c2 * size_ratio;

  if (!std::isfinite(cert.c1)) {
    cert.passed = false;
    cert.failure = "support of Λ_x escapes every ball B(x, c r) as r -> 0";
  } else if (!std::isfinite(cert.c2) || !std::isfinite(cert.c3)) {
    cert.passed = false;
    cert.failure = "size condition constants are unbounded";
  }
  cert.m = 0;
  while (std::isfinite(cert.c1) && cert.c1 > std::ldexp(1.0, cert.m)) ++cert.m;
  return cert;
}

}  // namespace hyperpot
