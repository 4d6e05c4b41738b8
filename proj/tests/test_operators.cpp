#include "hyperpot/error.hpp"
#include "hyperpot/operators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hyperpot;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::config_error;
}

GridFunction random_function(const ConvolutionTable& t, std::uint64_t seed, std::size_t support = 0) {
  oracle::Lcg rng{seed};
  GridFunction f(t.space_ptr(), 0.0);
  const std::size_t n = support ? support : t.size();
  for (Index i = 0; i < n; ++i) f[i] = rng.next();
  return f;
}

PotentialConfig power_config(double alpha, double N) {
  PotentialConfig pc;
  pc.kernel = KernelSpec::power(alpha);
  pc.N = N;
  return pc;
}

ConvolutionTable rescaled(const ConvolutionTable& t, double rho_scale, double haar_scale) {
  SpaceData d = t.space().data();
  for (double& v : d.rho) v *= rho_scale;
  for (double& v : d.haar) v *= haar_scale;
  d.quasi_const.reset();
  return t.with_space(std::make_shared<const DiscreteSpace>(d));
}

}  // namespace

TEST_CASE("maximal function of a constant") {
  for (const auto& t : {make_cyclic(6), make_conjugacy(FiniteGroup::by_name("S3")), make_chebyshev(64),
                        make_bessel({0.5, 64, 1.0})}) {
    const auto mf = maximal_function(t, GridFunction(t.space_ptr(), 1.0));
    for (Index x = 0; x < t.window(); ++x) CHECK(mf[x] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("maximal function of a ball indicator at e") {
  for (const auto& t : {make_cyclic(12), make_chebyshev(32)}) {
    for (double r0 : {1.5, 3.5}) {
      GridFunction chi(t.space_ptr(), 0.0);
      for (Index y : oracle::ball(t.space(), 0, r0)) chi[y] = 1.0;
      CHECK(maximal_function(t, chi)[0] == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("maximal function on cyclic groups matches brute force") {
  for (std::size_t n : {6, 12}) {
    const auto t = make_cyclic(n);
    GridFunction spike(t.space_ptr(), 0.0);
    spike[0] = 1.0;
    for (const auto& f : {spike, random_function(t, n), -2.0 * random_function(t, n + 1)}) {
      const auto mf = maximal_function(t, f);
      const auto ref = oracle::cyclic_maximal(n, std::vector<double>(f.values().begin(), f.values().end()));
      for (Index x = 0; x < n; ++x) CHECK(mf[x] == doctest::Approx(ref[x]).epsilon(1e-14));
    }
  }
}

TEST_CASE("centered maximal function") {
  for (const auto& t : {make_cyclic(6), make_chebyshev(32), make_conjugacy(FiniteGroup::by_name("Q8"))}) {
    const auto one = rho_maximal_function(t.space(), GridFunction(t.space_ptr(), 1.0));
    for (Index x = 0; x < t.size(); ++x) CHECK(one[x] == doctest::Approx(1.0).epsilon(1e-14));
    const auto f = random_function(t, 77);
    const auto mf = rho_maximal_function(t.space(), f);
    const auto ref = oracle::rho_maximal(t.space(), std::vector<double>(f.values().begin(), f.values().end()));
    for (Index x = 0; x < t.size(); ++x) {
      CHECK(mf[x] >= f[x]);
      CHECK(mf[x] == doctest::Approx(ref[x]).epsilon(1e-14));
    }
  }
}

TEST_CASE("sublinearity of both maximal operators") {
  const auto t = make_chebyshev(48);
  const auto f = random_function(t, 1), g = -1.0 * random_function(t, 2);
  const auto sum = f + g;
  const auto mf = maximal_function(t, f), mg = maximal_function(t, g), ms = maximal_function(t, sum);
  const auto rf = rho_maximal_function(t.space(), f), rg = rho_maximal_function(t.space(), g),
             rs = rho_maximal_function(t.space(), sum);
  const auto mc = maximal_function(t, -2.5 * f), rc = rho_maximal_function(t.space(), -2.5 * f);
  for (Index x = 0; x < t.size(); ++x) {
    CHECK(ms[x] <= (mf[x] + mg[x]) * (1 + 1e-14));
    CHECK(rs[x] <= (rf[x] + rg[x]) * (1 + 1e-14));
    CHECK(mc[x] == doctest::Approx(2.5 * mf[x]).epsilon(1e-14));
    CHECK(rc[x] == doctest::Approx(2.5 * rf[x]).epsilon(1e-14));
  }
}

TEST_CASE("potential of a point mass on Z4") {
  const auto t = make_cyclic(4);
  GridFunction delta(t.space_ptr(), 0.0);
  delta[0] = 1.0 / t.space().haar(0);
  // a = r^(1/2), N = 1; distances from e are 0,1,2,1 and h = 1
  const auto u = potential(t, power_config(0.5, 1.0), delta);
  const std::vector<double> expected = {1.0, 1.0, std::sqrt(2.0) / 2.0, 1.0};
  for (Index x = 0; x < 4; ++x) CHECK(u[x] == doctest::Approx(expected[x]).epsilon(1e-15));

  PotentialConfig zero = power_config(0.5, 1.0);
  zero.singularity = SingularityPolicy::zero;
  CHECK(potential(t, zero, delta)[0] == 0.0);
  PotentialConfig wide = power_config(0.5, 1.0);
  wide.smoothing_scale = 4.0;
  CHECK(potential(t, wide, delta)[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("potential identities") {
  const auto z6 = make_cyclic(6);
  const auto pc = power_config(0.25, 1.0);
  const auto f = random_function(z6, 5), g = random_function(z6, 6);
  const auto lin = potential(z6, pc, 2.0 * f + 3.0 * g);
  const auto If = potential(z6, pc, f), Ig = potential(z6, pc, g);
  for (Index x = 0; x < 6; ++x) CHECK(lin[x] == doctest::Approx(2 * If[x] + 3 * Ig[x]).epsilon(1e-14));

  // I(τ_s f)(x) = (I f)(x + s) with τ_s f(y) = f(y + s)
  for (Index s = 1; s < 6; ++s) {
    GridFunction shifted(z6.space_ptr(), 0.0);
    for (Index y = 0; y < 6; ++y) shifted[y] = f[(y + s) % 6];
    const auto Is = potential(z6, pc, shifted);
    for (Index x = 0; x < 6; ++x) CHECK(std::fabs(Is[x] - If[(x + s) % 6]) <= 1e-12);
  }

  for (const auto& t : {make_chebyshev(40), make_bessel({0.5, 48, 1.0})}) {
    const auto u = potential(t, power_config(0.5, t.space().dim_exponent()), random_function(t, 8));
    for (Index x = 0; x < t.size(); ++x) CHECK(u[x] >= 0.0);
  }
}

TEST_CASE("potential errors") {
  const auto z6 = make_cyclic(6);
  const GridFunction f(z6.space_ptr(), 1.0);
  CHECK(code_of([&] { potential(z6, power_config(0.25, 2.0), f); }) == Errc::invalid_parameter);

  SpaceData d;
  d.n_points = 2;
  d.rho = {0.0, 1e-200, 1e-200, 0.0};
  d.haar = {1.0, 1.0};
  d.involution = {0, 1};
  d.dim_exponent = 2.0;
  const auto tiny = make_cyclic(2).with_space(std::make_shared<const DiscreteSpace>(d));
  CHECK(code_of([&] { potential(tiny, power_config(0.5, 2.0), GridFunction(tiny.space_ptr(), 1.0)); }) ==
        Errc::overflow);
}

TEST_CASE("Riesz potential") {
  const auto t = make_chebyshev(32);
  const auto f = random_function(t, 3);
  const auto r = riesz_potential(t, 0.25, f);
  const auto p = potential(t, power_config(0.25, 1.0), f);
  for (Index x = 0; x < t.size(); ++x) CHECK(r[x] == p[x]);
  CHECK(code_of([&] { riesz_potential(t, 0.0, f); }) == Errc::invalid_parameter);
  CHECK(code_of([&] { riesz_potential(t, 1.0, f); }) == Errc::invalid_parameter);

  // α → N⁻: ρ^{α−N} → 1 on distances >= 1
  const auto k = potential_kernel(t.space(), power_config(1.0 - 1e-9, 1.0));
  for (Index y = 1; y < t.size(); ++y) CHECK(std::fabs(k[y] - 1.0) <= 1e-8);

  // spike at e on Z6 gives back the kernel
  const auto z6 = make_cyclic(6);
  GridFunction delta(z6.space_ptr(), 0.0);
  delta[0] = 1.0;
  const auto kz = potential_kernel(z6.space(), power_config(0.5, 1.0));
  const auto u = riesz_potential(z6, 0.5, delta);
  for (Index x = 0; x < 6; ++x) CHECK(u[x] == doctest::Approx(kz[x]).epsilon(1e-15));
}

TEST_CASE("Hedberg split") {
  for (const auto& t : {make_cyclic(6), make_conjugacy(FiniteGroup::by_name("S3")), make_chebyshev(32)}) {
    const auto pc = power_config(0.25, 1.0);
    const auto f = random_function(t, 12, t.truncated() ? t.window() : 0);
    const auto u = potential(t, pc, f);
    const auto k = potential_kernel(t.space(), pc);
    for (Index x = 0; x < t.window(); ++x) {
      const auto whole = hedberg_split(t, pc, f, x, t.space().diameter() + 1.0);
      CHECK(whole.far == 0.0);
      CHECK(whole.near == doctest::Approx(u[x]).epsilon(1e-12));
      const auto tiny = hedberg_split(t, pc, f, x, 0.5 * t.space().min_positive_distance(0));
      CHECK(tiny.near == doctest::Approx(k[0] * f[x] * t.space().haar(0)).epsilon(1e-15));
      CHECK(tiny.total() == doctest::Approx(u[x]).epsilon(1e-12));

      const auto prof = hedberg_profile(t, k, f.values(), x);
      for (std::size_t j = 0; j < prof.radii.size(); ++j) {
        const auto s = hedberg_split(t, pc, f, x, prof.radii[j]);
        CHECK(std::fabs(s.near - prof.near[j]) <= 1e-12 * std::fabs(prof.total));
        CHECK(std::fabs(s.far - prof.far[j]) <= 1e-12 * std::fabs(prof.total));
        CHECK(std::fabs(prof.near[j] + prof.far[j] - prof.total) <= 1e-12 * std::fabs(prof.total));
        if (j > 0) CHECK(prof.near[j] >= prof.near[j - 1]);
      }
    }
  }
  const auto z6 = make_cyclic(6);
  CHECK(code_of([&] { hedberg_split(z6, power_config(0.25, 1.0), GridFunction(z6.space_ptr()), 0, 0.0); }) ==
        Errc::invalid_radius);
}

TEST_CASE("Hedberg pointwise ratio") {
  const double p = 2.0;
  const auto pc = power_config(0.25, 1.0);
  const NFunction phi = build_nfunction(pc.kernel, 1.0, p);
  auto sup_ratio = [&](const ConvolutionTable& t) {
    GridFunction f(t.space_ptr(), 0.0);
    f[0] = 1.0;
    f *= 1.0 / lp_norm(f, p);
    double s = 0.0;
    for (Index x = 0; x < t.size(); ++x) s = std::max(s, hedberg_pointwise_ratio(t, pc, phi, p, f, x));
    return s;
  };
  const auto z6 = make_cyclic(6);
  const double r6 = sup_ratio(z6);
  CHECK(std::isfinite(r6));
  CHECK(r6 > 0.0);
  // Z12 with half the spacing and half the cell mass refines Z6
  const double r12 = sup_ratio(rescaled(make_cyclic(12), 0.5, 0.5));
  CHECK(r12 == doctest::Approx(r6).epsilon(0.2));

  CHECK(hedberg_pointwise_ratio(z6, pc, phi, p, GridFunction(z6.space_ptr(), 0.0), 2) == 0.0);
  const auto f = random_function(z6, 4);
  for (Index x = 0; x < 6; ++x)
    CHECK(hedberg_pointwise_ratio(z6, pc, phi, p, f, x) == hedberg_pointwise_ratio(z6, pc, phi, p, f.abs(), x));
}
