#include "hyperpot/error.hpp"
#include "hyperpot/parallel.hpp"
#include "hyperpot/verify.hpp"
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

std::vector<TestFunction> single(const GridFunction& f, const std::string& label = "f") { return {{label, f}}; }

PotentialConfig power_config(double alpha, double N) {
  PotentialConfig pc;
  pc.kernel = KernelSpec::power(alpha);
  pc.N = N;
  return pc;
}

}  // namespace

TEST_CASE("condition certificates") {
  for (const auto& t : {make_cyclic(6), make_cyclic(12), make_conjugacy(FiniteGroup::by_name("S3")),
                        make_conjugacy(FiniteGroup::by_name("Q8"))}) {
    const auto c = check_conditions(t);
    CHECK(c.passed);
    CHECK(c.c1 == 1.0);
    CHECK(c.m == 0);
    CHECK(std::isfinite(c.c2));
    CHECK(std::isfinite(c.c3));
    CHECK(c.D >= 1.0);
  }
  const auto cheb = check_conditions(make_chebyshev(64));
  CHECK(cheb.passed);
  CHECK(cheb.c1 <= 1.0);
  const auto bes = check_conditions(make_bessel({0.5, 64, 1.0}));
  CHECK(bes.passed);
  CHECK(std::isfinite(bes.c1));
  CHECK(std::isfinite(bes.c2));
  CHECK(std::isfinite(bes.c3));
  CHECK(bes.c1 <= std::pow(2.0, bes.m));

  const auto one = check_conditions(make_cyclic(1));
  CHECK(one.passed);
}

TEST_CASE("pointwise domination Mf <= c2 D^m M_rho f") {
  for (const auto& t : {make_cyclic(12), make_conjugacy(FiniteGroup::by_name("S3")), make_chebyshev(64),
                        make_bessel({0.5, 64, 1.0})}) {
    const auto cert = check_conditions(t);
    const auto suite = default_suite(t, {});
    const auto dom = check_domination(t, cert, suite);
    CHECK(dom.points_checked == suite.size() * t.window());
    CHECK(dom.violations == 0);
    CHECK(dom.worst_ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("weak type (1,1)") {
  const auto z6 = make_cyclic(6);
  const auto one = verify_weak_1_1(z6, single(GridFunction(z6.space_ptr(), 1.0)));
  CHECK(one.sup_ratio <= 1.0 + 1e-15);

  GridFunction spike(z6.space_ptr(), 0.0);
  spike[0] = 1.0;
  const auto rep = verify_weak_1_1(z6, single(spike));
  const auto mf = oracle::cyclic_maximal(6, {1, 0, 0, 0, 0, 0});
  const double ref = oracle::weak_type(mf, std::vector<double>(6, 1.0));
  CHECK(rep.sup_ratio == doctest::Approx(ref).epsilon(1e-12));

  std::vector<BoundednessReport> levels;
  for (std::size_t M : {64, 128}) {
    const auto t = make_chebyshev(M);
    levels.push_back(verify_weak_1_1(t, default_suite(t, {})));
  }
  const auto combined = combine_resolutions(levels);
  CHECK(combined.pass);
  CHECK(*combined.refinement_drift <= 0.2);
}

TEST_CASE("strong type (p,p)") {
  const auto z12 = make_cyclic(12);
  const auto suite = default_suite(z12, {});
  const auto inf_rep = verify_strong_pp(z12, suite, INFINITY);
  CHECK(inf_rep.sup_ratio <= 1.0 + 1e-15);
  CHECK(verify_strong_pp(z12, single(GridFunction(z12.space_ptr(), 1.0)), 2.0).sup_ratio ==
        doctest::Approx(1.0).epsilon(1e-14));

  const auto rep = verify_strong_pp(z12, suite, 2.0);
  double ref = 0.0;
  for (const auto& tf : suite) {
    const std::vector<double> f(tf.f.values().begin(), tf.f.values().end());
    const auto mf = oracle::cyclic_maximal(12, f);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      num += mf[i] * mf[i];
      den += f[i] * f[i];
    }
    ref = std::max(ref, std::sqrt(num / den));
  }
  CHECK(rep.sup_ratio == doctest::Approx(ref).epsilon(1e-13));
  CHECK(code_of([&] { verify_strong_pp(z12, suite, 1.0); }) == Errc::invalid_parameter);
}

TEST_CASE("combine_resolutions") {
  BoundednessReport a, b, c;
  a.sup_ratio = 1.0;
  a.pass = true;
  b.sup_ratio = 1.1;
  b.pass = true;
  c.sup_ratio = 1.5;
  c.pass = true;
  auto ab = combine_resolutions({a, b});
  CHECK(ab.pass);
  CHECK(*ab.refinement_drift == doctest::Approx(0.1));
  CHECK(ab.resolution_sups == std::vector<double>{1.0, 1.1});
  CHECK_FALSE(combine_resolutions({a, c}).pass);
  b.sup_ratio = INFINITY;
  CHECK_FALSE(combine_resolutions({a, b}).pass);
  a.constants["C"] = 1.0;
  c.sup_ratio = 1.05;
  c.constants["C"] = 2.0;
  const auto ac = combine_resolutions({a, c});
  CHECK(ac.constant_drift.at("C") == 1.0);
  CHECK_FALSE(ac.pass);
  CHECK(code_of([] { combine_resolutions({}); }) == Errc::empty_sample);
  const auto alone = combine_resolutions({a});
  CHECK_FALSE(alone.refinement_drift.has_value());
}

TEST_CASE("Hedberg estimates") {
  const double p = 2.0;
  const auto pc = power_config(0.25, 1.0);
  const NFunction phi = build_nfunction(pc.kernel, 1.0, p);

  const auto z6 = make_cyclic(6);
  const auto zero = verify_hedberg_estimates(z6, pc, phi, p, single(GridFunction(z6.space_ptr(), 0.0)));
  CHECK(zero.constants.at("C_ar") == 0.0);
  CHECK(zero.constants.at("C_br") == 0.0);
  CHECK(zero.constants.at("C_hedberg") == 0.0);

  std::vector<BoundednessReport> levels;
  for (std::size_t M : {64, 128}) {
    const auto t = make_chebyshev(M);
    levels.push_back(verify_hedberg_estimates(t, pc, phi, p, default_suite(t, {})));
    CHECK(levels.back().diagnostics.at("partition_residual") <= 1e-12);
    CHECK(levels.back().diagnostics.at("potential_form_gap") <= 1e-12);
  }
  const auto combined = combine_resolutions(levels);
  CHECK(combined.pass);
  for (const auto& [name, d] : combined.constant_drift) CHECK(d <= 0.2);
  CHECK(std::isfinite(combined.constants.at("C_a_over_A")));
}

TEST_CASE("maximal function is the same on a refined radius grid") {
  const auto t = make_chebyshev(64);
  const auto canonical = t.space().canonical_radii(0);
  std::vector<double> refined = canonical;
  oracle::Lcg rng{17};
  for (int i = 0; i < 300; ++i) refined.push_back(0.01 + rng.next() * (t.space().diameter() + 3));
  std::sort(refined.begin(), refined.end());
  for (const auto& tf : default_suite(t, {})) {
    const auto a = maximal_function(t, tf.f);
    const auto b = maximal_function(t, tf.f, refined);
    for (Index x = 0; x < t.size(); ++x) CHECK(a[x] == b[x]);
  }
}

TEST_CASE("theorem and corollary") {
  CHECK(corollary_exponent(0.25, 1.0, 2.0) == 4.0);
  CHECK(corollary_exponent(1.0, 3.0, 2.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(code_of([] { corollary_exponent(0.25, 1.0, 4.0); }) == Errc::hypothesis_violation);
  CHECK(code_of([] { corollary_exponent(1.5, 1.0, 2.0); }) == Errc::hypothesis_violation);

  // Φ(s) = (s/16)^4 for this kernel, so ‖g‖_Φ = ‖g‖_4 / 16
  const auto t = make_chebyshev(64);
  auto suite = default_suite(t, {});
  suite.push_back({"zero", GridFunction(t.space_ptr(), 0.0)});
  const auto th = verify_theorem(t, power_config(0.25, 1.0), 2.0, suite);
  const auto co = verify_corollary(t, 0.25, 2.0, suite);
  CHECK(th.records.size() + 1 == co.records.size());
  for (std::size_t i = 0; i < th.records.size(); ++i) {
    CHECK(th.records[i].label == co.records[i].label);
    CHECK(th.records[i].ratio == doctest::Approx(co.records[i].ratio / 16.0).epsilon(1e-6));
  }
  CHECK(th.pass);
  CHECK(co.pass);

  PotentialConfig pl;
  pl.kernel = KernelSpec::power_log(0.25, 0.5, 0.375);
  pl.N = 1.0;
  const auto thl = verify_theorem(t, pl, 2.0, default_suite(t, {}));
  CHECK(thl.pass);
  CHECK(thl.sup_ratio > 0.0);

  PotentialConfig bad = power_config(0.25, 1.0);
  bad.kernel.decay_exponent = 0.6;
  try {
    verify_theorem(t, bad, 2.0, suite);
    FAIL("expected a hypothesis violation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::hypothesis_violation);
    CHECK(std::string(e.what()).find("decay exponent") != std::string::npos);
  }
  CHECK(code_of([&] { verify_theorem(t, power_config(0.25, 1.0), 1.0, suite); }) == Errc::hypothesis_violation);
}

TEST_CASE("dilation family on the Bessel grid") {
  const auto t = make_bessel({0.5, 128, 1.0});
  const auto fam = dilation_family(t);
  CHECK(fam.size() == 4);
  const auto rep = verify_corollary(t, 1.0, 2.0, fam);
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : rep.records) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  CHECK(hi / lo <= 3.0);
}

TEST_CASE("suite construction") {
  const auto t = make_chebyshev(64);
  const auto a = default_suite(t, {}), b = default_suite(t, {});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == b[i].label);
    for (Index x = 0; x < t.size(); ++x) {
      CHECK(a[i].f[x] == b[i].f[x]);
      if (x >= t.window()) CHECK(a[i].f[x] == 0.0);
    }
  }
  SuiteOptions other;
  other.seed = 2;
  const auto c = default_suite(t, other);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (Index x = 0; x < t.size(); ++x) differs = differs || a[i].f[x] != c[i].f[x];
  CHECK(differs);

  SeededUniform u(5), v(5);
  for (int i = 0; i < 100; ++i) {
    const double x = u.next();
    CHECK(x == v.next());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto t = make_chebyshev(64);
  const auto suite = default_suite(t, {});
  set_parallelism(1);
  const auto a = verify_strong_pp(t, suite, 2.0);
  const auto ha = verify_hedberg_estimates(t, power_config(0.25, 1.0), build_nfunction(KernelSpec::power(0.25), 1, 2), 2.0, suite);
  set_parallelism(4);
  const auto b = verify_strong_pp(t, suite, 2.0);
  const auto hb = verify_hedberg_estimates(t, power_config(0.25, 1.0), build_nfunction(KernelSpec::power(0.25), 1, 2), 2.0, suite);
  set_parallelism(0);
  CHECK(a.sup_ratio == b.sup_ratio);
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].ratio == b.records[i].ratio);
  CHECK(ha.constants == hb.constants);
  CHECK(pairwise_sum(std::vector<double>{1, 2, 3, 4, 5}) == 15.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
