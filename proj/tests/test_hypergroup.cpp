#include "hyperpot/error.hpp"
#include "hyperpot/hypergroup.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

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

std::map<Index, double> as_map(std::span<const Atom> atoms) {
  std::map<Index, double> m;
  for (const Atom& a : atoms) m[a.point] += a.mass;
  return m;
}

GridFunction random_function(const ConvolutionTable& t, std::uint64_t seed, std::size_t support = 0) {
  oracle::Lcg rng{seed};
  GridFunction f(t.space_ptr(), 0.0);
  const std::size_t n = support ? support : t.size();
  for (Index i = 0; i < n; ++i) f[i] = rng.next();
  return f;
}

}  // namespace

TEST_CASE("cyclic structure constants") {
  const auto z6 = make_cyclic(6);
  CHECK(as_map(convolve_point_measures(z6, 2, 3)) == std::map<Index, double>{{5, 1.0}});
  for (Index x = 0; x < 6; ++x)
    for (Index y = 0; y < 6; ++y) CHECK(as_map(z6.atoms(x, y)) == std::map<Index, double>{{Index((x + y) % 6), 1.0}});
}

TEST_CASE("Chebyshev structure constants") {
  const auto t = make_chebyshev(64);
  CHECK(as_map(convolve_point_measures(t, 1, 1)) == std::map<Index, double>{{0, 0.5}, {2, 0.5}});
  for (Index k = 0; k <= 64; ++k) CHECK(as_map(t.atoms(0, k)) == std::map<Index, double>{{k, 1.0}});
  // cos(xθ)cos(yθ) = Σ_z c(x,y,z) cos(zθ)
  for (double th : {0.3, 1.1, 2.7})
    for (Index x = 0; x < t.window(); x += 3)
      for (Index y = 0; y < t.window(); y += 4) {
        double rhs = 0.0;
        for (const Atom& a : convolve_point_measures(t, x, y)) rhs += a.mass * std::cos(a.point * th);
        CHECK(rhs == doctest::Approx(std::cos(x * th) * std::cos(y * th)).epsilon(1e-12));
      }
  CHECK(code_of([&] { convolve_point_measures(t, 40, 40); }) == Errc::incomplete_table);
  CHECK(code_of([&] { convolve_point_measures(t, 0, 65); }) == Errc::invalid_parameter);
}

TEST_CASE("S3 class products") {
  const auto t = make_conjugacy(FiniteGroup::by_name("S3"));
  REQUIRE(t.size() == 3);
  // class order in the library: identity, transpositions, 3-cycles
  CHECK(t.space().haar(1) == 3.0);
  CHECK(t.space().haar(2) == 2.0);
  const auto tt = as_map(convolve_point_measures(t, 1, 1));
  CHECK(tt.size() == 2);
  CHECK(tt.at(0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(tt.at(2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto lib = as_map(t.atoms(Index(a), Index(b)));
      const auto ref = oracle::s3_class_product(a, b);
      CHECK(lib.size() == ref.size());
      for (const auto& [z, m] : ref) CHECK(lib.at(Index(z)) == doctest::Approx(m).epsilon(1e-14));
    }
}

TEST_CASE("conjugacy instances") {
  CHECK(make_conjugacy(FiniteGroup::by_name("Q8")).size() == 5);
  CHECK(FiniteGroup::by_name("Q8").conjugacy_classes().size() == 5);
  CHECK(FiniteGroup::symmetric(3).conjugacy_classes().size() == 3);
  // abelian group: singleton classes, same structure as the cyclic instance
  const auto z5c = make_conjugacy(FiniteGroup::by_name("Z5"));
  const auto z5 = make_cyclic(5);
  for (Index x = 0; x < 5; ++x)
    for (Index y = 0; y < 5; ++y) CHECK(as_map(z5c.atoms(x, y)) == as_map(z5.atoms(x, y)));
  CHECK(code_of([] { FiniteGroup::by_name("nope"); }) == Errc::invalid_parameter);
  CHECK(code_of([] { FiniteGroup({{0, 1}, {0, 1}}); }) == Errc::invalid_parameter);
  CHECK(code_of([] { make_conjugacy(FiniteGroup::cyclic(3), 0.0); }) == Errc::invalid_parameter);
}

TEST_CASE("axioms pass on exact instances and the Chebyshev window") {
  for (const auto& t : {make_cyclic(1), make_cyclic(6), make_cyclic(12), make_conjugacy(FiniteGroup::by_name("S3")),
                        make_conjugacy(FiniteGroup::by_name("Q8")), make_conjugacy(FiniteGroup::dihedral(5)),
                        make_chebyshev(64)}) {
    const AxiomReport rep = check_axioms(t);
    CHECK(rep.all_pass());
    for (const auto& c : rep.checks) CHECK(c.max_violation <= 1e-12);
  }
}

TEST_CASE("truncation breaks probability outside the window") {
  const auto t = make_chebyshev(16);
  std::vector<std::vector<Atom>> pairs(t.size() * t.size());
  for (Index x = 0; x < t.size(); ++x)
    for (Index y = 0; y < t.size(); ++y) {
      const auto a = t.atoms(x, y);
      pairs[x * t.size() + y].assign(a.begin(), a.end());
    }
  const ConvolutionTable full(t.space_ptr(), std::move(pairs), t.size());
  const AxiomReport rep = check_axioms(full);
  CHECK_FALSE(rep["probability"].pass);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("Haar solver") {
  for (const auto& t : {make_cyclic(6), make_cyclic(12), make_conjugacy(FiniteGroup::by_name("Q8"))}) {
    const auto h = solve_haar(t);
    for (Index i = 0; i < t.window(); ++i) CHECK(h[i] == t.space().haar(i));
  }
  const auto s3 = solve_haar(make_conjugacy(FiniteGroup::by_name("S3")));
  CHECK(s3 == std::vector<double>{1.0, 3.0, 2.0});

  const auto cheb = make_chebyshev(64);
  const auto h = solve_haar(cheb);
  CHECK(h[0] == 1.0);
  for (Index i = 1; i < h.size(); ++i) CHECK(h[i] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(haar_invariance_residual(cheb, h) <= 1e-10);

  // oracle: Σ_y c(x,y,z) λ(y) = λ(z) on pairs far from the boundary
  const Index q = Index(cheb.window() / 2);
  double worst = 0.0;
  for (Index x = 0; x < q; ++x)
    for (Index z = 0; z < q; ++z) {
      double lhs = 0.0;
      for (Index y = 0; y < cheb.window(); ++y)
        for (const Atom& a : cheb.atoms(x, y))
          if (a.point == z) lhs += a.mass * h[y];
      worst = std::max(worst, std::fabs(lhs - h[z]));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("Haar invariance residual detects wrong weights") {
  const auto t = make_cyclic(6);
  const std::vector<double> ok(6, 1.0);
  CHECK(haar_invariance_residual(t, ok) <= 1e-14);
  std::vector<double> bad = ok;
  bad[2] = 1.5;
  CHECK(haar_invariance_residual(t, bad) >= 0.4);
}

TEST_CASE("translation") {
  const auto z6 = make_cyclic(6);
  const auto f = random_function(z6, 11);
  for (Index x = 0; x < 6; ++x) {
    const auto tf = translate(z6, f, x);
    for (Index y = 0; y < 6; ++y) CHECK(tf[y] == f[(x + y) % 6]);
  }
  const auto cheb = make_chebyshev(32);
  const auto g = random_function(cheb, 5);
  CHECK(translate(cheb, g, 1)[1] == doctest::Approx(0.5 * g[0] + 0.5 * g[2]).epsilon(1e-15));
  const auto te = translate(cheb, g, 0);
  for (Index y = 0; y < cheb.size(); ++y) CHECK(te[y] == g[y]);
}

TEST_CASE("translation symmetry T^x f(y) = T^y f(x)") {
  for (const auto& t : {make_cyclic(9), make_conjugacy(FiniteGroup::by_name("Q8")), make_chebyshev(40),
                        make_bessel({0.5, 48, 1.0})}) {
    const auto f = random_function(t, 3);
    for (Index x = 0; x < t.window(); ++x) {
      const auto tx = translate(t, f, x);
      for (Index y = 0; y < t.window(); ++y) CHECK(std::fabs(tx[y] - translate(t, f, y)[x]) <= 1e-12);
    }
  }
}

TEST_CASE("Haar invariance of translation") {
  for (const auto& t : {make_cyclic(8), make_conjugacy(FiniteGroup::by_name("S3")), make_chebyshev(48)}) {
    const auto& s = t.space();
    const Index q = Index(t.truncated() ? t.window() / 2 : t.size());
    for (Index z = 0; z < q; ++z) {
      GridFunction f(t.space_ptr(), 0.0);
      f[z] = 1.0;
      for (Index x = 0; x < q; ++x) {
        const auto tf = translate(t, f, x);
        double lhs = 0.0;
        for (Index y = 0; y < t.size(); ++y) lhs += tf[y] * s.haar(y);
        CHECK(std::fabs(lhs - s.haar(z)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("convolution") {
  const auto z6 = make_cyclic(6);
  const auto f = random_function(z6, 1), g = random_function(z6, 2);
  const auto fg = convolve_functions(z6, f, g);
  for (Index x = 0; x < 6; ++x) {
    double ref = 0.0;
    for (Index u = 0; u < 6; ++u) ref += f[u] * g[(x + 6 - u) % 6];
    CHECK(fg[x] == doctest::Approx(ref).epsilon(1e-14));
  }

  // 1 ∗ χ_B(e,r) = λB(e,r)
  for (const auto& t : {make_cyclic(10), make_conjugacy(FiniteGroup::by_name("S3")), make_chebyshev(64)}) {
    const auto& s = t.space();
    const GridFunction one(t.space_ptr(), 1.0);
    for (double r : {0.5, 1.5, 3.5}) {
      GridFunction chi(t.space_ptr(), 0.0);
      for (Index y : oracle::ball(s, s.identity(), r)) chi[y] = 1.0;
      const auto c = convolve_functions(t, one, chi);
      for (Index x = 0; x < t.window(); ++x)
        CHECK(c[x] == doctest::Approx(oracle::ball_measure(s, s.identity(), r)).epsilon(1e-14));
    }
  }

  // spike at e acts as the identity
  const auto cheb = make_chebyshev(32);
  GridFunction delta(cheb.space_ptr(), 0.0);
  delta[0] = 1.0;
  const auto h = random_function(cheb, 9);
  const auto dh = convolve_functions(cheb, h, delta);
  for (Index x = 0; x < cheb.size(); ++x) CHECK(dh[x] == doctest::Approx(h[x]).epsilon(1e-15));
}

TEST_CASE("convolution commutes for symmetric functions") {
  auto symmetric = [](const ConvolutionTable& t, std::uint64_t seed, std::size_t support) {
    const auto raw = random_function(t, seed, support);
    GridFunction f(t.space_ptr(), 0.0);
    for (Index i = 0; i < t.size(); ++i) f[i] = 0.5 * (raw[i] + raw[t.space().involution(i)]);
    return f;
  };
  for (const auto& t : {make_cyclic(11), make_conjugacy(FiniteGroup::by_name("Q8")), make_chebyshev(64)}) {
    const std::size_t support = t.truncated() ? t.size() / 8 : 0;
    const auto f = symmetric(t, 21, support), g = symmetric(t, 22, support);
    const auto fg = convolve_functions(t, f, g), gf = convolve_functions(t, g, f);
    const Index q = Index(t.truncated() ? t.size() / 4 : t.size());
    for (Index x = 0; x < q; ++x) CHECK(std::fabs(fg[x] - gf[x]) <= 1e-12);
  }
}

TEST_CASE("positivity and linearity") {
  const auto t = make_chebyshev(40);
  const auto f = random_function(t, 31), g = random_function(t, 32), h = random_function(t, 33);
  const auto fg = convolve_functions(t, f, g);
  for (Index x = 0; x < t.size(); ++x) CHECK(fg[x] >= 0.0);

  const auto lin = convolve_functions(t, 2.0 * f + 3.0 * h, g);
  const auto hg = convolve_functions(t, h, g);
  for (Index x = 0; x < t.size(); ++x) CHECK(lin[x] == doctest::Approx(2 * fg[x] + 3 * hg[x]).epsilon(1e-13));
  const auto tl = translate(t, 2.0 * f + 3.0 * h, 7);
  const auto tf = translate(t, f, 7), th = translate(t, h, 7);
  for (Index y = 0; y < t.size(); ++y) CHECK(tl[y] == doctest::Approx(2 * tf[y] + 3 * th[y]).epsilon(1e-13));
}

TEST_CASE("grid function checks") {
  const auto t = make_cyclic(4);
  const auto u = make_chebyshev(4), v = make_cyclic(5);  // 5 points each, different metrics
  CHECK(code_of([&] { GridFunction f(t.space_ptr(), std::vector<double>{1, 2}); }) == Errc::space_mismatch);
  CHECK(code_of([&] { GridFunction f(t.space_ptr(), std::vector<double>{1, NAN, 0, 0}); }) ==
        Errc::invalid_parameter);
  CHECK(code_of([&] { convolve_functions(v, GridFunction(v.space_ptr()), GridFunction(u.space_ptr())); }) ==
        Errc::space_mismatch);
  // structurally equal spaces are interchangeable
  CHECK(convolve_functions(t, GridFunction(t.space_ptr(), 1.0), GridFunction(make_cyclic(4).space_ptr(), 1.0))[0] == 4.0);
}

TEST_CASE("instance parameter errors") {
  CHECK(code_of([] { make_cyclic(0); }) == Errc::invalid_parameter);
  CHECK(code_of([] { make_chebyshev(3); }) == Errc::invalid_parameter);
  CHECK(code_of([] { make_bessel({-0.5, 64, 1.0}); }) == Errc::invalid_parameter);
  CHECK(code_of([] { make_bessel({0.5, 8, 1.0}); }) == Errc::invalid_parameter);
  CHECK(code_of([] { make_bessel({0.5, 64, 0.0}); }) == Errc::invalid_parameter);
  CHECK(make_cyclic(1).size() == 1);
}

TEST_CASE("Bessel instance") {
  const double a = 0.5;
  const auto t = make_bessel({a, 64, 1.0});
  const auto& s = t.space();
  CHECK(s.dim_exponent() == 2 * a + 2);

  // identity
  const auto f = random_function(t, 4);
  const auto t0 = translate(t, f, 0);
  for (Index y = 0; y < t.size(); ++y) CHECK(t0[y] == f[y]);

  // complete pairs are probability measures; commutativity
  for (Index x = 0; x < t.window(); ++x)
    for (Index y = 0; y < t.window(); ++y) {
      double sum = 0.0;
      for (const Atom& at : t.atoms(x, y)) sum += at.mass;
      if (t.pair_complete(x, y)) CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(as_map(t.atoms(x, y)) == as_map(t.atoms(y, x)));
    }

  // cell masses against direct angular quadrature
  for (auto [x, y] : {std::pair{3, 5}, {7, 7}, {10, 2}, {12, 20}}) {
    const auto lib = as_map(t.atoms(Index(x), Index(y)));
    for (const auto& [z, m] : lib) {
      const double lo = z == 0 ? 0.0 : z - 0.5;
      const double hi = z + 0.5;
      const double ref = oracle::bessel_cell_mass(a, x, y, lo, z == Index(x + y) ? 1e9 : hi);
      CHECK(m == doctest::Approx(ref).epsilon(1e-4).scale(1.0));
    }
  }

  // Haar grows like x^{2α+1}; ball measure like r^N
  CHECK(s.haar(0) == 1.0);
  const double c40 = s.haar(40) / std::pow(40.0, 2 * a + 1);
  for (Index k : {10, 20, 30}) CHECK(s.haar(k) / std::pow(double(k), 2 * a + 1) == doctest::Approx(c40).epsilon(0.05));
  const double ref = oracle::ball_measure(s, 0, 60.5) / std::pow(60.5, 3.0);
  for (double r : {8.5, 16.5, 32.5}) CHECK(oracle::ball_measure(s, 0, r) / std::pow(r, 3.0) == doctest::Approx(ref).epsilon(0.2));
}
