#include "hyperpot/error.hpp"
#include "hyperpot/hypergroup.hpp"

#include "hyperpot/parallel.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>

namespace hyperpot {

namespace {

std::vector<double> cyclic_distances(std::size_t n) {
  std::vector<double> rho(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t d = i > j ? i - j : j - i;
      rho[i * n + j] = double(std::min(d, n - d));
    }
  return rho;
}

std::vector<double> line_distances(std::size_t n, double step) {
  std::vector<double> rho(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho[i * n + j] = step * double(i > j ? i - j : j - i);
  return rho;
}

std::vector<Index> identity_involution(std::size_t n) {
  std::vector<Index> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = Index(i);
  return inv;
}

// μ_{x,y}{w : w < s} for the Bessel-Kingman convolution of point masses at
// x, y > 0. With cos θ = (x² + y² − s²)/(2xy) and v = sin²(θ/2) the angular
// weight sin^{2α}θ dθ becomes a symmetric beta density in v.
double bessel_cdf(double alpha, double x, double y, double s) {
  const double d = x - y;
  const double v = (s * s - d * d) / (4.0 * x * y);
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  return boost::math::ibeta(alpha + 0.5, alpha + 0.5, v);
}

}  // namespace

ConvolutionTable make_cyclic(std::size_t n) {
  if (n == 0) throw Error(Errc::invalid_parameter, "cyclic instance needs n >= 1");
  SpaceData data;
  data.n_points = n;
  data.rho = cyclic_distances(n);
  data.haar.assign(n, 1.0);
  data.identity = 0;
  data.involution.resize(n);
  for (std::size_t i = 0; i < n; ++i) data.involution[i] = Index((n - i) % n);
  data.dim_exponent = 1.0;
  auto space = std::make_shared<const DiscreteSpace>(std::move(data));

  std::vector<std::vector<Atom>> atoms(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) atoms[x * n + y] = {{Index((x + y) % n), 1.0}};
  return ConvolutionTable(std::move(space), std::move(atoms), n);
}

ConvolutionTable make_conjugacy(const FiniteGroup& group, double metric_scale) {
  if (!(metric_scale > 0.0)) throw Error(Errc::invalid_parameter, "metric scale must be positive");
  const auto classes = group.conjugacy_classes();
  const std::size_t k = classes.size();
  std::vector<Index> class_of(group.order());
  for (std::size_t c = 0; c < k; ++c)
    for (Index g : classes[c]) class_of[g] = Index(c);

  SpaceData data;
  data.n_points = k;
  data.rho.assign(k * k, metric_scale);
  for (std::size_t i = 0; i < k; ++i) data.rho[i * k + i] = 0.0;
  data.haar.assign(k, 1.0);
  data.identity = 0;
  data.involution.resize(k);
  for (std::size_t c = 0; c < k; ++c) data.involution[c] = class_of[group.inverse(classes[c].front())];
  data.dim_exponent = 1.0;
  // placeholder weights must already respect the involution
  for (std::size_t c = 0; c < k; ++c) data.haar[c] = double(classes[c].size());
  auto provisional = std::make_shared<const DiscreteSpace>(data);

  std::vector<std::vector<Atom>> atoms(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> count(k, 0.0);
      for (Index a : classes[i])
        for (Index b : classes[j]) count[class_of[group.multiply(a, b)]] += 1.0;
      const double total = double(classes[i].size() * classes[j].size());
      for (std::size_t l = 0; l < k; ++l)
        if (count[l] > 0.0) atoms[i * k + j].push_back({Index(l), count[l] / total});
    }
  }
  ConvolutionTable table(provisional, std::move(atoms), k);
  auto haar = solve_haar(table);
  return table.with_space(std::make_shared<const DiscreteSpace>(provisional->with_haar(std::move(haar))));
}

ConvolutionTable make_chebyshev(std::size_t M) {
  if (M < 4) throw Error(Errc::invalid_parameter, "Chebyshev instance needs M >= 4");
  const std::size_t n = M + 1;
  SpaceData data;
  data.n_points = n;
  data.rho = line_distances(n, 1.0);
  data.haar.assign(n, 2.0);
  data.haar[0] = 1.0;
  data.identity = 0;
  data.involution = identity_involution(n);
  data.dim_exponent = 1.0;
  data.quasi_const = 1.0;
  auto space = std::make_shared<const DiscreteSpace>(std::move(data));

  std::vector<std::vector<Atom>> atoms(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto& list = atoms[a * n + b];
      if (a == 0 || b == 0) {
        list = {{Index(a + b), 1.0}};
        continue;
      }
      list.push_back({Index(a > b ? a - b : b - a), 0.5});
      if (a + b <= M) list.push_back({Index(a + b), 0.5});
    }
  }
  return ConvolutionTable(std::move(space), std::move(atoms), M / 2 + 1);
}

ConvolutionTable make_bessel(const BesselOptions& opt) {
  if (!(opt.alpha > -0.5)) throw Error(Errc::invalid_parameter, "Bessel order must exceed -1/2");
  if (opt.grid_size < 16) throw Error(Errc::invalid_parameter, "Bessel grid needs at least 16 points");
  if (!(opt.step > 0.0)) throw Error(Errc::invalid_parameter, "Bessel grid step must be positive");
  const std::size_t n = opt.grid_size;

  // grid point z carries the cell [z - ½, z + ½) (the cell of 0 is [0, ½));
  // the table is scale free, only the metric sees `step`
  std::vector<std::vector<Atom>> atoms(n * n);
  parallel_for(n, [&](std::size_t x) {
    for (std::size_t y = 0; y < n; ++y) {
      std::vector<Atom>& list = atoms[x * n + y];
      if (x == 0 || y == 0) {
        list = {{Index(x + y), 1.0}};
        continue;
      }
      const std::size_t lo = x > y ? x - y : y - x;
      const std::size_t hi = std::min(x + y, n - 1);
      double below = 0.0;
      for (std::size_t z = lo; z <= hi; ++z) {
        const double upper = z == x + y ? 1.0 : bessel_cdf(opt.alpha, double(x), double(y), double(z) + 0.5);
        if (upper > below) list.push_back({Index(z), upper - below});
        below = upper;
      }
    }
  });

  SpaceData data;
  data.n_points = n;
  data.rho = line_distances(n, opt.step);
  // discrete Haar weight λ(x) = 1 / c(x, x~, e); grows like x^{2α+1}
  data.haar.resize(n);
  for (std::size_t x = 0; x < n; ++x) data.haar[x] = 1.0 / atoms[x * n + x].front().mass;
  data.identity = 0;
  data.involution = identity_involution(n);
  data.dim_exponent = 2.0 * opt.alpha + 2.0;
  data.quasi_const = 1.0;
  auto space = std::make_shared<const DiscreteSpace>(std::move(data));

  const std::size_t window = (n - 1) / 2 + 1;
  return ConvolutionTable(std::move(space), std::move(atoms), window);
}

}  // namespace hyperpot
