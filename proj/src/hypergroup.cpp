#include "hyperpot/hypergroup.hpp"

#include "hyperpot/error.hpp"
#include "hyperpot/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hyperpot {

// --- GridFunction ------------------------------------------------------------

GridFunction::GridFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw Error(Errc::invalid_parameter, "grid function needs a space");
  if (values_.size() != space_->size())
    throw Error(Errc::space_mismatch, "grid function length differs from the number of points");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(Errc::invalid_parameter, "grid function values must be finite");
}

GridFunction::GridFunction(SpacePtr space, double fill)
    : GridFunction(space, std::vector<double>(space ? space->size() : 0, fill)) {}

GridFunction GridFunction::abs() const {
  GridFunction out = *this;
  for (double& v : out.values_) v = std::fabs(v);
  return out;
}

GridFunction& GridFunction::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_space(a.space(), b.space());
  GridFunction out = a;
  for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] += b.values_[i];
  return out;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a.get() != b.get() && (!a || !b || a->size() != b->size() || a->data().rho != b->data().rho))
    throw Error(Errc::space_mismatch, "operands live on different spaces");
}

// --- ConvolutionTable --------------------------------------------------------

ConvolutionTable::ConvolutionTable(SpacePtr space, std::vector<std::vector<Atom>> pair_atoms,
                                   std::size_t window)
    : space_(std::move(space)), window_(window) {
  const std::size_t n = space_->size();
  if (pair_atoms.size() != n * n) throw Error(Errc::incomplete_table, "table must list all n^2 pairs");
  if (window_ == 0 || window_ > n) throw Error(Errc::invalid_parameter, "window out of range");
  if (space_->identity() != 0 && window_ < n)
    throw Error(Errc::invalid_parameter, "truncated tables need identity at index 0");

  offsets_.reserve(n * n + 1);
  pair_mass_.reserve(n * n);
  offsets_.push_back(0);
  for (auto& list : pair_atoms) {
    std::sort(list.begin(), list.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
    double mass = 0.0;
    for (std::size_t k = 0; k < list.size();) {
      Atom merged = list[k];
      if (merged.point >= n) throw Error(Errc::invalid_parameter, "atom outside the space");
      std::size_t j = k + 1;
      for (; j < list.size() && list[j].point == merged.point; ++j) merged.mass += list[j].mass;
      if (!(merged.mass >= 0.0) || !std::isfinite(merged.mass))
        throw Error(Errc::invalid_parameter, "atom masses must be nonnegative");
      if (merged.mass > 0.0) {
        atoms_.push_back(merged);
        mass += merged.mass;
      }
      k = j;
    }
    pair_mass_.push_back(mass);
    offsets_.push_back(atoms_.size());
    list = {};
  }
}

bool ConvolutionTable::pair_complete(Index x, Index y) const noexcept {
  return std::fabs(pair_mass(x, y) - 1.0) <= 1e-9;
}

ConvolutionTable ConvolutionTable::with_space(SpacePtr space) const {
  if (!space || space->size() != size()) throw Error(Errc::space_mismatch, "replacement space has a different size");
  ConvolutionTable copy = *this;
  copy.space_ = std::move(space);
  return copy;
}

std::vector<Atom> convolve_point_measures(const ConvolutionTable& table, Index x, Index y) {
  if (x >= table.size() || y >= table.size()) throw Error(Errc::invalid_parameter, "point index out of range");
  if (!table.pair_complete(x, y))
    throw Error(Errc::incomplete_table, "pair (" + std::to_string(x) + "," + std::to_string(y) +
                                            ") is cut by truncation");
  const auto a = table.atoms(x, y);
  return {a.begin(), a.end()};
}

// --- axioms ------------------------------------------------------------------

namespace {

double measure_distance(std::span<const Atom> a, std::span<const Atom> b) {
  // both sorted by point
  double worst = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].point < b[j].point)) {
      worst = std::max(worst, a[i++].mass);
    } else if (i == a.size() || b[j].point < a[i].point) {
      worst = std::max(worst, b[j++].mass);
    } else {
      worst = std::max(worst, std::fabs(a[i++].mass - b[j++].mass));
    }
  }
  return worst;
}

void record(AxiomCheck& check, double violation, double tolerance) {
  ++check.checked;
  check.max_violation = std::max(check.max_violation, violation);
  if (violation > tolerance) check.pass = false;
}

}  // namespace

bool AxiomReport::all_pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

const AxiomCheck& AxiomReport::operator[](const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error(Errc::invalid_parameter, "no axiom check named " + name);
}

AxiomReport check_axioms(const ConvolutionTable& table, double tolerance) {
  AxiomReport report;
  report.checks = {AxiomCheck{"probability"}, AxiomCheck{"commutativity"}, AxiomCheck{"identity"},
                   AxiomCheck{"involution"},  AxiomCheck{"support"},       AxiomCheck{"associativity"}};
  auto& [prob, comm, ident, invol, supp, assoc] = report.checks;

  const DiscreteSpace& space = table.space();
  const std::size_t n = table.size();
  const Index w = Index(table.window());
  const Index e = space.identity();

  for (Index x = 0; x < w; ++x) {
    for (Index y = 0; y < w; ++y) {
      const auto xy = table.atoms(x, y);
      record(prob, std::fabs(table.pair_mass(x, y) - 1.0), tolerance);
      record(comm, measure_distance(xy, table.atoms(y, x)), tolerance);

      const Index xi = space.involution(x), yi = space.involution(y);
      if (xi < w && yi < w) {
        std::vector<Atom> pushed;
        pushed.reserve(xy.size());
        for (const Atom& a : xy) pushed.push_back({space.involution(a.point), a.mass});
        std::sort(pushed.begin(), pushed.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
        record(invol, measure_distance(pushed, table.atoms(yi, xi)), tolerance);
      }

      double mass_at_e = 0.0;
      for (const Atom& a : xy)
        if (a.point == e) mass_at_e = a.mass;
      const bool expect = (y == xi);
      const bool has = mass_at_e > tolerance;
      record(supp, expect == has ? 0.0 : (expect ? 1.0 : mass_at_e), tolerance);
    }
    const Atom unit{x, 1.0};
    record(ident, measure_distance(table.atoms(e, x), std::span(&unit, 1)), tolerance);
    record(ident, measure_distance(table.atoms(x, e), std::span(&unit, 1)), tolerance);
  }

  // (δx∗δy)∗δz against δx∗(δy∗δz) on triples whose expansions stay complete
  std::vector<double> left(n, 0.0), right(n, 0.0);
  for (Index x = 0; x < w; ++x) {
    for (Index y = 0; y < w; ++y) {
      if (!table.pair_complete(x, y)) continue;
      for (Index z = 0; z < w; ++z) {
        if (!table.pair_complete(y, z)) continue;
        bool complete = true;
        for (const Atom& a : table.atoms(x, y)) complete = complete && table.pair_complete(a.point, z);
        for (const Atom& a : table.atoms(y, z)) complete = complete && table.pair_complete(x, a.point);
        if (!complete) continue;
        std::fill(left.begin(), left.end(), 0.0);
        std::fill(right.begin(), right.end(), 0.0);
        for (const Atom& a : table.atoms(x, y))
          for (const Atom& b : table.atoms(a.point, z)) left[b.point] += a.mass * b.mass;
        for (const Atom& a : table.atoms(y, z))
          for (const Atom& b : table.atoms(x, a.point)) right[b.point] += a.mass * b.mass;
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::fabs(left[k] - right[k]));
        record(assoc, worst, tolerance);
      }
    }
  }
  return report;
}

// --- Haar --------------------------------------------------------------------

namespace {

double mass_at(std::span<const Atom> atoms, Index z) {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), z, [](const Atom& a, Index p) { return a.point < p; });
  return (it != atoms.end() && it->point == z) ? it->mass : 0.0;
}

// Equation (x, z) is usable when every y contributing to Σ_y c(x,y,z) λ(y)
// lies in the window and its pair is complete.
bool usable_equation(const ConvolutionTable& table, Index x, Index z) {
  const std::size_t w = table.window();
  for (Index y = 0; y < table.size(); ++y) {
    if (mass_at(table.atoms(x, y), z) == 0.0) continue;
    if (y >= w || !table.pair_complete(x, y)) return false;
  }
  return true;
}

}  // namespace

std::vector<double> solve_haar(const ConvolutionTable& table) {
  const Index w = Index(table.window());
  const Index e = table.space().identity();
  if (e >= w) throw Error(Errc::no_haar_found, "identity lies outside the window");

  std::vector<std::pair<Index, Index>> equations;
  for (Index x = 0; x < w; ++x)
    for (Index z = 0; z < w; ++z)
      if (usable_equation(table, x, z)) equations.emplace_back(x, z);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(equations.size() + 1), w);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows());
  for (std::size_t row = 0; row < equations.size(); ++row) {
    const auto [x, z] = equations[row];
    for (Index y = 0; y < w; ++y) a(Eigen::Index(row), y) += mass_at(table.atoms(x, y), z);
    a(Eigen::Index(row), z) -= 1.0;
  }
  a(a.rows() - 1, e) = 1.0;
  b(b.rows() - 1) = 1.0;

  // discrete hypergroups: lambda(x) = 1 / c(x, x~, e)
  Eigen::VectorXd closed(w);
  bool closed_ok = true;
  for (Index x = 0; x < w && closed_ok; ++x) {
    const Index xi = table.space().involution(x);
    const double c = table.pair_complete(x, xi) ? mass_at(table.atoms(x, xi), e) : 0.0;
    closed_ok = c > 0.0;
    closed(x) = closed_ok ? 1.0 / c : 0.0;
  }
  if (closed_ok && (a * closed - b).cwiseAbs().maxCoeff() <= 1e-12) return {closed.data(), closed.data() + w};

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < Eigen::Index(w))
    throw Error(Errc::no_haar_found, "invariance system is rank deficient (rank " + std::to_string(qr.rank()) +
                                         " of " + std::to_string(w) + ")");
  const Eigen::VectorXd lambda = qr.solve(b);
  const double residual = (a * lambda - b).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10))
    throw Error(Errc::no_haar_found, "invariance system is inconsistent (residual " + std::to_string(residual) + ")");
  for (Index i = 0; i < w; ++i)
    if (!(lambda(i) > 0.0)) throw Error(Errc::no_haar_found, "solution has a nonpositive weight");
  return {lambda.data(), lambda.data() + lambda.size()};
}

double haar_invariance_residual(const ConvolutionTable& table, std::span<const double> haar) {
  const std::size_t n = table.size();
  const Index w = Index(table.window());
  std::vector<double> indicator(n, 0.0), row(n, 0.0);
  double worst = 0.0;
  for (Index z = 0; z < w; ++z) {
    indicator[z] = 1.0;
    for (Index x = 0; x < w; ++x) {
      translate_into(table, indicator, x, row);
      double lhs = 0.0;
      bool usable = true;
      for (Index y = 0; y < n && usable; ++y) {
        if (row[y] == 0.0) continue;
        if (y >= haar.size() || !table.pair_complete(x, y)) usable = false;
        else lhs += row[y] * haar[y];
      }
      if (usable) worst = std::max(worst, std::fabs(lhs - haar[z]));
    }
    indicator[z] = 0.0;
  }
  return worst;
}

// --- translation and convolution -----------------------------------------

void translate_into(const ConvolutionTable& table, std::span<const double> f, Index x, std::span<double> out) {
  const std::size_t n = table.size();
  for (Index y = 0; y < n; ++y) {
    double s = 0.0;
    for (const Atom& a : table.atoms(x, y)) s += a.mass * f[a.point];
    out[y] = s;
  }
}

GridFunction translate(const ConvolutionTable& table, const GridFunction& f, Index x) {
  require_same_space(table.space_ptr(), f.space());
  if (x >= table.size()) throw Error(Errc::invalid_parameter, "translation point out of range");
  std::vector<double> out(table.size());
  translate_into(table, f.values(), x, out);
  return GridFunction(f.space(), std::move(out));
}

GridFunction convolve_functions(const ConvolutionTable& table, const GridFunction& f, const GridFunction& g) {
  require_same_space(table.space_ptr(), f.space());
  require_same_space(f.space(), g.space());
  const DiscreteSpace& space = table.space();
  const std::size_t n = table.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t x) {
    std::vector<double> row(n), terms(n);
    translate_into(table, f.values(), Index(x), row);
    for (Index y = 0; y < n; ++y) terms[y] = row[y] * g[space.involution(y)] * space.haar(y);
    out[x] = pairwise_sum(terms);
  });
  return GridFunction(table.space_ptr(), std::move(out));
}

}  // namespace hyperpot
