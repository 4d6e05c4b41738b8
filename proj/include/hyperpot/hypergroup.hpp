#pragma once

#include "hyperpot/metric_space.hpp"

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hyperpot {

using SpacePtr = std::shared_ptr<const DiscreteSpace>;

/// Real-valued function on the points of a space.
class GridFunction {
public:
  GridFunction(SpacePtr space, std::vector<double> values);
  explicit GridFunction(SpacePtr space, double fill = 0.0);

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](Index i) const noexcept { return values_[i]; }
  double& operator[](Index i) noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  GridFunction abs() const;
  GridFunction& operator*=(double c);
  friend GridFunction operator*(double c, GridFunction f) { return f *= c; }
  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);

private:
  SpacePtr space_;
  std::vector<double> values_;
};

void require_same_space(const SpacePtr& a, const SpacePtr& b);

struct Atom {
  Index point;
  double mass;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/**
 * Structure constants c(x, y, z) of a discrete hypergroup, stored as a CSR
 * array over the n*n ordered pairs. Truncated instances (Chebyshev, Bessel)
 * drop atoms that fall off the grid, so their boundary pairs carry less than
 * unit mass; `window()` is the prefix {0, ..., window()-1} of points on which
 * every pair is complete and the hypergroup axioms are expected to hold.
 */
class ConvolutionTable {
public:
  ConvolutionTable(SpacePtr space, std::vector<std::vector<Atom>> pair_atoms, std::size_t window);

  const DiscreteSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::size_t size() const noexcept { return space_->size(); }
  std::size_t window() const noexcept { return window_; }
  bool truncated() const noexcept { return window_ < size(); }

  std::span<const Atom> atoms(Index x, Index y) const noexcept {
    const std::size_t k = std::size_t(x) * size() + y;
    return {atoms_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
  }
  /// Total mass of δ_x∗δ_y (1 unless the pair was truncated).
  double pair_mass(Index x, Index y) const noexcept { return pair_mass_[std::size_t(x) * size() + y]; }
  bool pair_complete(Index x, Index y) const noexcept;
  std::size_t nonzeros() const noexcept { return atoms_.size(); }

  /// Same structure constants over a space with different Haar weights.
  ConvolutionTable with_space(SpacePtr space) const;

private:
  ConvolutionTable() = default;

  SpacePtr space_;
  std::vector<std::size_t> offsets_;
  std::vector<Atom> atoms_;
  std::vector<double> pair_mass_;
  std::size_t window_ = 0;
};

/// δ_x∗δ_y. Throws incomplete_table for pairs cut by truncation.
std::vector<Atom> convolve_point_measures(const ConvolutionTable& table, Index x, Index y);

struct AxiomCheck {
  std::string name;
  bool pass = true;
  double max_violation = 0.0;
  std::size_t checked = 0;
};

struct AxiomReport {
  // probability, commutativity, identity, involution, support, associativity
  std::array<AxiomCheck, 6> checks;
  bool all_pass() const noexcept;
  const AxiomCheck& operator[](const std::string& name) const;
};

inline constexpr double axiom_tolerance = 1e-12;

/// Checks the axioms on the table's window. Associativity skips triples whose
/// expansion touches a truncated pair.
AxiomReport check_axioms(const ConvolutionTable& table, double tolerance = axiom_tolerance);

/// Haar weights on the window with λ(e)=1, from the invariance equations
/// Σ_y c(x,y,z) λ(y) = λ(z). Throws no_haar_found if the least-squares
/// residual exceeds 1e-10 or the system is rank deficient.
std::vector<double> solve_haar(const ConvolutionTable& table);

/// Max over (x, z) in the window and indicator f = χ_{z} of
/// |Σ_y T^x f(y) λ(y) − Σ_y f(y) λ(y)|, restricted to complete pairs.
double haar_invariance_residual(const ConvolutionTable& table, std::span<const double> haar);

/// (T^x f)(y) = Σ_z c(x,y,z) f(z).
GridFunction translate(const ConvolutionTable& table, const GridFunction& f, Index x);
/// Row x of the translation written into `out` (size n).
void translate_into(const ConvolutionTable& table, std::span<const double> f, Index x, std::span<double> out);

/// (f∗g)(x) = Σ_y (T^x f)(y) g(y~) λ(y).
GridFunction convolve_functions(const ConvolutionTable& table, const GridFunction& f, const GridFunction& g);

// --- instances -------------------------------------------------------------

/// Finite group given by its multiplication table mult[a][b] = a·b.
class FiniteGroup {
public:
  explicit FiniteGroup(std::vector<std::vector<Index>> mult, std::string name = "group");

  std::size_t order() const noexcept { return mult_.size(); }
  Index multiply(Index a, Index b) const noexcept { return mult_[a][b]; }
  Index identity() const noexcept { return identity_; }
  Index inverse(Index a) const noexcept { return inverse_[a]; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::vector<Index>>& table() const noexcept { return mult_; }

  /// Conjugacy classes ordered by smallest member; the identity class first.
  std::vector<std::vector<Index>> conjugacy_classes() const;

  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup symmetric(std::size_t k);
  static FiniteGroup dihedral(std::size_t n);
  static FiniteGroup quaternion();
  /// "S3", "Q8", "Z5", "D4", ...
  static FiniteGroup by_name(const std::string& name);

private:
  std::vector<std::vector<Index>> mult_;
  std::string name_;
  Index identity_ = 0;
  std::vector<Index> inverse_;
};

ConvolutionTable make_cyclic(std::size_t n);
/// Conjugacy-class hypergroup with the discrete metric scaled by `metric_scale`.
ConvolutionTable make_conjugacy(const FiniteGroup& group, double metric_scale = 1.0);
/// Chebyshev polynomial hypergroup truncated to {0..M}; window {0..M/2}.
ConvolutionTable make_chebyshev(std::size_t M);

struct BesselOptions {
  double alpha = 0.5;
  std::size_t grid_size = 128;
  double step = 1.0;
};
/// Bessel-Kingman hypergroup on {k·step}. Point z receives the exact
/// δ_x∗δ_y mass of the cell [z − ½, z + ½) (incomplete beta in closed form),
/// and λ(x) = 1 / c(x, x, 0). The window is the first ceil(grid_size/2) points.
ConvolutionTable make_bessel(const BesselOptions& options);

}  // namespace hyperpot
