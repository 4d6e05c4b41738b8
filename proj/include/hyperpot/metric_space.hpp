#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hyperpot {

using Index = std::uint32_t;

/// Raw fields of a finite quasi-metric measure space. `rho` is row-major
/// n_points x n_points.
struct SpaceData {
  std::size_t n_points = 0;
  std::vector<double> rho;
  std::vector<double> haar;
  Index identity = 0;
  std::vector<Index> involution;
  double dim_exponent = 1.0;
  std::optional<double> quasi_const;
};

/**
 * Finite indexed point set with a quasi-metric, positive Haar weights, an
 * identity point, an involution and a dimension exponent N.
 *
 * Construction validates every structural invariant and precomputes, for
 * each center, the points ordered by distance together with running ball
 * measures, so ball queries are a binary search. The object is immutable
 * afterwards and safe to share between threads.
 */
class DiscreteSpace {
public:
  static constexpr std::size_t max_points = 4096;

  explicit DiscreteSpace(SpaceData data);

  std::size_t size() const noexcept { return n_; }
  double distance(Index i, Index j) const noexcept { return data_.rho[std::size_t(i) * n_ + j]; }
  std::span<const double> distance_row(Index i) const {
    return {data_.rho.data() + std::size_t(i) * n_, n_};
  }
  double haar(Index i) const noexcept { return data_.haar[i]; }
  std::span<const double> haar() const noexcept { return data_.haar; }
  Index identity() const noexcept { return data_.identity; }
  Index involution(Index i) const noexcept { return data_.involution[i]; }
  std::span<const Index> involution() const noexcept { return data_.involution; }
  double dim_exponent() const noexcept { return data_.dim_exponent; }
  double quasi_const() const noexcept { return *data_.quasi_const; }
  double diameter() const noexcept { return diameter_; }
  double total_measure() const noexcept { return total_measure_; }

  /// Points sorted by (distance from center, index).
  std::span<const Index> by_distance(Index center) const {
    return {order_.data() + std::size_t(center) * n_, n_};
  }
  /// Number of points strictly closer than r to center.
  std::size_t count_within(Index center, double r) const;
  /// Haar mass of the open ball, from the cached running sums.
  double measure_within(Index center, double r) const;

  /// Distinct distances from center, ascending (first entry is 0).
  std::vector<double> distance_levels(Index center) const;
  /// Midpoints between consecutive distance levels plus one radius past the
  /// diameter. Ball contents about `center` take every possible value on
  /// this set and only on this set.
  std::vector<double> canonical_radii(Index center) const;
  /// Smallest positive distance from center (infinity for one point).
  double min_positive_distance(Index center) const;

  const SpaceData& data() const noexcept { return data_; }
  DiscreteSpace with_haar(std::vector<double> haar) const;

private:
  SpaceData data_;
  std::size_t n_ = 0;
  double diameter_ = 0.0;
  double total_measure_ = 0.0;
  std::vector<Index> order_;
  std::vector<double> sorted_dist_;
  std::vector<double> cumulative_;
};

/// Open ball {y : rho(center, y) < r}, in index order.
std::vector<Index> ball(const DiscreteSpace& space, Index center, double r);
double ball_measure(const DiscreteSpace& space, Index center, double r);

/// Midpoints between all distinct distances in the space plus one radius
/// past the diameter; the default radius sample for doubling_constant.
std::vector<double> midpoint_radii(const DiscreteSpace& space);
double doubling_constant(const DiscreteSpace& space, std::span<const double> radii);
double doubling_constant(const DiscreteSpace& space);

/// Brute-force max over triples of rho(x,y) / (rho(x,z) + rho(z,y)).
double quasi_triangle_constant(const DiscreteSpace& space);
double quasi_triangle_constant(std::size_t n, std::span<const double> rho);

}  // namespace hyperpot
