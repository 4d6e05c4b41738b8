#include "hyperpot/metric_space.hpp"

#include "hyperpot/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hyperpot {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::invariant_violation, what);
}

}  // namespace

double quasi_triangle_constant(std::size_t n, std::span<const double> rho) {
  if (n < 2) throw Error(Errc::invalid_parameter, "quasi-triangle constant needs at least two points");
  bool any_positive = false;
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double dxy = rho[x * n + y];
      if (x != y && dxy > 0.0) any_positive = true;
      if (dxy == 0.0) continue;
      for (std::size_t z = 0; z < n; ++z) {
        const double denom = rho[x * n + z] + rho[z * n + y];
        if (denom > 0.0) worst = std::max(worst, dxy / denom);
      }
    }
  }
  require(any_positive, "all off-diagonal distances are zero");
  return worst;
}

double quasi_triangle_constant(const DiscreteSpace& space) {
  return quasi_triangle_constant(space.size(), space.data().rho);
}

DiscreteSpace::DiscreteSpace(SpaceData data) : data_(std::move(data)), n_(data_.n_points) {
  if (n_ == 0) throw Error(Errc::invalid_parameter, "space must have at least one point");
  if (n_ > max_points)
    throw Error(Errc::invalid_parameter,
                "space has " + std::to_string(n_) + " points; dense storage is capped at " +
                    std::to_string(max_points));
  require(data_.rho.size() == n_ * n_, "rho must have n_points^2 entries");
  require(data_.haar.size() == n_, "haar must have n_points entries");
  require(data_.involution.size() == n_, "involution must have n_points entries");
  require(data_.identity < n_, "identity out of range");
  require(data_.dim_exponent > 0.0 && std::isfinite(data_.dim_exponent), "dim_exponent must be positive");

  for (std::size_t i = 0; i < n_; ++i) {
    require(std::isfinite(data_.haar[i]) && data_.haar[i] > 0.0,
            "haar weight of point " + std::to_string(i) + " is not strictly positive");
    require(data_.involution[i] < n_, "involution maps outside the space");
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = data_.rho[i * n_ + j];
      require(std::isfinite(d) && d >= 0.0, "distances must be finite and nonnegative");
      require((d == 0.0) == (i == j),
              "rho(" + std::to_string(i) + "," + std::to_string(j) + ") violates rho(x,y)=0 iff x=y");
      require(d == data_.rho[j * n_ + i], "rho is not symmetric");
    }
  }
  const Index e = data_.identity;
  for (std::size_t i = 0; i < n_; ++i) {
    const Index inv = data_.involution[i];
    require(data_.involution[inv] == i, "involution is not an involution");
    require(data_.rho[e * n_ + inv] == data_.rho[e * n_ + i], "involution does not preserve rho(e,.)");
    require(data_.haar[inv] == data_.haar[i], "involution does not preserve haar weights");
  }

  if (n_ >= 2) {
    const double measured = quasi_triangle_constant(n_, data_.rho);
    if (data_.quasi_const) {
      require(*data_.quasi_const >= 1.0, "quasi_const must be >= 1");
      require(*data_.quasi_const >= measured * (1.0 - 1e-12),
              "stored quasi_const is smaller than the measured triangle constant");
    } else {
      data_.quasi_const = std::max(1.0, measured);
    }
  } else if (!data_.quasi_const) {
    data_.quasi_const = 1.0;
  }

  diameter_ = *std::max_element(data_.rho.begin(), data_.rho.end());
  total_measure_ = std::accumulate(data_.haar.begin(), data_.haar.end(), 0.0);

  order_.resize(n_ * n_);
  sorted_dist_.resize(n_ * n_);
  cumulative_.resize(n_ * n_);
  for (std::size_t c = 0; c < n_; ++c) {
    auto row = std::span<Index>(order_.data() + c * n_, n_);
    std::iota(row.begin(), row.end(), Index{0});
    const double* d = data_.rho.data() + c * n_;
    std::stable_sort(row.begin(), row.end(), [d](Index a, Index b) { return d[a] < d[b]; });
    double running = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      sorted_dist_[c * n_ + k] = d[row[k]];
      running += data_.haar[row[k]];
      cumulative_[c * n_ + k] = running;
    }
  }
}

std::size_t DiscreteSpace::count_within(Index center, double r) const {
  const double* first = sorted_dist_.data() + std::size_t(center) * n_;
  return std::size_t(std::lower_bound(first, first + n_, r) - first);
}

double DiscreteSpace::measure_within(Index center, double r) const {
  const std::size_t k = count_within(center, r);
  return k == 0 ? 0.0 : cumulative_[std::size_t(center) * n_ + k - 1];
}

std::vector<double> DiscreteSpace::distance_levels(Index center) const {
  const double* first = sorted_dist_.data() + std::size_t(center) * n_;
  std::vector<double> levels(first, first + n_);
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

std::vector<double> DiscreteSpace::canonical_radii(Index center) const {
  const auto levels = distance_levels(center);
  std::vector<double> radii;
  radii.reserve(levels.size());
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) radii.push_back(0.5 * (levels[k] + levels[k + 1]));
  radii.push_back(diameter_ + 1.0);
  return radii;
}

double DiscreteSpace::min_positive_distance(Index center) const {
  if (n_ < 2) return std::numeric_limits<double>::infinity();
  return sorted_dist_[std::size_t(center) * n_ + 1];
}

DiscreteSpace DiscreteSpace::with_haar(std::vector<double> haar) const {
  SpaceData copy = data_;
  copy.haar = std::move(haar);
  return DiscreteSpace(std::move(copy));
}

std::vector<Index> ball(const DiscreteSpace& space, Index center, double r) {
  if (!(r > 0.0)) throw Error(Errc::invalid_radius, "ball radius must be positive");
  if (center >= space.size()) throw Error(Errc::invalid_parameter, "center out of range");
  const auto sorted = space.by_distance(center);
  std::vector<Index> out(sorted.begin(), sorted.begin() + std::ptrdiff_t(space.count_within(center, r)));
  std::sort(out.begin(), out.end());
  return out;
}

double ball_measure(const DiscreteSpace& space, Index center, double r) {
  if (!(r > 0.0)) throw Error(Errc::invalid_radius, "ball radius must be positive");
  if (center >= space.size()) throw Error(Errc::invalid_parameter, "center out of range");
  return space.measure_within(center, r);
}

std::vector<double> midpoint_radii(const DiscreteSpace& space) {
  std::vector<double> levels(space.data().rho);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> radii;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) radii.push_back(0.5 * (levels[k] + levels[k + 1]));
  radii.push_back(space.diameter() + 1.0);
  return radii;
}

double doubling_constant(const DiscreteSpace& space, std::span<const double> radii) {
  if (radii.empty()) throw Error(Errc::empty_sample, "doubling_constant needs at least one radius");
  double worst = 1.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(Errc::invalid_radius, "doubling radius must be positive");
    for (Index x = 0; x < space.size(); ++x) {
      worst = std::max(worst, space.measure_within(x, 2.0 * r) / space.measure_within(x, r));
    }
  }
  return worst;
}

double doubling_constant(const DiscreteSpace& space) {
  const auto radii = midpoint_radii(space);
  return doubling_constant(space, radii);
}

}  // namespace hyperpot
