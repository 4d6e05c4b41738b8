#pragma once

#include "hyperpot/hypergroup.hpp"
#include "hyperpot/orlicz.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hyperpot {

enum class SingularityPolicy { smoothed, zero };

struct PotentialConfig {
  KernelSpec kernel;
  double N = 1.0;
  SingularityPolicy singularity = SingularityPolicy::smoothed;
  /// Radius substituted for ρ(e,e) under the smoothed policy; defaults to
  /// the smallest positive distance from e.
  std::optional<double> smoothing_scale;
};

/// k(y) = a(ρ(e,y)) / ρ(e,y)^N, with k(e) set by the singularity policy.
std::vector<double> potential_kernel(const DiscreteSpace& space, const PotentialConfig& config);

/// Mf(x) = sup_r (|f|∗χ_{B(e,r)})(x) / λB(e,r), sup over the canonical radii
/// about e (or over `radii` when given).
GridFunction maximal_function(const ConvolutionTable& table, const GridFunction& f);
GridFunction maximal_function(const ConvolutionTable& table, const GridFunction& f, std::span<const double> radii);

/// M_ρ f(x) = sup_r (1/λB(x,r)) Σ_{B(x,r)} |f| λ.
GridFunction rho_maximal_function(const DiscreteSpace& space, const GridFunction& f);

/// I_a f(x) = Σ_y (T^x k)(y) f(y~) λ(y).
GridFunction potential(const ConvolutionTable& table, const PotentialConfig& config, const GridFunction& f);
GridFunction riesz_potential(const ConvolutionTable& table, double alpha, const GridFunction& f);

/// Hedberg split of I_a f(x) = Σ_y k(y) (T^x f)(y~) λ(y) at radius r: `near`
/// collects y ∈ B(e,r), `far` the rest.
struct HedbergSplit {
  double near = 0.0;
  double far = 0.0;
  double total() const noexcept { return near + far; }
};

HedbergSplit hedberg_split(const ConvolutionTable& table, const PotentialConfig& config, const GridFunction& f,
                           Index x, double r);

/// Near/far parts at every canonical radius about e for one point x.
struct HedbergProfile {
  std::vector<double> radii;
  std::vector<double> near;
  std::vector<double> far;
  double total = 0.0;  // same summation as a full split
};
HedbergProfile hedberg_profile(const ConvolutionTable& table, std::span<const double> kernel,
                               std::span<const double> f, Index x);

/// I_a f(x) / Φ⁻¹(Mf(x)^p). Returns 0 when I_a f(x) = 0 and +inf when
/// Mf(x) = 0 but I_a f(x) ≠ 0.
double hedberg_pointwise_ratio(const ConvolutionTable& table, const PotentialConfig& config, const NFunction& phi,
                               double p, const GridFunction& f, Index x);

}  // namespace hyperpot
