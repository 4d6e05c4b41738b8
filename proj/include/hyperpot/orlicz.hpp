#pragma once

#include "hyperpot/hypergroup.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hyperpot {

/**
 * Kernel family a(r) on (0, ∞).
 *
 *   power(α)          a(r) = r^α
 *   power_log(α, β)   a(r) = r^α (log(e + r))^β
 *   tabulated         log-log linear interpolation through (r_i, a_i),
 *                     continued as a power law past either end
 *
 * `decay_exponent` is the exponent d for which a(r)/r^d must be almost
 * decreasing; it must lie in (0, N/p) for the potential bounds to apply.
 */
struct KernelSpec {
  enum class Family { power, power_log, tabulated };

  Family family = Family::power;
  double alpha = 0.25;
  double beta = 0.0;
  double decay_exponent = 0.25;
  std::vector<double> table_r;
  std::vector<double> table_a;

  static KernelSpec power(double alpha);
  static KernelSpec power(double alpha, double decay_exponent);
  static KernelSpec power_log(double alpha, double beta, double decay_exponent);
  static KernelSpec tabulated(std::vector<double> r, std::vector<double> a, double decay_exponent);

  /// "power:0.25", "power:0.25,0.3" (with decay), "power_log:0.25,0.5,0.375".
  static KernelSpec parse(const std::string& text);
  std::string describe() const;

  /// Exponent of a(r) as r → ∞ (up to logarithms).
  double growth_exponent() const;
};

double kernel_eval(const KernelSpec& spec, double r);

struct KernelCertificates {
  double c_inc = 1.0;  // max_{t1<t2} a(t1)/a(t2)
  double c_dec = 1.0;  // max_{t1<t2} g(t2)/g(t1), g = a(r)/r^decay
};

/// Measured almost-monotonicity constants on a sorted grid spanning at least
/// three decades.
KernelCertificates kernel_certificates(const KernelSpec& spec, std::span<const double> grid);

/// max over the grid of a(r)/A(r).
double kernel_to_integral_constant(const KernelSpec& spec, std::span<const double> grid);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// A(r) = ∫_0^r a(t)/t dt. Closed form for power and tabulated kernels,
/// adaptive Gauss-Kronrod (after t = r·u^{1/α}) for power_log.
double a_integral(const KernelSpec& spec, double r);

struct NFunctionGrid {
  double r_min = 1e-8;
  double r_max = 1e8;
  std::size_t nodes = 512;
  std::size_t tail_nodes = 16;
};

/**
 * N-function given through samples of its inverse. Φ⁻¹ and Φ are evaluated
 * by log-log linear interpolation on the same node set, so
 * Φ(Φ⁻¹(r)) = r to rounding everywhere on the grid. Past the grid both are
 * continued as power laws whose exponent is fitted on the outer
 * `tail_nodes` nodes and which pass through the end node.
 */
class NFunction {
public:
  struct Node {
    double r;
    double inverse;  // Φ⁻¹(r)
    double density;  // φ(Φ⁻¹(r)), 0 if unknown
  };

  NFunction(double p, double N, std::vector<Node> nodes, std::size_t tail_nodes);

  /// Φ(s) = scale·s^exponent, sampled on the default grid.
  static NFunction from_power(double exponent, double scale = 1.0, const NFunctionGrid& grid = {});

  double p() const noexcept { return p_; }
  double p_conj() const noexcept { return p_ / (p_ - 1.0); }
  double N() const noexcept { return N_; }
  std::span<const Node> nodes() const noexcept { return nodes_; }

  double inverse(double r) const;
  double operator()(double s) const;
  /// Log-log least-squares slope of Φ⁻¹ over nodes [first, last).
  double inverse_slope(std::size_t first, std::size_t last) const;

private:
  double interpolate(double v, bool forward) const;

  double p_;
  double N_;
  std::vector<Node> nodes_;
  std::vector<double> log_r_;
  std::vector<double> log_s_;
  double low_slope_ = 1.0;   // d log Φ⁻¹ / d log r near r_min
  double high_slope_ = 1.0;  // same near r_max
};

/// Φ⁻¹(r) = ∫_0^r A(t^{-1/N}) t^{-1/p'} dt sampled on a log grid.
NFunction build_nfunction(const KernelSpec& spec, double N, double p, const NFunctionGrid& grid = {});

/// CSV with columns r,phi_inverse,s,phi.
void write_nfunction_csv(std::ostream& out, const NFunction& phi);

/// inf{η > 0 : Σ_x Φ(|f(x)|/η) λ(x) ≤ 1} by bisection on log η.
double luxemburg_norm(std::span<const double> f, std::span<const double> haar,
                      const std::function<double(double)>& phi);
double luxemburg_norm(const GridFunction& f, const NFunction& phi);

/// (Σ |f|^p λ)^{1/p}; p = ∞ gives the sup norm.
double lp_norm(std::span<const double> f, std::span<const double> haar, double p);
double lp_norm(const GridFunction& f, double p);

}  // namespace hyperpot
