#include "hyperpot/error.hpp"
#include "hyperpot/orlicz.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace hyperpot {

namespace {

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const double n = double(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Gauss-Kronrod after rescaling the integrand to O(1): the embedded error
// estimate is not scale invariant.
template <class F>
double integrate(F&& f, double a, double b, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  double err = 0.0;
  auto g = [&](double x) { return f(x) / scale; };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 12, 1e-12, &err);
  if (!std::isfinite(v) || err > 1e-9 * std::max(std::fabs(v), 1e-300))
    throw Error(Errc::divergence, "quadrature for the inverse N-function did not converge");
  return v * scale;
}

// [0, 1] with a possible log-type singularity at 0.
template <class F>
double integrate_endpoint(F&& f, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  double err = 0.0, l1 = 0.0;
  const double v = rule.integrate([&](double u) { return f(u) / scale; }, 0.0, 1.0, 1e-12, &err, &l1);
  if (!std::isfinite(v) || err > 1e-9 * std::max(std::fabs(v), 1e-300))
    throw Error(Errc::divergence, "quadrature for the inverse N-function did not converge");
  return v * scale;
}

}  // namespace

NFunction::NFunction(double p, double N, std::vector<Node> nodes, std::size_t tail_nodes)
    : p_(p), N_(N), nodes_(std::move(nodes)) {
  if (!(p_ > 0.0)) throw Error(Errc::invalid_parameter, "N-function exponent p must be positive");
  if (nodes_.size() < 4) throw Error(Errc::invalid_parameter, "N-function needs at least four nodes");
  tail_nodes = std::clamp<std::size_t>(tail_nodes, 2, nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& nd = nodes_[i];
    if (!(nd.r > 0.0) || !(nd.inverse > 0.0) || !std::isfinite(nd.inverse))
      throw Error(Errc::invariant_violation, "N-function nodes must be positive and finite");
    if (i > 0 && (!(nd.r > nodes_[i - 1].r) || !(nd.inverse > nodes_[i - 1].inverse)))
      throw Error(Errc::invariant_violation, "inverse N-function must be strictly increasing");
    log_r_.push_back(std::log(nd.r));
    log_s_.push_back(std::log(nd.inverse));
  }
  const std::size_t m = nodes_.size();
  low_slope_ = fit_slope(std::span(log_r_).first(tail_nodes), std::span(log_s_).first(tail_nodes));
  high_slope_ = fit_slope(std::span(log_r_).last(tail_nodes), std::span(log_s_).last(tail_nodes));
  if (!(low_slope_ > 0.0) || !(high_slope_ > 0.0) || m < 2)
    throw Error(Errc::invariant_violation, "power-law continuation of the N-function is not increasing");
}

NFunction NFunction::from_power(double exponent, double scale, const NFunctionGrid& grid) {
  if (!(exponent > 0.0) || !(scale > 0.0))
    throw Error(Errc::invalid_parameter, "power N-function needs positive exponent and scale");
  std::vector<Node> nodes;
  for (double r : log_grid(grid.r_min, grid.r_max, grid.nodes)) {
    const double s = std::pow(r / scale, 1.0 / exponent);
    nodes.push_back({r, s, scale * exponent * std::pow(s, exponent - 1.0)});
  }
  return NFunction(exponent, 1.0, std::move(nodes), grid.tail_nodes);
}

double NFunction::interpolate(double v, bool forward) const {
  if (!(v > 0.0)) return 0.0;
  if (std::isinf(v)) return v;
  const auto& from = forward ? log_s_ : log_r_;
  const auto& to = forward ? log_r_ : log_s_;
  const double lv = std::log(v);
  if (lv <= from.front()) {
    const double slope = forward ? 1.0 / low_slope_ : low_slope_;
    return std::exp(to.front() + slope * (lv - from.front()));
  }
  if (lv >= from.back()) {
    const double slope = forward ? 1.0 / high_slope_ : high_slope_;
    return std::exp(to.back() + slope * (lv - from.back()));
  }
  const std::size_t i = std::size_t(std::upper_bound(from.begin(), from.end(), lv) - from.begin()) - 1;
  const double t = (lv - from[i]) / (from[i + 1] - from[i]);
  return std::exp(to[i] + t * (to[i + 1] - to[i]));
}

double NFunction::inverse(double r) const { return interpolate(r, false); }

double NFunction::operator()(double s) const { return interpolate(s, true); }

double NFunction::inverse_slope(std::size_t first, std::size_t last) const {
  if (last > nodes_.size() || last < first + 2) throw Error(Errc::invalid_parameter, "slope range too small");
  return fit_slope(std::span(log_r_).subspan(first, last - first), std::span(log_s_).subspan(first, last - first));
}

NFunction build_nfunction(const KernelSpec& spec, double N, double p, const NFunctionGrid& grid) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(Errc::hypothesis_violation, "p must lie in (1, inf)");
  if (!(N > 0.0)) throw Error(Errc::invalid_parameter, "dimension exponent N must be positive");
  if (!(spec.decay_exponent > 0.0 && spec.decay_exponent < N / p))
    throw Error(Errc::hypothesis_violation, "decay exponent must lie in (0, N/p)");
  const double p_conj = p / (p - 1.0);
  // near t = 0 the integrand behaves like t^{-gamma}
  const double gamma = std::max(spec.growth_exponent(), 0.0) / N + 1.0 / p_conj;
  if (!(gamma < 1.0))
    throw Error(Errc::divergence, "A(t^{-1/N}) t^{-1/p'} is not integrable at 0 for these parameters");

  auto integrand = [&](double t) { return a_integral(spec, std::pow(t, -1.0 / N)) * std::pow(t, -1.0 / p_conj); };

  const auto r = log_grid(grid.r_min, grid.r_max, grid.nodes);
  std::vector<NFunction::Node> nodes(r.size());

  // [0, r0] after t = r0 u^k, k = 1/(1 - gamma), which leaves a bounded integrand
  const double k = 1.0 / (1.0 - gamma);
  const double r0 = r.front();
  auto head = [&](double u) {
    // bounded (or log-growing) as u -> 0; clamp before t underflows
    u = std::max(u, 1e-30);
    const double t = r0 * std::pow(u, k);
    return integrand(t) * r0 * k * std::pow(u, k - 1.0);
  };
  double cumulative = integrate_endpoint(head, head(1.0));
  nodes[0] = {r0, cumulative, 1.0 / integrand(r0)};
  // between nodes, t = e^s
  auto in_log = [&](double s) {
    const double t = std::exp(s);
    return integrand(t) * t;
  };
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double lo = std::log(r[i - 1]), hi = std::log(r[i]);
    cumulative += integrate(in_log, lo, hi, in_log(0.5 * (lo + hi)) * (hi - lo));
    nodes[i] = {r[i], cumulative, 1.0 / integrand(r[i])};
  }
  return NFunction(p, N, std::move(nodes), grid.tail_nodes);
}

void write_nfunction_csv(std::ostream& out, const NFunction& phi) {
  out << "r,phi_inverse,s,phi\n";
  out << std::setprecision(17);
  for (const auto& nd : phi.nodes()) out << nd.r << ',' << nd.inverse << ',' << nd.inverse << ',' << nd.r << '\n';
}

}  // namespace hyperpot
