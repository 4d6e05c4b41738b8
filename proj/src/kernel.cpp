#include "hyperpot/error.hpp"
#include "hyperpot/orlicz.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hyperpot {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::invalid_parameter, std::string(what) + " must be positive");
}

double segment_slope(const KernelSpec& s, std::size_t i) {
  return std::log(s.table_a[i + 1] / s.table_a[i]) / std::log(s.table_r[i + 1] / s.table_r[i]);
}

// ∫_{t1}^{t2} a(t)/t dt for a(t) = a0 (t/r0)^slope
double power_piece_integral(double a0, double r0, double slope, double t1, double t2) {
  if (slope == 0.0) return a0 * std::log(t2 / t1);
  return a0 / slope * (std::pow(t2 / r0, slope) - std::pow(t1 / r0, slope));
}

}  // namespace

KernelSpec KernelSpec::power(double alpha) { return power(alpha, alpha); }

KernelSpec KernelSpec::power(double alpha, double decay_exponent) {
  require_positive(alpha, "kernel exponent alpha");
  require_positive(decay_exponent, "decay exponent");
  KernelSpec s;
  s.family = Family::power;
  s.alpha = alpha;
  s.decay_exponent = decay_exponent;
  return s;
}

KernelSpec KernelSpec::power_log(double alpha, double beta, double decay_exponent) {
  require_positive(alpha, "kernel exponent alpha");
  require_positive(decay_exponent, "decay exponent");
  if (!std::isfinite(beta)) throw Error(Errc::invalid_parameter, "beta must be finite");
  KernelSpec s;
  s.family = Family::power_log;
  s.alpha = alpha;
  s.beta = beta;
  s.decay_exponent = decay_exponent;
  return s;
}

KernelSpec KernelSpec::tabulated(std::vector<double> r, std::vector<double> a, double decay_exponent) {
  require_positive(decay_exponent, "decay exponent");
  if (r.size() < 2 || r.size() != a.size())
    throw Error(Errc::invalid_parameter, "tabulated kernel needs at least two (r, a) pairs");
  for (std::size_t i = 0; i < r.size(); ++i) {
    require_positive(r[i], "tabulated radius");
    require_positive(a[i], "tabulated kernel value");
    if (i > 0 && !(r[i] > r[i - 1])) throw Error(Errc::invalid_parameter, "tabulated radii must increase");
  }
  KernelSpec s;
  s.family = Family::tabulated;
  s.table_r = std::move(r);
  s.table_a = std::move(a);
  s.decay_exponent = decay_exponent;
  s.alpha = segment_slope(s, 0);
  return s;
}

KernelSpec KernelSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(Errc::invalid_parameter, "kernel spec must look like family:params");
  const std::string family = text.substr(0, colon);
  std::vector<double> args;
  std::stringstream ss(text.substr(colon + 1));
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_parameter, "bad kernel parameter '" + item + "'");
    }
  }
  if (family == "power" && (args.size() == 1 || args.size() == 2))
    return args.size() == 1 ? power(args[0]) : power(args[0], args[1]);
  if (family == "power_log" && (args.size() == 2 || args.size() == 3))
    return power_log(args[0], args[1], args.size() == 3 ? args[2] : args[0] + 0.125);
  throw Error(Errc::invalid_parameter, "unknown kernel spec '" + text + "'");
}

std::string KernelSpec::describe() const {
  std::ostringstream out;
  switch (family) {
    case Family::power: out << "power:" << alpha << "," << decay_exponent; break;
    case Family::power_log: out << "power_log:" << alpha << "," << beta << "," << decay_exponent; break;
    case Family::tabulated: out << "tabulated[" << table_r.size() << "]," << decay_exponent; break;
  }
  return out.str();
}

double KernelSpec::growth_exponent() const {
  if (family == Family::tabulated) return segment_slope(*this, table_r.size() - 2);
  return alpha;
}

double kernel_eval(const KernelSpec& spec, double r) {
  if (!(r > 0.0)) throw Error(Errc::invalid_radius, "kernel argument must be positive");
  switch (spec.family) {
    case KernelSpec::Family::power: return std::pow(r, spec.alpha);
    case KernelSpec::Family::power_log:
      return std::pow(r, spec.alpha) * std::pow(std::log(std::numbers::e + r), spec.beta);
    case KernelSpec::Family::tabulated: {
      const auto& R = spec.table_r;
      const auto& A = spec.table_a;
      std::size_t i = 0;
      if (r >= R.back()) i = R.size() - 2;
      else if (r > R.front()) i = std::size_t(std::upper_bound(R.begin(), R.end(), r) - R.begin()) - 1;
      if (r == R[i]) return A[i];
      if (r == R[i + 1]) return A[i + 1];
      return A[i] * std::pow(r / R[i], segment_slope(spec, i));
    }
  }
  return 0.0;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  require_positive(lo, "grid start");
  if (!(hi > lo) || count < 2) throw Error(Errc::invalid_parameter, "log grid needs hi > lo and two nodes");
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * double(i) / double(count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

KernelCertificates kernel_certificates(const KernelSpec& spec, std::span<const double> grid) {
  if (grid.size() < 2 || !(grid.front() > 0.0) || grid.back() / grid.front() < 1e3 * (1.0 - 1e-12))
    throw Error(Errc::invalid_parameter, "certificate grid must span at least three decades");
  KernelCertificates c;
  double max_a = 0.0;
  double min_g = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double a = kernel_eval(spec, t);
    const double g = a / std::pow(t, spec.decay_exponent);
    if (max_a > 0.0) c.c_inc = std::max(c.c_inc, max_a / a);
    if (std::isfinite(min_g)) c.c_dec = std::max(c.c_dec, g / min_g);
    max_a = std::max(max_a, a);
    min_g = std::min(min_g, g);
  }
  return c;
}

double kernel_to_integral_constant(const KernelSpec& spec, std::span<const double> grid) {
  double worst = 0.0;
  for (double t : grid) worst = std::max(worst, kernel_eval(spec, t) / a_integral(spec, t));
  return worst;
}

double a_integral(const KernelSpec& spec, double r) {
  if (!(r > 0.0)) throw Error(Errc::invalid_radius, "A(r) needs r > 0");
  switch (spec.family) {
    case KernelSpec::Family::power: return std::pow(r, spec.alpha) / spec.alpha;
    case KernelSpec::Family::power_log: {
      // t = r u^k with k = 1/α turns the integrand into k r^α (log(e + r u^k))^β
      const double k = 1.0 / spec.alpha;
      auto f = [&](double u) { return std::pow(std::log(std::numbers::e + r * std::pow(u, k)), spec.beta); };
      // normalized by the value at u = 1; tanh-sinh copes with the log-type
      // endpoint behaviour at u = 0 when r is huge
      const double scale = f(1.0);
      auto g = [&](double u) { return f(u) / scale; };
      thread_local boost::math::quadrature::tanh_sinh<double> rule;
      double err = 0.0, l1 = 0.0;
      const double v = rule.integrate(g, 0.0, 1.0, 1e-12, &err, &l1);
      if (!std::isfinite(v) || err > 1e-9 * std::fabs(v))
        throw Error(Errc::divergence, "quadrature for A(r) did not converge");
      return k * std::pow(r, spec.alpha) * scale * v;
    }
    case KernelSpec::Family::tabulated: {
      const auto& R = spec.table_r;
      const auto& A = spec.table_a;
      const double s0 = segment_slope(spec, 0);
      if (!(s0 > 0.0))
        throw Error(Errc::divergence, "tabulated kernel does not vanish at 0; the integral of a(t)/t diverges");
      double total = A[0] / s0 * std::pow(std::min(r, R[0]) / R[0], s0);
      for (std::size_t i = 0; i + 1 < R.size() && r > R[i]; ++i)
        total += power_piece_integral(A[i], R[i], segment_slope(spec, i), R[i], std::min(r, R[i + 1]));
      if (r > R.back()) {
        const std::size_t last = R.size() - 2;
        total += power_piece_integral(A[last], R[last], segment_slope(spec, last), R.back(), r);
      }
      return total;
    }
  }
  return 0.0;
}

// --- norms -------------------------------------------------------------------

double lp_norm(std::span<const double> f, std::span<const double> haar, double p) {
  if (!(p > 0.0)) throw Error(Errc::invalid_parameter, "L^p exponent must be positive");
  if (f.size() != haar.size()) throw Error(Errc::space_mismatch, "function and weights differ in length");
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::fabs(v));
  if (std::isinf(p) || fmax == 0.0) return fmax;
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::fabs(f[i]) / fmax, p) * haar[i];
  return fmax * std::pow(s, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) { return lp_norm(f.values(), f.space()->haar(), p); }

double luxemburg_norm(std::span<const double> f, std::span<const double> haar,
                      const std::function<double(double)>& phi) {
  if (f.size() != haar.size()) throw Error(Errc::space_mismatch, "function and weights differ in length");
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::fabs(v));
  if (fmax == 0.0) return 0.0;
  auto modular = [&](double eta) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] != 0.0) s += phi(std::fabs(f[i]) / eta) * haar[i];
    return s;
  };
  double lo = fmax, hi = fmax;
  for (int k = 0; modular(lo) <= 1.0; ++k) {
    lo *= 0.5;
    if (k > 2000 || lo == 0.0) throw Error(Errc::overflow, "Luxemburg bracket collapsed to zero");
  }
  for (int k = 0; !(modular(hi) <= 1.0); ++k) {
    hi *= 2.0;
    if (k > 2000 || std::isinf(hi)) throw Error(Errc::overflow, "modular exceeds 1 for every representable eta");
  }
  for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-15; ++it) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (mid <= lo || mid >= hi) break;
    (modular(mid) <= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

double luxemburg_norm(const GridFunction& f, const NFunction& phi) {
  return luxemburg_norm(f.values(), f.space()->haar(), [&phi](double s) { return phi(s); });
}

}  // namespace hyperpot
