#pragma once

#include "hyperpot/hypergroup.hpp"
#include "hyperpot/operators.hpp"
#include "hyperpot/orlicz.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyperpot {

/// Empirical constants for the support, size and doubling conditions.
struct ConditionCertificate {
  double c1 = 0.0;  // smallest c with supp Λ_x ⊂ B(x, c r), sup over x and r
  double c2 = 0.0;  // sup λB(x,r) Λ_x(y) / λB(e,r)
  double c3 = 0.0;  // c2 · sup_r λB(e,r) / r^N over canonical radii
  double D = 1.0;   // doubling constant on the midpoint radii
  int m = 0;        // smallest m >= 0 with c1 <= 2^m
  std::vector<double> radii_tested;
  bool passed = true;
  std::string failure;
};

/// Λ_x(y) = T^x χ_{B(e,r)}(y~) is evaluated with a radius sweep per x; c1
/// is the exact supremum over all r > 0, c2 and c3 use the canonical radii
/// about e and x. Only window points are used as centers x. The adjoint
/// density Σ_y c(x,y,z) χ_{B(e,r)}(y~) λ(y)/λ(z), which is what the maximal
/// function integrates |f| against, is swept too and the constants are the
/// max over both (they agree on exact hypergroups).
ConditionCertificate check_conditions(const ConvolutionTable& table);

struct TestFunction {
  std::string label;
  GridFunction f;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t random_fields = 16;
  std::size_t spike_limit = 64;     // spikes at every window point up to this many
  std::size_t random_spikes = 32;   // otherwise this many seeded spike locations
  bool dilations = false;           // 4-scale dilated ball indicators
};

/// Ball indicators at the canonical radii, unit spikes and seeded random
/// nonnegative fields, all supported in the table's window.
std::vector<TestFunction> default_suite(const ConvolutionTable& table, const SuiteOptions& options);
/// χ_{B(e, s·2^j)} for j = 0..3 with s = n/32 grid steps.
std::vector<TestFunction> dilation_family(const ConvolutionTable& table);

/// Deterministic uniform doubles in [0, 1) from a splitmix64 stream.
class SeededUniform {
public:
  explicit SeededUniform(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double next() { return double(next_u64() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

struct FunctionRecord {
  std::string label;
  double norm_in = 0.0;
  double norm_out = 0.0;
  double ratio = 0.0;
};

struct BoundednessReport {
  std::string suite;
  std::vector<FunctionRecord> records;
  double sup_ratio = 0.0;
  std::optional<double> refinement_drift;  // |fine − coarse| / coarse
  bool pass = false;
  /// Named auxiliary constants (C_ar, C_br, ...), each also refinement-checked.
  std::map<std::string, double> constants;
  std::map<std::string, double> constant_drift;
  /// Informational values that do not enter the pass decision.
  std::map<std::string, double> diagnostics;
  std::vector<double> resolution_sups;  // sup_ratio per resolution, coarse first
};

inline constexpr double drift_threshold = 0.20;

/// Sets sup_ratio from the records and pass = finite sup.
void finalize(BoundednessReport& report);
/// Merges per-resolution reports (coarse first); pass iff every sup is
/// finite and every drift between consecutive resolutions is <= threshold.
BoundednessReport combine_resolutions(const std::vector<BoundednessReport>& reports,
                                      double threshold = drift_threshold);

/// Points at which operator outputs are compared (the table's window).
std::span<const double> window_view(const ConvolutionTable& table, std::span<const double> values);

BoundednessReport verify_weak_1_1(const ConvolutionTable& table, const std::vector<TestFunction>& suite);
BoundednessReport verify_strong_pp(const ConvolutionTable& table, const std::vector<TestFunction>& suite, double p);

struct DominationResult {
  double worst_ratio = 0.0;  // max of Mf / (c2 D^m M_ρ f) over points with M_ρ f > 0
  std::size_t points_checked = 0;
  std::size_t violations = 0;
  bool holds() const noexcept { return violations == 0; }
};
/// Mf ≤ c2 D^m M_ρ f at every window point of every suite function.
DominationResult check_domination(const ConvolutionTable& table, const ConditionCertificate& cert,
                                  const std::vector<TestFunction>& suite);

/// C_ar, C_br and C_hedberg as named constants; sup_ratio is C_hedberg.
BoundednessReport verify_hedberg_estimates(const ConvolutionTable& table, const PotentialConfig& config,
                                           const NFunction& phi, double p, const std::vector<TestFunction>& suite);

/// sup over the suite (normalized to ‖f‖_p = 1) of ‖I_a f‖_Φ.
BoundednessReport verify_theorem(const ConvolutionTable& table, const PotentialConfig& config, double p,
                                 const std::vector<TestFunction>& suite, const NFunctionGrid& grid = {});
/// Same, with a prebuilt Φ.
BoundednessReport verify_theorem(const ConvolutionTable& table, const PotentialConfig& config, double p,
                                 const NFunction& phi, const std::vector<TestFunction>& suite);

/// Throws hypothesis_violation naming the first failed hypothesis.
void check_theorem_hypotheses(const PotentialConfig& config, double p);

/// q with 1/p − 1/q = α/N.
double corollary_exponent(double alpha, double N, double p);
/// sup of ‖I_α f‖_q / ‖f‖_p.
BoundednessReport verify_corollary(const ConvolutionTable& table, double alpha, double p,
                                   const std::vector<TestFunction>& suite);

}  // namespace hyperpot
