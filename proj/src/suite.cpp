#include "hyperpot/error.hpp"
#include "hyperpot/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace hyperpot {

std::uint64_t SeededUniform::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::string format_radius(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", r);
  return buf;
}

// Ball about e if it lies inside the window, else nullopt.
std::optional<GridFunction> window_ball(const ConvolutionTable& table, double r) {
  const DiscreteSpace& space = table.space();
  GridFunction f(table.space_ptr(), 0.0);
  for (Index y : ball(space, space.identity(), r)) {
    if (y >= table.window()) return std::nullopt;
    f[y] = 1.0;
  }
  return f;
}

}  // namespace

std::vector<TestFunction> default_suite(const ConvolutionTable& table, const SuiteOptions& options) {
  const DiscreteSpace& space = table.space();
  const std::size_t w = table.window();
  std::vector<TestFunction> suite;

  for (double r : space.canonical_radii(space.identity()))
    if (auto f = window_ball(table, r)) suite.push_back({"ball[r=" + format_radius(r) + "]", std::move(*f)});

  std::vector<Index> spikes(w);
  std::iota(spikes.begin(), spikes.end(), Index{0});
  SeededUniform rng(options.seed);
  if (w > options.spike_limit) {
    // seeded partial Fisher-Yates
    const std::size_t count = std::min(options.random_spikes, w);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + std::size_t(rng.next() * double(w - i));
      std::swap(spikes[i], spikes[std::min(j, w - 1)]);
    }
    spikes.resize(count);
    std::sort(spikes.begin(), spikes.end());
  }
  for (Index s : spikes) {
    GridFunction f(table.space_ptr(), 0.0);
    f[s] = 1.0;
    suite.push_back({"spike[" + std::to_string(s) + "]", std::move(f)});
  }

  for (std::size_t k = 0; k < options.random_fields; ++k) {
    GridFunction f(table.space_ptr(), 0.0);
    for (Index i = 0; i < w; ++i) f[i] = rng.next();
    suite.push_back({"random[" + std::to_string(k) + "]", std::move(f)});
  }

  if (options.dilations) {
    auto family = dilation_family(table);
    suite.insert(suite.end(), std::make_move_iterator(family.begin()), std::make_move_iterator(family.end()));
  }
  return suite;
}

std::vector<TestFunction> dilation_family(const ConvolutionTable& table) {
  const DiscreteSpace& space = table.space();
  const double h = space.min_positive_distance(space.identity());
  const std::size_t base = std::max<std::size_t>(1, space.size() / 32);
  std::vector<TestFunction> family;
  for (int j = 0; j < 4; ++j) {
    const double r = (double(base << j) + 0.5) * h;
    auto f = window_ball(table, r);
    if (!f) throw Error(Errc::invalid_parameter, "dilated indicator leaves the window; grid too small");
    family.push_back({"dilation[" + std::to_string(j) + "]", std::move(*f)});
  }
  return family;
}

}  // namespace hyperpot
