#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace hyperpot {

/// Process-wide worker count used by the operator kernels. 0 means
/// "hardware concurrency".
void set_parallelism(unsigned threads);
unsigned parallelism();

/// Runs body(i) for i in [0, n). Each index is written by exactly one worker,
/// so results never depend on the thread count as long as body(i) only
/// touches slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation in a fixed tree order. Used for every
/// reduction whose value ends up in a report.
double pairwise_sum(std::span<const double> values);

}  // namespace hyperpot
