#include "hyperpot/parallel.hpp"
#include "hyperpot/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hyperpot {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_radius: return "invalid-radius";
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invariant_violation: return "invariant-violation";
    case Errc::empty_sample: return "empty-sample";
    case Errc::incomplete_table: return "incomplete-table";
    case Errc::no_haar_found: return "no-haar-found";
    case Errc::space_mismatch: return "space-mismatch";
    case Errc::divergence: return "divergence";
    case Errc::overflow: return "overflow";
    case Errc::hypothesis_violation: return "hypothesis-violation";
    case Errc::config_error: return "config-error";
  }
  return "unknown";
}

namespace {
std::atomic<unsigned> g_threads{0};
// nested parallel_for calls run inline on the calling worker
thread_local bool t_inside_pool = false;
}

void set_parallelism(unsigned threads) { g_threads.store(threads); }

unsigned parallelism() {
  unsigned t = g_threads.load();
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(parallelism(), n);
  if (workers <= 1 || t_inside_pool) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    const bool was_inside = t_inside_pool;
    t_inside_pool = true;
    struct Restore {
      bool value;
      ~Restore() { t_inside_pool = value; }
    } restore{was_inside};
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t block = 8;
  if (values.size() <= block) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace hyperpot
