#include "billiard_lab/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "billiard_lab/error.hpp"

namespace billiard_lab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::not_closed: return "not_closed";
    case ErrorCode::non_positive_speed: return "non_positive_speed";
    case ErrorCode::not_convex: return "not_convex";
    case ErrorCode::not_strictly_convex: return "not_strictly_convex";
    case ErrorCode::invariant_violated: return "invariant_violated";
    case ErrorCode::off_curve: return "off_curve";
    case ErrorCode::tangency: return "tangency";
    case ErrorCode::not_inward: return "not_inward";
    case ErrorCode::not_bracketed: return "not_bracketed";
    case ErrorCode::ambiguous_fit: return "ambiguous_fit";
    case ErrorCode::degenerate_geodesic: return "degenerate_geodesic";
    case ErrorCode::degenerate_frame: return "degenerate_frame";
    case ErrorCode::drift_too_large: return "drift_too_large";
    case ErrorCode::not_interior: return "not_interior";
    case ErrorCode::not_exterior: return "not_exterior";
    case ErrorCode::empty_dataset: return "empty_dataset";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

double inner(const VecX& u, const VecX& v, MetricSignature sig) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "inner: dimensions " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  double acc = u.dot(v);
  if (sig == MetricSignature::lorentzian && u.size() > 0) {
    const Eigen::Index last = u.size() - 1;
    acc -= 2.0 * u(last) * v(last);
  }
  return acc;
}

double wrap_parameter(double t, double period) {
  double r = std::fmod(t, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BILLIARD_LAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_budget(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

unsigned long long derive_seed(unsigned long long seed, unsigned long long stream) {
  // splitmix64 over the combined value
  unsigned long long z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace billiard_lab
