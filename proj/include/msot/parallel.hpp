#pragma once

// Order-preserving parallel map over independent inputs.

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace msot {

/// Applies f to each input on up to `jobs` threads; results keep input order.
/// The first exception (by input index) is rethrown after all workers finish.
template <class In, class F>
auto parallel_map(const std::vector<In>& inputs, F f, int jobs) {
  using Out = std::invoke_result_t<F&, const In&>;
  std::vector<std::optional<Out>> slots(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < inputs.size();) {
      try {
        slots[i].emplace(f(inputs[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n = std::min<std::size_t>(inputs.size(), static_cast<std::size_t>(std::max(1, jobs)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Out> out;
  out.reserve(inputs.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace msot
