#include <exception>

#include "flexhedge/opf.hpp"

namespace flexhedge::opf {

std::vector<DispatchResult> solve_opf_series(const Network& net, std::span<const HourlyMarketData> series,
                                             std::span<const PriceCap> caps, bool flexibility_enabled) {
  const auto count = static_cast<long>(series.size());
  std::vector<DispatchResult> results(series.size());
  std::vector<std::exception_ptr> errors(series.size());

#pragma omp parallel for schedule(dynamic)
  for (long h = 0; h < count; ++h) {
    const auto i = static_cast<std::size_t>(h);
    try {
      results[i] = solve_opf_hour({net, series[i], caps, flexibility_enabled});
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  // Report the earliest failing hour regardless of thread timing.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<DispatchResult> solve_opf_series_serial(const Network& net,
                                                    std::span<const HourlyMarketData> series,
                                                    std::span<const PriceCap> caps,
                                                    bool flexibility_enabled) {
  std::vector<DispatchResult> results;
  results.reserve(series.size());
  for (const HourlyMarketData& hour : series) {
    results.push_back(solve_opf_hour({net, hour, caps, flexibility_enabled}));
  }
  return results;
}

}  // namespace flexhedge::opf
