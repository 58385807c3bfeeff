#pragma once

#include <optional>

namespace ffts::detail {

/// Smallest c in [1, 1e12] with margin(c) > 0 for a margin that is non-decreasing in c.
template <typename F>
std::optional<double> minimal_scale(F&& margin) {
  double hi = 1.0;
  while (!(margin(hi) > 0.0)) {
    hi *= 2.0;
    if (hi > 1e12) return std::nullopt;
  }
  double lo = hi / 2.0;
  if (hi == 1.0) return 1.0;
  for (int i = 0; i < 80 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace ffts::detail
