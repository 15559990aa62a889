#pragma once

#include <functional>

namespace treesir {

/// Bisection on [lo, hi]; fn(lo) and fn(hi) must have opposite signs (or be
/// zero). Runs until the bracket width drops below `tol` plus the floating
/// point floor, at most `max_iter` halvings. Returns the bracket midpoint.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double tol = 1e-12, int max_iter = 200);

/// Doubles `hi` away from `lo` until fn changes sign over [lo, hi].
/// Returns the expanded hi. Throws std::runtime_error after `max_doublings`.
double expand_bracket_up(const std::function<double(double)>& fn, double lo,
                         double hi, int max_doublings = 200);

}  // namespace treesir
