#include "treesir/bisect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace treesir {

double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double tol, int max_iter) {
  if (!(lo < hi)) throw std::invalid_argument("bisect: lo must be < hi");
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: no sign change over bracket");

  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(lo), std::abs(hi));
    if (width <= tol + floor) break;
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double expand_bracket_up(const std::function<double(double)>& fn, double lo,
                         double hi, int max_doublings) {
  const double flo = fn(lo);
  for (int i = 0; i < max_doublings; ++i) {
    const double fhi = fn(hi);
    if (fhi == 0.0 || (fhi > 0.0) != (flo > 0.0)) return hi;
    hi = lo + 2.0 * (hi - lo);
  }
  throw std::runtime_error("expand_bracket_up: no sign change found");
}

}  // namespace treesir
