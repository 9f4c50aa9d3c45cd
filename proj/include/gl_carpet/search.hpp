#ifndef GL_CARPET_SEARCH_HPP_
#define GL_CARPET_SEARCH_HPP_

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gl_carpet {

struct LineMaximum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  double final_width = 0.0;
};

/// Finds a sign change of `fn` inside [lo, hi] by bisection.
///
/// Requires fn(lo) and fn(hi) to have opposite signs (or one of them to be
/// zero). Stops when the bracket is narrower than `tol` or when the midpoint
/// can no longer be separated from the endpoints in double precision.
template <class Fn>
double bisect_root(Fn&& fn, double lo, double hi, double tol) {
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw std::domain_error("bisect_root: no sign change on bracket");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section search for a maximum of a unimodal function on [lo, hi].
/// The bracket shrinks by 1/phi per iteration; the best evaluated point is
/// returned, so the result is never worse than either probe.
template <class Fn>
LineMaximum golden_section_max(Fn&& fn, double lo, double hi, double width_tol,
                               int max_iter = 200) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  int it = 0;
  while (b - a > width_tol && it < max_iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
    }
    ++it;
  }
  LineMaximum out;
  out.iterations = it;
  out.final_width = b - a;
  out.x = fc >= fd ? c : d;
  out.value = fc >= fd ? fc : fd;
  // Include the bracket ends: for a monotone function on the bracket the
  // maximum sits at an end that was never probed.
  const double fa = fn(a);
  const double fb = fn(b);
  if (fa > out.value) {
    out.x = a;
    out.value = fa;
  }
  if (fb > out.value) {
    out.x = b;
    out.value = fb;
  }
  return out;
}

}  // namespace gl_carpet

#endif  // GL_CARPET_SEARCH_HPP_
