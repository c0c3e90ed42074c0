// Fixed smooth bump and cutoff profiles.
#pragma once

#include <cmath>

namespace driftdiff {

// exp(-1/(1-t^2)) on |t| < 1, zero outside. Returns exact 0.0 beyond the
// support so downstream products stay bit-exact there.
inline double bump_profile(double t) {
    const double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t2));
}

namespace detail {
inline double transition(double t) {
    // exp(-1/t) glue for the smooth partition below; exact 0 for t <= 0.
    if (t <= 0.0) return 0.0;
    return std::exp(-1.0 / t);
}
}  // namespace detail

// C^inf cutoff with h = 1 on |x| <= 1, h = 0 on |x| >= 2 and 0 <= h <= 1.
// On |x| <= 1 it returns the literal constant 1.0, so multiplying a flux by
// the cutoff leaves evaluations on that range bit-identical.
inline double cutoff_h(double x) {
    const double ax = std::abs(x);
    if (ax <= 1.0) return 1.0;
    if (ax >= 2.0) return 0.0;
    const double up = detail::transition(2.0 - ax);
    const double down = detail::transition(ax - 1.0);
    return up / (up + down);
}

}  // namespace driftdiff
