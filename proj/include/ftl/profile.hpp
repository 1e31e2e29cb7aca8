#pragma once

#include <vector>

#include "ftl/models.hpp"

namespace ftl {

// Piecewise-constant profile: u[0] on (-inf, x[0]), u[k] on (x[k-1], x[k]),
// u[n] on (x[n-1], inf).
struct Profile {
  std::vector<double> x;
  std::vector<State> u;

  State at(double y) const;  // right-continuous
  const State &far_left() const { return u.front(); }
  const State &far_right() const { return u.back(); }
  // Drops zero-length cells and repeated states.
  Profile simplified() const;
};

Profile constant_profile(const State &s);

// Cell decomposition of two profiles over a common refinement of [a, b];
// the callback receives (x_lo, x_hi, p_state, q_state).
template <class F>
void for_each_common_cell(const Profile &p, const Profile &q, double a, double b, F &&f) {
  if (!(b > a)) return;
  std::size_t i = 0, j = 0;
  while (i < p.x.size() && p.x[i] <= a) ++i;
  while (j < q.x.size() && q.x[j] <= a) ++j;
  double lo = a;
  while (lo < b) {
    double hi = b;
    if (i < p.x.size() && p.x[i] < hi) hi = p.x[i];
    if (j < q.x.size() && q.x[j] < hi) hi = q.x[j];
    if (hi > lo) f(lo, hi, p.u[i], q.u[j]);
    if (i < p.x.size() && p.x[i] <= hi) ++i;
    if (j < q.x.size() && q.x[j] <= hi) ++j;
    lo = hi;
  }
}

}  // namespace ftl
