#include "ftl/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ftl/shift.hpp"

namespace ftl {

namespace {

double state_norm(const State &a, const State &b) { return std::hypot(a.a - b.a, a.b - b.b); }

double neg(double s) { return s < 0.0 ? -s : 0.0; }

void check_far_fields(const Profile &u, const Profile &v) {
  if (!(u.far_left() == v.far_left()) || !(u.far_right() == v.far_right()))
    throw DomainError("profiles must agree outside a bounded interval");
}

std::pair<double, double> support(const Profile &u, const Profile &v) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const Profile *p : {&u, &v})
    for (double x : p->x) {
      lo = any ? std::min(lo, x) : x;
      hi = any ? std::max(hi, x) : x;
      any = true;
    }
  return {lo, hi};
}

struct Cell {
  double lo, hi;
  State u, v;
  std::size_t left_count;   // jumps of u at or left of lo
  std::size_t right_start;  // first jump of ubar at or right of hi
};

std::vector<Cell> sweep_cells(const Profile &u, const Profile &v) {
  std::vector<Cell> cells;
  const auto [a, b] = support(u, v);
  for_each_common_cell(u, v, a, b, [&](double lo, double hi, const State &us, const State &vs) {
    if (us == vs) return;
    const auto lc = static_cast<std::size_t>(std::upper_bound(u.x.begin(), u.x.end(), lo) - u.x.begin());
    const auto rs = static_cast<std::size_t>(std::lower_bound(v.x.begin(), v.x.end(), hi) - v.x.begin());
    cells.push_back({lo, hi, us, vs, lc, rs});
  });
  return cells;
}

PathJump moving_jump(const Model &m, double nu, const Cell &c) {
  PathJump j;
  j.x = 0.5 * (c.lo + c.hi);
  j.xi = 1.0;
  const Strengths s = solve_strengths(m, nu, c.u, c.v);
  j.sigma[0] = s.sigma1;
  j.sigma[1] = s.sigma2;
  return j;
}

std::vector<PathJump> cell_config(const Cell &c, const std::vector<PathJump> &ju, const std::vector<PathJump> &jv,
                                  const PathJump &mid) {
  std::vector<PathJump> out(ju.begin(), ju.begin() + static_cast<long>(c.left_count));
  out.push_back(mid);
  out.insert(out.end(), jv.begin() + static_cast<long>(c.right_start), jv.end());
  return out;
}

DnuResult dnu_impl(const Model &m, double nu, const Profile &u0, const Profile &v0, Flavor flavor,
                   const UpsilonParams &p, bool parallel) {
  check_far_fields(u0, v0);
  const Profile u = u0.simplified(), v = v0.simplified();
  const std::vector<PathJump> ju = profile_jumps(m, nu, u), jv = profile_jumps(m, nu, v);
  const std::vector<Cell> cells = sweep_cells(u, v);
  std::vector<UpsilonValue> vals(cells.size());
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (long k = 0; k < static_cast<long>(cells.size()); ++k) {
    const Cell &c = cells[static_cast<std::size_t>(k)];
    vals[static_cast<std::size_t>(k)] = upsilon(cell_config(c, ju, jv, moving_jump(m, nu, c)), flavor, p);
  }
  DnuResult r;
  r.cells = cells.size();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const double w = cells[k].hi - cells[k].lo;
    r.value += w * vals[k].value;
    r.l1_strength += w * vals[k].l1;
    r.max_weight = std::max(r.max_weight, vals[k].max_weight);
  }
  return r;
}

}  // namespace

double l1_distance(const Profile &p, const Profile &q, double a, double b) {
  double acc = 0.0;
  for_each_common_cell(p, q, a, b, [&](double lo, double hi, const State &x, const State &y) {
    acc += (hi - lo) * state_norm(x, y);
  });
  return acc;
}

double l2_distance(const Profile &p, const Profile &q, double a, double b) {
  double acc = 0.0;
  for_each_common_cell(p, q, a, b, [&](double lo, double hi, const State &x, const State &y) {
    const double d = state_norm(x, y);
    acc += (hi - lo) * d * d;
  });
  return std::sqrt(acc);
}

double linf_distance(const Profile &p, const Profile &q, double a, double b) {
  double acc = 0.0;
  for_each_common_cell(p, q, a, b, [&](double, double, const State &x, const State &y) {
    acc = std::max(acc, state_norm(x, y));
  });
  return acc;
}

// Whole-line versions: outside the breakpoints both profiles are constant,
// and unequal far fields make the integrals infinite.
double l1_distance(const Profile &p, const Profile &q) {
  if (!(p.far_left() == q.far_left()) || !(p.far_right() == q.far_right()))
    return std::numeric_limits<double>::infinity();
  const auto [a, b] = support(p, q);
  return l1_distance(p, q, a, b);
}

double l2_distance(const Profile &p, const Profile &q) {
  if (!(p.far_left() == q.far_left()) || !(p.far_right() == q.far_right()))
    return std::numeric_limits<double>::infinity();
  const auto [a, b] = support(p, q);
  return l2_distance(p, q, a, b);
}

double linf_distance(const Profile &p, const Profile &q) {
  const auto [a, b] = support(p, q);
  double d = std::max(state_norm(p.far_left(), q.far_left()), state_norm(p.far_right(), q.far_right()));
  return std::max(d, linf_distance(p, q, a, b));
}

double PseudopolygonalPath::l1_length() const {
  double acc = 0.0;
  for (const PathInterval &h : intervals) {
    double s = 0.0;
    for (const PathJump &j : h.jumps) s += (std::abs(j.sigma[0]) + std::abs(j.sigma[1])) * std::abs(j.xi);
    acc += (h.b - h.a) * s;
  }
  return acc;
}

UpsilonValue upsilon(const std::vector<PathJump> &jumps, Flavor flavor, const UpsilonParams &p) {
  UpsilonValue out;
  const std::size_t n = jumps.size();
  double N = 0.0, V = 0.0;
  for (const PathJump &j : jumps)
    for (double s : j.sigma) {
      N += neg(s);
      V += std::abs(s);
    }
  if (flavor == Flavor::Isothermal) {
    // R for jump k: 2-waves to its left plus 1-waves to its right
    double left2 = 0.0, right1 = 0.0;
    for (const PathJump &j : jumps) right1 += std::abs(j.sigma[0]);
    for (std::size_t k = 0; k < n; ++k) {
      const PathJump &j = jumps[k];
      right1 -= std::abs(j.sigma[0]);
      const double R = left2 + right1;
      for (double s : j.sigma) {
        const double w = std::exp(p.H1 * (2.0 * N - neg(s)) + p.H2 * R + p.H3 * V);
        out.value += std::abs(s * j.xi) * w;
        out.l1 += std::abs(s * j.xi);
        if (s != 0.0) out.max_weight = std::max(out.max_weight, w);
      }
      left2 += std::abs(j.sigma[1]);
    }
    return out;
  }
  // approaching partners: a left wave of family 2 with a right wave of
  // family 1, or the same family with at least one shock
  std::vector<double> partner(2 * n, 0.0);
  double all[2] = {0.0, 0.0}, shocks[2] = {0.0, 0.0}, Q = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (int f = 0; f < 2; ++f) {
      const double s = jumps[k].sigma[f];
      const bool sh = s < 0.0;
      double left = sh ? all[f] : shocks[f];
      if (f == 0) left += all[1];
      partner[2 * k + static_cast<std::size_t>(f)] = left;
      Q += std::abs(s) * left;
    }
    for (int f = 0; f < 2; ++f) {
      all[f] += std::abs(jumps[k].sigma[f]);
      if (jumps[k].sigma[f] < 0.0) shocks[f] += std::abs(jumps[k].sigma[f]);
    }
  }
  double rall[2] = {0.0, 0.0}, rshocks[2] = {0.0, 0.0};
  for (std::size_t k = n; k-- > 0;) {
    for (int f = 0; f < 2; ++f) {
      const double s = jumps[k].sigma[f];
      const bool sh = s < 0.0;
      double right = sh ? rall[f] : rshocks[f];
      if (f == 1) right += rall[0];
      partner[2 * k + static_cast<std::size_t>(f)] += right;
    }
    for (int f = 0; f < 2; ++f) {
      rall[f] += std::abs(jumps[k].sigma[f]);
      if (jumps[k].sigma[f] < 0.0) rshocks[f] += std::abs(jumps[k].sigma[f]);
    }
  }
  const double eQ = std::exp(p.K * Q);
  for (std::size_t k = 0; k < n; ++k)
    for (int f = 0; f < 2; ++f) {
      const double s = jumps[k].sigma[f];
      const double sg = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
      const double w = (2.0 + sg) * (1.0 + p.K * partner[2 * k + static_cast<std::size_t>(f)]) * eQ;
      out.value += std::abs(s * jumps[k].xi) * w;
      out.l1 += std::abs(s * jumps[k].xi);
      if (s != 0.0) out.max_weight = std::max(out.max_weight, w);
    }
  return out;
}

std::vector<PathJump> profile_jumps(const Model &m, double nu, const Profile &u) {
  std::vector<PathJump> out;
  for (std::size_t k = 0; k < u.x.size(); ++k) {
    PathJump j;
    j.x = u.x[k];
    const Strengths s = solve_strengths(m, nu, u.u[k], u.u[k + 1]);
    j.sigma[0] = s.sigma1;
    j.sigma[1] = s.sigma2;
    out.push_back(j);
  }
  return out;
}

PseudopolygonalPath sweeping_path(const Model &m, double nu, const Profile &u0, const Profile &v0, Flavor flavor) {
  check_far_fields(u0, v0);
  const Profile u = u0.simplified(), v = v0.simplified();
  const std::vector<PathJump> ju = profile_jumps(m, nu, u), jv = profile_jumps(m, nu, v);
  PseudopolygonalPath path;
  path.flavor = flavor;
  for (const Cell &c : sweep_cells(u, v)) path.intervals.push_back({c.lo, c.hi, cell_config(c, ju, jv, moving_jump(m, nu, c))});
  return path;
}

DnuResult dnu_upper(const Model &m, double nu, const Profile &u, const Profile &ubar, Flavor flavor,
                    const UpsilonParams &p) {
  return dnu_impl(m, nu, u, ubar, flavor, p, true);
}

DnuResult dnu_upper_serial(const Model &m, double nu, const Profile &u, const Profile &ubar, Flavor flavor,
                           const UpsilonParams &p) {
  return dnu_impl(m, nu, u, ubar, flavor, p, false);
}

double strength_l1(const Model &m, double nu, const Profile &u0, const Profile &v0) {
  check_far_fields(u0, v0);
  const Profile u = u0.simplified(), v = v0.simplified();
  double acc = 0.0;
  for (const Cell &c : sweep_cells(u, v)) {
    const PathJump j = moving_jump(m, nu, c);
    acc += (c.hi - c.lo) * (std::abs(j.sigma[0]) + std::abs(j.sigma[1]));
  }
  return acc;
}

double k2_isothermal(double V, const UpsilonParams &p) { return std::exp((2.0 * p.H1 + p.H2 + p.H3) * V); }

double k2_smallbv(double V, double Q, const UpsilonParams &p) { return 3.0 * (1.0 + p.K * V) * std::exp(p.K * Q); }

std::optional<UpsilonValue> elementary_upsilon(const std::vector<Front> &a, const std::vector<Front> &b,
                                               double dtheta, double t, Flavor flavor, const UpsilonParams &p) {
  if (a.size() != b.size()) return std::nullopt;
  std::vector<PathJump> jumps;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].id != b[k].id || a[k].family != b[k].family) return std::nullopt;
    PathJump j;
    j.x = a[k].pos(t);
    j.sigma[a[k].family - 1] = a[k].sigma;
    j.xi = (b[k].pos(t) - a[k].pos(t)) / dtheta;
    jumps.push_back(j);
  }
  return upsilon(jumps, flavor, p);
}

std::vector<GrowthSample> shifted_growth(const FrontTrackingSolution &v, const FrontTrackingSolution &psi,
                                         const std::vector<double> &times, Flavor flavor, const UpsilonParams &p,
                                         double c) {
  if (l1_distance(v.sample(0.0), psi.sample(0.0)) > 1e-12)
    throw DomainError("shifted growth needs solutions with the same initial data");
  std::vector<GrowthSample> out;
  double K2 = 0.0;
  for (double t : times) {
    const Profile a = v.sample(t), b = psi.sample(t);
    const DnuResult d = dnu_upper(v.model, v.nu, a, b, flavor, p);
    GrowthSample g;
    g.t = t;
    g.l1 = l1_distance(a, b);
    g.l2 = l2_distance(a, b);
    g.measured = d.value;
    g.cost = shift_cost_parts(psi, t).cost;
    K2 = std::max(K2, d.max_weight);
    g.K2 = K2;
    g.bound = K2 * g.cost + c * std::sqrt(v.nu);
    out.push_back(g);
  }
  return out;
}

std::string growth_csv(const std::vector<GrowthSample> &rows) {
  std::ostringstream os;
  os.precision(12);
  os << kDistanceCsvHeader;
  for (const GrowthSample &g : rows) os << g.t << ',' << g.l1 << ',' << g.l2 << ',' << g.measured << ',' << g.bound << '\n';
  return os.str();
}

}  // namespace ftl
