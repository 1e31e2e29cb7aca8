#include "ftl/shift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ftl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pos_tol(double x) { return 1e-11 * (1.0 + std::abs(x)); }

State mirror(const State &u) { return {u.a, -u.b}; }

std::size_t epoch_index(const FrontTrackingSolution &w, double t) {
  const auto it = std::upper_bound(w.epochs.begin(), w.epochs.end(), t,
                                   [](double v, const Epoch &e) { return v < e.t; });
  if (it == w.epochs.begin()) throw SolverError("no wild epoch covers t=" + std::to_string(t));
  return static_cast<std::size_t>(it - w.epochs.begin()) - 1;
}

// State of cell c: left of front c, or right of the last front.
State cell_state(const FrontTrackingSolution &w, const std::vector<Front> &F, std::size_t c) {
  if (c < F.size()) return F[c].left;
  return F.empty() ? w.far_left : F.back().right;
}

void push_segment(ShiftPath &p, double t0, double t1, double x0, double speed, const std::string &label) {
  if (!(t1 > t0)) return;
  if (!p.segments.empty()) {
    ShiftSegment &b = p.segments.back();
    if (b.label == label && b.speed == speed && b.t1 == t0) {
      b.t1 = t1;
      return;
    }
  }
  p.segments.push_back({t0, t1, x0, speed, label});
}

// Whether a front is a genuine Rankine-Hugoniot jump; blended fronts of the
// nu-interpolation are not, and neither are fan pieces.
bool exact_jump(const Model &m, const Front &w) {
  if (w.kind != FrontKind::Shock) return false;
  const auto fl = flux(m, w.left), fr = flux(m, w.right);
  const double r0 = fr[0] - fl[0] - w.speed * (w.right.a - w.left.a);
  const double r1 = fr[1] - fl[1] - w.speed * (w.right.b - w.left.b);
  return std::max(std::abs(r0), std::abs(r1)) <= 1e-11 * (1.0 + std::abs(w.right.a) + std::abs(w.right.b));
}

}  // namespace

double frame_constant(double s0, const ShiftParams &p) {
  if (!(s0 > 0.0)) throw DomainError("shock strength must be positive");
  if (s0 <= p.eps) return std::expm1(0.75 * p.C1 * s0) / s0;
  return (1.0 / p.a_star - 1.0) / s0;
}

FilippovField make_filippov_field(const Model &m, int family, const State &uL, double sigma,
                                  const ShiftParams &p) {
  return make_filippov_field(m, family, uL, sigma, frame_constant(std::abs(sigma), p), p);
}

FilippovField make_filippov_field(const Model &m, int family, const State &uL, double sigma, double C,
                                  const ShiftParams &p) {
  if (m.kind == ModelKind::Temple) throw DomainError("Filippov shifts need the isothermal or Burgers model");
  if (family == 2 && m.families() == 1) throw DomainError("Burgers has no second family");
  if (!(sigma < 0.0)) throw DomainError("a shift needs a shock (sigma < 0)");
  FilippovField f;
  f.model = m;
  f.family = family;
  f.uL = uL;
  f.uR = shock_curve(m, family, uL, sigma);
  f.sigma = sigma;
  f.speed = rh_speed_unchecked(m, f.uL, f.uR);
  f.C_star = p.C_star;
  f.L = p.L;
  const ShockFrame fr = family == 1 ? frame_from_states(m, f.uL, f.uR, C)
                                    : frame_from_states(m, mirror(f.uR), mirror(f.uL), C);
  f.geometry = build_pi_geometry(fr, p.K_ball, p.rays);
  return f;
}

bool FilippovField::vacuum(const State &u) const {
  if (!std::isfinite(u.a) || !std::isfinite(u.b)) return true;
  return model.kind == ModelKind::Isothermal && u.a <= model.rho_min;
}

bool FilippovField::inside(const State &u) const {
  if (vacuum(u)) return false;
  const State w = family == 1 ? u : mirror(u);
  return geometry.in_pi_star(w) || tilde_eta(geometry.frame, w) <= 0.0;
}

double FilippovField::velocity(const State &u) const {
  double v;
  if (vacuum(u)) {
    v = -C_star - L;
  } else {
    const State w = family == 1 ? u : mirror(u);
    v = lambda(model, 1, w);
    if (!inside(u)) v -= C_star + 2.0 * L;
  }
  return family == 1 ? v : -v;
}

std::string FilippovField::region(const State &u) const {
  return inside(u) ? "inside-Pi*" : "outside-penalty";
}

double FilippovField::a_left() const { return family == 1 ? geometry.frame.a1() : 1.0; }
double FilippovField::a_right() const { return family == 1 ? 1.0 : geometry.frame.a1(); }

double filippov_velocity(const FilippovField &f, const std::optional<State> &u) {
  if (!u) return f.family == 1 ? -f.C_star - f.L : f.C_star + f.L;
  return f.velocity(*u);
}

const ShiftSegment &ShiftPath::segment_at(double t) const {
  if (segments.empty()) throw DomainError("empty shift path");
  const auto it = std::upper_bound(segments.begin(), segments.end(), t,
                                   [](double v, const ShiftSegment &s) { return v < s.t1; });
  return it == segments.end() ? segments.back() : *it;
}

double ShiftPath::at(double t) const {
  if (segments.empty()) return x0;
  const ShiftSegment &s = segment_at(t);
  return s.x0 + s.speed * (t - s.t0);
}

double ShiftPath::velocity(double t) const { return segments.empty() ? 0.0 : segment_at(t).speed; }

double ShiftPath::lipschitz() const {
  double L = 0.0;
  for (const ShiftSegment &s : segments) L = std::max(L, std::abs(s.speed));
  return L;
}

std::string ShiftPath::csv_rows() const {
  std::ostringstream os;
  os.precision(17);
  for (const ShiftSegment &s : segments) os << shock_id << ',' << s.t0 << ',' << s.x0 << ',' << s.label << '\n';
  if (!segments.empty())
    os << shock_id << ',' << segments.back().t1 << ',' << segments.back().x1() << ',' << segments.back().label
       << '\n';
  return os.str();
}

std::pair<State, State> wild_traces(const FrontTrackingSolution &wild, double t, double x) {
  const auto &F = wild.epochs[epoch_index(wild, t)].fronts;
  std::size_t c = 0;
  while (c < F.size() && F[c].pos(t) < x - pos_tol(x)) ++c;
  std::size_t d = c;
  while (d < F.size() && F[d].pos(t) <= x + pos_tol(x)) ++d;
  return {cell_state(wild, F, c), cell_state(wild, F, d)};
}

ShiftPath build_shift(const FilippovField &f, const FrontTrackingSolution &wild, double t0, double x0,
                      double T, int shock_id) {
  ShiftPath p;
  p.shock_id = shock_id;
  p.t0 = t0;
  p.x0 = x0;
  double t = t0, x = x0;
  long guard = 0;
  while (t < T) {
    if (++guard > 2000000) throw SolverError("shift trace extraction stalled at t=" + std::to_string(t));
    const std::size_t e = epoch_index(wild, t);
    const double t_next = e + 1 < wild.epochs.size() ? std::min(wild.epochs[e + 1].t, T) : T;
    const auto &F = wild.epochs[e].fronts;
    const double tol = pos_tol(x);
    std::size_t i0 = 0;
    while (i0 < F.size() && F[i0].pos(t) < x - tol) ++i0;
    std::size_t i1 = i0;  // one past the last front sitting at x
    while (i1 < F.size() && F[i1].pos(t) <= x + tol) ++i1;

    // pick the first consistent motion: a cell, or sticking to a front
    std::size_t cell = i0;
    int stick = -1;
    if (i1 > i0) {
      bool found = false;
      if (f.velocity(cell_state(wild, F, i0)) < F[i0].speed) found = true;
      for (std::size_t k = i0; k < i1 && !found; ++k) {
        const double vl = f.velocity(F[k].left), vr = f.velocity(F[k].right);
        if (vl >= F[k].speed && F[k].speed >= vr) {
          stick = static_cast<int>(k);
          found = true;
          break;
        }
        const double vc = vr;
        if (vc > F[k].speed && (k + 1 == i1 || vc < F[k + 1].speed)) {
          cell = k + 1;
          found = true;
        }
      }
      if (!found) throw SolverError("no Filippov direction at t=" + std::to_string(t));
    }

    if (stick >= 0) {
      const Front &w = F[static_cast<std::size_t>(stick)];
      push_segment(p, t, t_next, x, w.speed, exact_jump(f.model, w) ? "rh-exact" : "boundary-follow");
      x = w.pos(t_next);
      t = t_next;
      continue;
    }

    const State u = cell_state(wild, F, cell);
    const double v = f.velocity(u);
    double t1 = t_next;
    int hit = -1;
    if (cell > 0 && F[cell - 1].speed > v) {
      const double th = t + std::max(0.0, x - F[cell - 1].pos(t)) / (F[cell - 1].speed - v);
      if (th < t1) {
        t1 = th;
        hit = static_cast<int>(cell) - 1;
      }
    }
    if (cell < F.size() && v > F[cell].speed) {
      const double th = t + std::max(0.0, F[cell].pos(t) - x) / (v - F[cell].speed);
      if (th < t1) {
        t1 = th;
        hit = static_cast<int>(cell);
      }
    }
    if (!(t1 > t)) {
      // touching a front that the grouping tolerance missed
      t1 = std::min(t_next, t + 1e-14 * (1.0 + std::abs(t)));
      hit = -1;
    }
    push_segment(p, t, t1, x, v, f.region(u));
    x = hit >= 0 ? F[static_cast<std::size_t>(hit)].pos(t1) : x + v * (t1 - t);
    t = t1;
  }
  return p;
}

double shift_dissipation(const FilippovField &f, const State &um, const State &up, double s) {
  const Model &m = f.model;
  return f.a_right() * (rel_entropy_flux(m, up, f.uR) - s * rel_entropy(m, up, f.uR)) -
         f.a_left() * (rel_entropy_flux(m, um, f.uL) - s * rel_entropy(m, um, f.uL));
}

double shift_entropy(const FilippovField &f, const Profile &u, double h, double R) {
  double acc = 0.0;
  auto cell = [&](double lo, double hi, const State &s) {
    lo = std::max(lo, -R);
    hi = std::min(hi, R);
    if (!(hi > lo)) return;
    if (h > lo) acc += f.a_left() * rel_entropy(f.model, s, f.uL) * (std::min(h, hi) - lo);
    if (h < hi) acc += f.a_right() * rel_entropy(f.model, s, f.uR) * (hi - std::max(h, lo));
  };
  double lo = -R;
  for (std::size_t k = 0; k < u.x.size(); ++k) {
    cell(lo, u.x[k], u.u[k]);
    lo = std::max(lo, u.x[k]);
  }
  cell(lo, R, u.u.back());
  return acc;
}

ShiftPolicy parse_shift_policy(const std::string &s) {
  if (s == "rh") return ShiftPolicy::RH;
  if (s == "offset") return ShiftPolicy::Offset;
  if (s == "filippov") return ShiftPolicy::Filippov;
  throw DomainError("unknown shift policy '" + s + "'");
}

std::string shift_policy_name(ShiftPolicy p) {
  switch (p) {
    case ShiftPolicy::RH: return "rh";
    case ShiftPolicy::Offset: return "offset";
    default: return "filippov";
  }
}

Profile ShiftedSolution::sample_rh(double t) const {
  const Model &m = sol.model;
  Profile p;
  State cur = sol.far_left;
  p.u.push_back(cur);
  for (const Front &f : sol.fronts_at(t)) {
    cur = f.kind == FrontKind::Shock ? shock_curve(m, f.family, cur, f.sigma)
                                     : rarefaction_curve(m, f.family, cur, f.sigma);
    const double x = f.pos(t);
    p.x.push_back(p.x.empty() ? x : std::max(x, p.x.back()));
    p.u.push_back(cur);
  }
  return p;
}

std::string ShiftedSolution::paths_csv() const {
  std::string out = kShiftCsvHeader;
  for (const auto &[id, path] : paths) out += path.csv_rows();
  return out;
}

ShiftedSolution shifted_evolve(const Model &m, double nu, const Profile &data, double T,
                               const ShiftOptions &opt, const GlimmParams &gp) {
  if (opt.policy == ShiftPolicy::Filippov && !opt.wild)
    throw DomainError("the Filippov policy needs a wild solution");
  ShiftedSolution out;
  out.policy = opt.policy;
  std::map<int, double> death;
  EvolveOptions eo = opt.evolve;
  eo.shock_speed = [&](const Front &f, double t, double nat) -> std::optional<SpeedRule> {
    switch (opt.policy) {
      case ShiftPolicy::RH: return SpeedRule{rh_speed_unchecked(m, f.left, f.right), kInf, "rh-exact"};
      case ShiftPolicy::Offset: return SpeedRule{nat + opt.offset, kInf, "offset"};
      default: break;
    }
    if (std::abs(f.sigma) < opt.params.s_floor)
      return SpeedRule{rh_speed_unchecked(m, f.left, f.right), kInf, "rh-negligible"};
    auto it = out.paths.find(f.id);
    if (it == out.paths.end()) {
      const FilippovField field = make_filippov_field(m, f.family, f.left, f.sigma, opt.params);
      it = out.paths.emplace(f.id, build_shift(field, *opt.wild, t, f.pos(t), T, f.id)).first;
    }
    if (it->second.segments.empty()) return std::nullopt;
    const ShiftSegment &s = it->second.segment_at(t);
    return SpeedRule{s.speed, s.t1 >= T ? kInf : s.t1, s.label};
  };
  eo.on_anchor = [&](const Front &f, double t, double nat, const std::string &label) {
    out.anchors.push_back({f.id, t, f.speed, nat, label});
    if (opt.evolve.on_anchor) opt.evolve.on_anchor(f, t, nat, label);
  };
  eo.on_death = [&](const Front &f, double t) {
    death[f.id] = t;
    if (opt.evolve.on_death) opt.evolve.on_death(f, t);
  };
  eo.on_meeting = [&](const std::vector<Front> &in, double t) {
    if (opt.policy == ShiftPolicy::Filippov)
      for (std::size_t i = 0; i + 1 < in.size(); ++i)
        if (in[i].kind == FrontKind::Shock && in[i + 1].kind == FrontKind::Shock && in[i].family == 1 &&
            in[i + 1].family == 2)
          throw InvariantError("shift order violated: 1-shock " + std::to_string(in[i].id) + " reached 2-shock " +
                               std::to_string(in[i + 1].id) + " at t=" + std::to_string(t));
    if (opt.evolve.on_meeting) opt.evolve.on_meeting(in, t);
  };
  out.sol = init_fronts(m, nu, data, gp, eo);
  evolve(out.sol, T, eo);
  // cut paths at the death of their shock
  for (auto &[id, path] : out.paths) {
    const auto d = death.find(id);
    if (d == death.end()) continue;
    auto &segs = path.segments;
    while (!segs.empty() && segs.back().t0 >= d->second) segs.pop_back();
    if (!segs.empty()) segs.back().t1 = std::min(segs.back().t1, d->second);
  }
  return out;
}

ShiftCost shift_cost_parts(const FrontTrackingSolution &psi, double tau) {
  ShiftCost c;
  for (std::size_t e = 0; e < psi.epochs.size(); ++e) {
    const double a = psi.epochs[e].t;
    const double b = std::min(tau, e + 1 < psi.epochs.size() ? psi.epochs[e + 1].t : psi.t_end);
    if (!(b > a)) continue;
    for (const Front &f : psi.epochs[e].fronts) {
      if (f.kind != FrontKind::Shock) continue;
      const double d = f.speed - psi.natural_speed[static_cast<std::size_t>(f.id)];
      const double w = std::abs(f.sigma) * (b - a);
      c.cost += w * std::abs(d);
      c.mass += w;
      c.quadratic += w * d * d;
    }
  }
  return c;
}

double shift_cost(const ShiftedSolution &psi, double tau) { return shift_cost_parts(psi.sol, tau).cost; }

}  // namespace ftl
