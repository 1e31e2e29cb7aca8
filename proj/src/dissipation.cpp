#include "ftl/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace ftl {

namespace {

// Bracketed root by TOMS 748; f(lo) and f(hi) must differ in sign.
template <class F>
double bracketed_root(F f, double lo, double hi, double flo, double fhi) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw SolverError("root not bracketed");
  std::uintmax_t iters = 300;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 4);
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

double sqnorm(const State &a, const State &b) {
  const double x = a.a - b.a, y = a.b - b.b;
  return x * x + y * y;
}

bool admissible(const Model &m, const State &u) {
  if (!std::isfinite(u.a) || !std::isfinite(u.b)) return false;
  if (m.kind == ModelKind::Isothermal) return u.a >= m.rho_min;
  return true;
}

}  // namespace

ShockFrame make_frame(const Model &m, const State &uL, double s0, double C) {
  if (!(s0 > 0.0)) throw DomainError("frame strength must be positive");
  return frame_from_states(m, uL, shock_curve(m, 1, uL, -s0), C);
}

ShockFrame frame_from_states(const Model &m, const State &uL, const State &uR, double C) {
  ShockFrame f;
  f.model = m;
  f.uL = uL;
  f.uR = uR;
  f.C = C;
  f.s0 = std::abs(wave_strength(m, 1, uL, uR));
  f.sigma_LR = rh_shock_speed(m, uL, uR);
  if (!(lambda(m, 1, uR) < f.sigma_LR && f.sigma_LR < lambda(m, 1, uL)))
    throw DomainError("frame shock violates the Lax condition (s0=" + std::to_string(f.s0) + ")");
  return f;
}

double tilde_eta(const ShockFrame &f, const State &u) {
  return f.a1() * rel_entropy(f.model, u, f.uL) - rel_entropy(f.model, u, f.uR);
}

double tilde_q(const ShockFrame &f, const State &u) {
  return f.a1() * rel_entropy_flux(f.model, u, f.uL) - rel_entropy_flux(f.model, u, f.uR);
}

std::array<double, 2> tilde_eta_grad(const ShockFrame &f, const State &u) {
  // grad_u eta(u|b) = grad eta(u) - grad eta(b)
  const auto g = entropy_grad(f.model, u), gl = entropy_grad(f.model, f.uL),
             gr = entropy_grad(f.model, f.uR);
  const double a = f.a1();
  return {a * (g[0] - gl[0]) - (g[0] - gr[0]), a * (g[1] - gl[1]) - (g[1] - gr[1])};
}

double d_cont(const ShockFrame &f, const State &u) {
  return -tilde_q(f, u) + lambda(f.model, 1, u) * tilde_eta(f, u);
}

double d_cont_direct(const ShockFrame &f, const State &u) {
  const Model &m = f.model;
  const double l1 = lambda(m, 1, u);
  return (rel_entropy_flux(m, u, f.uR) - l1 * rel_entropy(m, u, f.uR)) -
         f.a1() * (rel_entropy_flux(m, u, f.uL) - l1 * rel_entropy(m, u, f.uL));
}

double d_rh(const ShockFrame &f, const State &um, const State &up, double speed) {
  const Model &m = f.model;
  if (!(um == up)) {
    const double xi = rh_speed_unchecked(m, um, up);
    if (rh_residual(m, um, up) > 1e-8 || std::abs(xi - speed) > 1e-8 * (1.0 + std::abs(xi)))
      throw DomainError("D_RH input is not a Rankine-Hugoniot pair");
    const double tol = 1e-12 * (1.0 + std::abs(speed));
    if (!(lambda(m, 1, up) < speed + tol && speed < lambda(m, 1, um) + tol))
      throw DomainError("D_RH input is not an entropic 1-shock");
  }
  return (rel_entropy_flux(m, up, f.uR) - speed * rel_entropy(m, up, f.uR)) -
         f.a1() * (rel_entropy_flux(m, um, f.uL) - speed * rel_entropy(m, um, f.uL));
}

double quantified_identity_residual(const Model &m, const State &v, const State &u, int family,
                                    double s) {
  if (s < 0.0) throw DomainError("curve parameter must be non-negative");
  if (s == 0.0) return 0.0;
  const State S = shock_curve(m, family, u, -s);
  const double sig = shock_speed_along(m, family, u, s);
  const double lhs = rel_entropy_flux(m, S, v) - sig * rel_entropy(m, S, v);
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    return shock_speed_rate(m, family, u, t) * rel_entropy(m, u, shock_curve(m, family, u, -t));
  };
  double err = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, s, 15, 1e-10, &err);
  const double rhs = rel_entropy_flux(m, u, v) - sig * rel_entropy(m, u, v) + integral;
  return std::abs(lhs - rhs);
}

bool PiGeometry::in_pi(const State &u) const {
  if (!admissible(frame.model, u)) return false;
  return tilde_eta(frame, u) < 0.0;
}

bool PiGeometry::in_pi_star(const State &u) const {
  if (!admissible(frame.model, u)) return false;
  if (std::sqrt(sqnorm(u, u_star)) < r_ball) return true;
  return tilde_eta(frame, u) < 0.0;
}

namespace {

struct RayHit {
  double r = 0.0;
  bool clipped = false;
};

RayHit ray_boundary(const ShockFrame &f, double theta) {
  const Model &m = f.model;
  const double c = std::cos(theta), s = std::sin(theta);
  auto at = [&](double r) { return State{f.uL.a + r * c, f.uL.b + r * s}; };
  double r_max = std::numeric_limits<double>::infinity();
  if (m.kind == ModelKind::Isothermal && c < 0.0) r_max = (f.uL.a - 2.0 * m.rho_min) / (-c);
  auto g = [&](double r) { return tilde_eta(f, at(r)); };
  double lo = 0.0, glo = tilde_eta(f, f.uL);
  double hi = std::min(r_max, 0.05 / std::max(f.C, 1e-3));
  double ghi = g(hi);
  for (int k = 0; k < 80 && ghi < 0.0; ++k) {
    if (hi >= r_max) return {r_max, true};
    lo = hi;
    glo = ghi;
    hi = std::min(r_max, 2.0 * hi);
    ghi = g(hi);
  }
  if (ghi < 0.0) return {hi, true};
  return {bracketed_root(g, lo, hi, glo, ghi), false};
}

State along_ray(const ShockFrame &f, double theta, double r) {
  return {f.uL.a + r * std::cos(theta), f.uL.b + r * std::sin(theta)};
}

}  // namespace

PiGeometry build_pi_geometry(const ShockFrame &f, double K_ball, int rays) {
  const Model &m = f.model;
  if (!(tilde_eta(f, f.uL) < 0.0 && tilde_eta(f, f.uR) > 0.0))
    throw ConsistencyError("frame does not separate u_L and u_R by eta~ (s0=" + std::to_string(f.s0) + ")");
  PiGeometry g;
  g.frame = f;
  g.K_ball = K_ball;
  g.r_ball = K_ball / f.C;
  const bool scalar = m.families() == 1;
  const int n = scalar ? 2 : rays;
  for (int k = 0; k < n; ++k) {
    const double th = scalar ? (k == 0 ? 0.0 : std::numbers::pi) : 2.0 * std::numbers::pi * k / n;
    const RayHit h = ray_boundary(f, th);
    g.angles.push_back(th);
    g.radii.push_back(h.r);
    g.clipped.push_back(h.clipped ? 1 : 0);
    g.boundary.push_back(along_ray(f, th, h.r));
  }
  // maximizer of D_cont on the sampled boundary, then a local polish
  std::vector<double> D(g.boundary.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < g.boundary.size(); ++k) {
    D[k] = g.clipped[k] ? -1e300 : d_cont(f, g.boundary[k]);
    if (D[k] > D[best]) best = k;
  }
  g.u_star = g.boundary[best];
  g.d_star = D[best];
  if (!scalar) {
    const double dth = 2.0 * std::numbers::pi / n;
    auto negD = [&](double th) {
      const RayHit h = ray_boundary(f, th);
      if (h.clipped) return 1e300;
      return -d_cont(f, along_ray(f, th, h.r));
    };
    const double th0 = g.angles[best];
    const auto r = boost::math::tools::brent_find_minima(negD, th0 - dth, th0 + dth,
                                                         std::numeric_limits<double>::digits / 2);
    if (-r.second >= g.d_star) {
      g.u_star = along_ray(f, r.first, ray_boundary(f, r.first).r);
      g.d_star = -r.second;
    }
    // other local peaks must sit clearly below the global one
    g.unique_max = true;
    for (std::size_t k = 0; k < D.size(); ++k) {
      const double prev = D[(k + D.size() - 1) % D.size()], next = D[(k + 1) % D.size()];
      const std::size_t gap = std::min((k + D.size() - best) % D.size(), (best + D.size() - k) % D.size());
      if (gap > 2 && D[k] > prev && D[k] >= next && D[k] > D[best] - 1e-6 * std::abs(D[best]))
        g.unique_max = false;
    }
    const auto gr = tilde_eta_grad(f, g.u_star);
    const auto l1 = left_eigvec(m, 1, g.u_star);
    g.certificate = std::abs(gr[0] * l1[1] - gr[1] * l1[0]) / (std::hypot(gr[0], gr[1]) * std::hypot(l1[0], l1[1]));
  }
  // boundary point on the shock curve from u_L
  auto h = [&](double s) { return tilde_eta(f, s == 0.0 ? f.uL : shock_curve(m, 1, f.uL, -s)); };
  const double s_hit = bracketed_root(h, 0.0, f.s0, tilde_eta(f, f.uL), tilde_eta(f, f.uR));
  g.u0 = s_hit == 0.0 ? f.uL : shock_curve(m, 1, f.uL, -s_hit);
  for (std::size_t i = 0; i < g.boundary.size(); ++i)
    for (std::size_t j = i + 1; j < g.boundary.size(); ++j)
      g.diameter = std::max(g.diameter, std::sqrt(sqnorm(g.boundary[i], g.boundary[j])));
  g.box = {g.u_star.a - g.r_ball, g.u_star.a + g.r_ball, g.u_star.b - g.r_ball, g.u_star.b + g.r_ball};
  for (const State &b : g.boundary) {
    g.box[0] = std::min(g.box[0], b.a);
    g.box[1] = std::max(g.box[1], b.a);
    g.box[2] = std::min(g.box[2], b.b);
    g.box[3] = std::max(g.box[3], b.b);
  }
  if (scalar) g.box[2] = g.box[3] = 0.0;
  if (m.kind == ModelKind::Isothermal) g.box[0] = std::max(g.box[0], m.rho_min);
  return g;
}

MaximalShock maximal_shock(const PiGeometry &g, const State &u) {
  const ShockFrame &f = g.frame;
  const Model &m = f.model;
  MaximalShock out;
  out.u_plus = u;
  const double te = tilde_eta(f, u);
  if (!(te < 0.0)) return out;
  auto G = [&](double s) { return rel_entropy(m, u, shock_curve(m, 1, u, -s)) + te; };
  double lo = 0.0, glo = te, hi = std::max(f.s0, 1e-3), ghi = G(hi);
  for (int k = 0; k < 80 && ghi < 0.0; ++k) {
    lo = hi;
    glo = ghi;
    hi *= 2.0;
    ghi = G(hi);
  }
  if (ghi < 0.0) throw SolverError("maximal shock: bracket not found");
  out.s = bracketed_root(G, lo, hi, glo, ghi);
  out.u_plus = shock_curve(m, 1, u, -out.s);
  return out;
}

double curve_horizon(const ShockFrame &f, double cap) {
  const Model &m = f.model;
  const auto r = right_eigvec(m, 1, f.uL);
  const auto H = entropy_hessian(m, f.uL);
  const double lam = r[0] * (H[0] * r[0] + H[1] * r[1]) + r[1] * (H[2] * r[0] + H[3] * r[1]);
  auto g = [&](double s) { return s <= 0.0 ? 0.0 : rel_entropy(m, f.uL, shock_curve(m, 1, f.uL, -s)); };
  const double h = 1e-4, step = 1e-3;
  double t = 0.0;
  const int n = static_cast<int>(std::round(cap / step));
  for (int k = 1; k <= n; ++k) {
    const double s = k * step;
    const double d2 = (g(s + h) - 2.0 * g(s) + g(s - h)) / (h * h);
    if (d2 < 0.5 * lam) break;
    t = s;
  }
  return std::min(t, cap);
}

namespace {

ScanReport scan_impl(const Model &m, double s0, double C, double K_ball, int grid, int s_samples,
                     bool keep_rows, bool parallel) {
  ScanReport rep;
  rep.s0 = s0;
  rep.C = C;
  rep.K_ball = K_ball;
  const State uL = m.kind == ModelKind::Isothermal ? iso_state(1.0, 0.0) : State{1.0, 0.0};
  const ShockFrame f = make_frame(m, uL, s0, C);
  const PiGeometry g = build_pi_geometry(f, K_ball);
  rep.t_bar = curve_horizon(f);
  rep.certificate = g.certificate;

  std::vector<double> svals;
  for (double q : {1e-3, 3e-3, 1e-2, 3e-2}) svals.push_back(q * rep.t_bar);
  for (int k = 1; k <= s_samples; ++k) svals.push_back(rep.t_bar * k / s_samples);

  // candidate states: grid over the Pi* box plus the sampled boundary
  std::vector<State> pts;
  const int gy = m.families() == 1 ? 1 : grid;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < gy; ++j) {
      const double a = g.box[0] + (g.box[1] - g.box[0]) * (i + 0.5) / grid;
      const double b = gy == 1 ? 0.0 : g.box[2] + (g.box[3] - g.box[2]) * (j + 0.5) / gy;
      pts.push_back({a, b});
    }
  const std::size_t n_grid = pts.size();
  for (std::size_t k = 0; k < g.boundary.size(); ++k)
    if (!g.clipped[k]) pts.push_back(g.boundary[k]);
  pts.push_back(g.u_star);

  struct Local {
    long n_cont = 0, n_rh = 0;
    double worst_cont = -1e300, worst_rh = -1e300, K_cont = 1e300, K_rh = 1e300;
    std::vector<ScanRow> rows;
  };
  std::vector<Local> per(pts.size());

#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (long p = 0; p < static_cast<long>(pts.size()); ++p) {
    const State &u = pts[static_cast<std::size_t>(p)];
    Local &L = per[static_cast<std::size_t>(p)];
    const bool on_boundary = static_cast<std::size_t>(p) >= n_grid;
    if (!on_boundary && !g.in_pi_star(u)) continue;
    const double dist_c = sqnorm(u, f.uL) + sqnorm(u, f.uR);
    const double D = d_cont(f, u);
    L.n_cont++;
    L.worst_cont = std::max(L.worst_cont, D);
    L.K_cont = std::min(L.K_cont, -D / (s0 * dist_c));
    if (keep_rows) L.rows.push_back({u.a, u.b, 0.0, D, 0.0, 0.0, false});
    if (on_boundary) continue;
    for (double s : svals) {
      const State up = shock_curve(m, 1, u, -s);
      const double sp = rh_speed_unchecked(m, u, up);
      const double Drh = d_rh(f, u, up, sp);
      const double dist = sqnorm(u, f.uL) + sqnorm(up, f.uR);
      L.n_rh++;
      L.worst_rh = std::max(L.worst_rh, Drh);
      L.K_rh = std::min(L.K_rh, -Drh / (s0 * dist));
      if (keep_rows) L.rows.push_back({u.a, u.b, s, Drh, 0.0, 0.0, true});
    }
  }
  for (Local &L : per) {
    rep.n_cont += L.n_cont;
    rep.n_rh += L.n_rh;
    rep.worst_cont = std::max(rep.worst_cont, L.worst_cont);
    rep.worst_rh = std::max(rep.worst_rh, L.worst_rh);
    rep.K_cont = std::min(rep.K_cont, L.K_cont);
    rep.K_rh = std::min(rep.K_rh, L.K_rh);
    if (keep_rows) rep.rows.insert(rep.rows.end(), L.rows.begin(), L.rows.end());
  }
  for (ScanRow &r : rep.rows) {
    const State u{r.u1, r.u2};
    const State up = r.rh ? shock_curve(m, 1, u, -r.s) : u;
    const double K = r.rh ? rep.K_rh : rep.K_cont;
    r.bound_rhs = -K * s0 * (sqnorm(u, f.uL) + sqnorm(up, f.uR));
    r.margin = r.D - r.bound_rhs;
  }
  return rep;
}

}  // namespace

ScanReport negativity_scan(const Model &m, double s0, double C, double K_ball, int grid, int s_samples,
                           bool keep_rows) {
  return scan_impl(m, s0, C, K_ball, grid, s_samples, keep_rows, true);
}

ScanReport negativity_scan_serial(const Model &m, double s0, double C, double K_ball, int grid,
                                  int s_samples, bool keep_rows) {
  return scan_impl(m, s0, C, K_ball, grid, s_samples, keep_rows, false);
}

// Velocity change across a 2-wave with density ratio x: rarefaction below 1
// (log x), shock above 1 ((x - 1)/sqrt(x)).
double overtake_phibar(double x) {
  if (!(x > 0.0)) throw DomainError("density ratio must be positive");
  return x <= 1.0 ? std::log(x) : (x - 1.0) / std::sqrt(x);
}

double overtake_G(double B, double b, double bb) {
  return overtake_phibar(B) + overtake_phibar(B / (b * bb)) - overtake_phibar(b) - overtake_phibar(bb);
}

double overtake_G_literal(double B, double b, double bb) {
  auto pb = [](double x) { return x < 1.0 ? x - 1.0 : std::sqrt(x); };
  return pb(B) + b * bb * pb(B / (b * bb)) - pb(b) - b * pb(bb);
}

OvertakeRoot overtake_root(double b, double bb) {
  if (!(b >= 1.0 && bb >= 1.0)) throw DomainError("overtaking ratios must be >= 1");
  OvertakeRoot out;
  if (b == 1.0 || bb == 1.0) {
    out.B = b * bb;
    out.F = 1.0;
    return out;
  }
  auto G = [&](double B) { return overtake_G(B, b, bb); };
  const double lo = std::max(b, bb), hi = b * bb;
  out.B = bracketed_root(G, lo, hi, G(lo), G(hi));
  out.F = b * bb / out.B;
  out.residual = std::abs(G(out.B));
  return out;
}

double frame_entropy(const ShockFrame &f, const std::vector<double> &x, const std::vector<State> &u,
                     double h, double R) {
  double acc = 0.0;
  auto cell = [&](double lo, double hi, const State &s) {
    lo = std::max(lo, -R);
    hi = std::min(hi, R);
    if (!(hi > lo)) return;
    if (h > lo) acc += f.a1() * rel_entropy(f.model, s, f.uL) * (std::min(h, hi) - lo);
    if (h < hi) acc += rel_entropy(f.model, s, f.uR) * (hi - std::max(h, lo));
  };
  double lo = -R;
  for (std::size_t k = 0; k < x.size(); ++k) {
    cell(lo, x[k], u[k]);
    lo = std::max(lo, x[k]);
  }
  cell(lo, R, u.back());
  return acc;
}

double weighted_rel_entropy(const Model &m, const Profile &u, const Profile &v, const Profile &w, double a,
                            double b) {
  if (!(b > a)) return 0.0;
  std::vector<double> xs{a, b};
  for (const Profile *p : {&u, &v, &w})
    for (double x : p->x)
      if (x > a && x < b) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double mid = 0.5 * (xs[k] + xs[k + 1]);
    const State su = u.at(mid), sv = v.at(mid);
    if (su == sv) continue;
    acc += w.at(mid).a * rel_entropy(m, su, sv) * (xs[k + 1] - xs[k]);
  }
  return acc;
}

}  // namespace ftl
