#include "ftl/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ftl {

namespace {

// Strengths below the solver's rounding floor are noise; anything larger is
// kept so that no jump is silently moved into the other family's front.
double negligible(const Model &m, const State &vl, const State &vr) {
  const Riem a = to_riemann(m, vl), b = to_riemann(m, vr);
  return 4e-15 * (1.0 + std::max({std::abs(a.w1), std::abs(a.w2), std::abs(b.w1), std::abs(b.w2)}));
}

Riem compose(const Model &m, double nu, const Riem &wl, double s1, double s2) {
  Riem w = interp_riem(m, 1, wl, s1, nu);
  if (m.families() == 2) w = interp_riem(m, 2, w, s2, nu);
  return w;
}

// nu == 0 selects the pure curves.
Riem pure_curve(const Model &m, int family, const Riem &w, double sigma) {
  if (sigma >= 0.0) return rarefaction_riem(m, family, w, sigma);
  return shock_riem(m, family, w, sigma);
}

// Root of a monotone increasing g by bracket expansion and bisection.
template <class G>
double monotone_root(G g, double guess, double tol) {
  double step = std::max(1.0, std::abs(guess));
  double lo = guess - step, hi = guess + step;
  for (int k = 0; k < 200 && g(lo) > 0.0; ++k) {
    step *= 2.0;
    lo = guess - step;
  }
  for (int k = 0; k < 200 && g(hi) < 0.0; ++k) {
    step *= 2.0;
    hi = guess + step;
  }
  if (g(lo) > 0.0 || g(hi) < 0.0) throw SolverError("bisection bracket not found");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double cutoff_phi(double s) {
  if (s <= -2.0) return 1.0;
  if (s >= -1.0) return 0.0;
  const double t = s + 2.0;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

double cutoff_phi_prime(double s) {
  if (s <= -2.0 || s >= -1.0) return 0.0;
  const double t = s + 2.0;
  return -6.0 * t * (1.0 - t);
}

Riem interp_riem(const Model &m, int family, const Riem &w, double sigma, double nu) {
  const Riem rare = rarefaction_riem(m, family, w, sigma);
  if (sigma >= 0.0) return rare;
  const double c = cutoff_phi(sigma / std::sqrt(nu));
  if (c == 0.0) return rare;
  const Riem sh = shock_riem(m, family, w, sigma);
  if (c == 1.0) return sh;
  return {c * sh.w1 + (1.0 - c) * rare.w1, c * sh.w2 + (1.0 - c) * rare.w2};
}

State interp_curve(const Model &m, int family, const State &v, double sigma, double nu) {
  if (sigma < 0.0 && cutoff_phi(sigma / std::sqrt(nu)) == 1.0) return shock_curve(m, family, v, sigma);
  return from_riemann(m, interp_riem(m, family, to_riemann(m, v), sigma, nu));
}

Strengths solve_strengths_bisect(const Model &m, double nu, const State &vl, const State &vr) {
  const Riem wl = to_riemann(m, vl), wr = to_riemann(m, vr);
  Strengths out;
  out.used_fallback = true;
  if (m.families() == 1) {
    out.sigma1 = wr.w1 - wl.w1;
    return out;
  }
  auto inner = [&](double s1) {
    const Riem wm = interp_riem(m, 1, wl, s1, nu);
    auto g2 = [&](double s2) { return interp_riem(m, 2, wm, s2, nu).w2 - wr.w2; };
    return monotone_root(g2, wr.w2 - wm.w2, 1e-15);
  };
  auto g1 = [&](double s1) {
    const double s2 = inner(s1);
    return compose(m, nu, wl, s1, s2).w1 - wr.w1;
  };
  out.sigma1 = monotone_root(g1, wr.w1 - wl.w1, 1e-15);
  out.sigma2 = inner(out.sigma1);
  return out;
}

Strengths solve_strengths(const Model &m, double nu, const State &vl, const State &vr) {
  const Riem wl = to_riemann(m, vl), wr = to_riemann(m, vr);
  Strengths out;
  // Decoupled guess: exact when the reflected part vanishes.
  double s1 = wr.w1 - wl.w1, s2 = wr.w2 - wl.w2;
  if (m.families() == 1 || m.kind == ModelKind::Temple) {
    out.sigma1 = s1;
    out.sigma2 = m.families() == 1 ? 0.0 : s2;
    return out;
  }
  auto resid = [&](double a, double b) {
    const Riem w = compose(m, nu, wl, a, b);
    return Riem{w.w1 - wr.w1, w.w2 - wr.w2};
  };
  Riem F = resid(s1, s2);
  double fn = std::max(std::abs(F.w1), std::abs(F.w2));
  int it = 0;
  // iterate past the acceptance threshold down to the rounding floor, so
  // strengths come out accurate to machine precision
  const double floor = 1e-15 * (1.0 + std::abs(wr.w1) + std::abs(wr.w2));
  bool ok = fn < 1e-12;
  for (; it < 50 && fn > floor; ++it) {
    const double h1 = 1e-7 * std::max(1.0, std::abs(s1));
    const double h2 = 1e-7 * std::max(1.0, std::abs(s2));
    const Riem a = resid(s1 + h1, s2), b = resid(s1 - h1, s2);
    const Riem c = resid(s1, s2 + h2), d = resid(s1, s2 - h2);
    const double j11 = (a.w1 - b.w1) / (2 * h1), j21 = (a.w2 - b.w2) / (2 * h1);
    const double j12 = (c.w1 - d.w1) / (2 * h2), j22 = (c.w2 - d.w2) / (2 * h2);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double d1 = (j22 * F.w1 - j12 * F.w2) / det;
    const double d2 = (-j21 * F.w1 + j11 * F.w2) / det;
    double lam = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, lam *= 0.5) {
      const double n1 = s1 - lam * d1, n2 = s2 - lam * d2;
      Riem Fn;
      try {
        Fn = resid(n1, n2);
      } catch (const DomainError &) {
        continue;
      }
      const double nn = std::max(std::abs(Fn.w1), std::abs(Fn.w2));
      if (nn < fn || (!ok && nn < 1e-13)) {
        s1 = n1;
        s2 = n2;
        F = Fn;
        fn = nn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ok = fn < 1e-12;
  }
  if (!ok) {
    Strengths b = solve_strengths_bisect(m, nu, vl, vr);
    const Riem r = resid(b.sigma1, b.sigma2);
    const double rn = std::max(std::abs(r.w1), std::abs(r.w2));
    if (rn > 1e-10)
      throw SolverError("Riemann solve failed, residual " + std::to_string(std::min(fn, rn)));
    b.iterations = it;
    return b;
  }
  out.sigma1 = s1;
  out.sigma2 = s2;
  out.iterations = it;
  return out;
}

double averaged_char_speed(const Model &m, double nu, int family, const State &vl, double sigma) {
  const Riem w = to_riemann(m, vl);
  const double c_hi = family == 1 ? w.w1 : w.w2;
  const double c_lo = c_hi + sigma;  // sigma < 0
  const double len = c_hi - c_lo;
  const long j0 = static_cast<long>(std::floor(c_lo / nu));
  const long j1 = static_cast<long>(std::floor(c_hi / nu));
  double acc = 0.0;
  for (long j = j0; j <= j1; ++j) {
    const double a = std::max(c_lo, j * nu), b = std::min(c_hi, (j + 1) * nu);
    if (b <= a) continue;
    Riem hat = w;
    if (family == 1) hat.w1 = (j + 0.5) * nu;
    else hat.w2 = (j + 0.5) * nu;
    acc += (b - a) / len * lambda(m, family, from_riemann(m, hat));
  }
  return acc;
}

double front_speed(const Model &m, double nu, int family, const State &vl, double sigma) {
  if (sigma >= 0.0) throw DomainError("front_speed expects a negative strength");
  const double c = cutoff_phi(sigma / std::sqrt(nu));
  double ls = 0.0, lr = 0.0;
  if (c > 0.0) ls = rh_speed_unchecked(m, vl, shock_curve(m, family, vl, sigma));
  if (c < 1.0) lr = averaged_char_speed(m, nu, family, vl, sigma);
  return c * ls + (1.0 - c) * lr;
}

std::vector<Front> discretize_rarefaction(const Model &m, double nu, int family,
                                          const State &v_from, double sigma, const State *v_to) {
  std::vector<Front> out;
  if (sigma <= 0.0) return out;
  const Riem w = to_riemann(m, v_from);
  const double c_l = family == 1 ? w.w1 : w.w2;
  const double c_m = c_l + sigma;
  std::vector<double> pts{c_l};
  const long h = static_cast<long>(std::floor(c_l / nu));
  const long k = static_cast<long>(std::floor(c_m / nu));
  const double snap = 1e-12 * nu;
  for (long j = h + 1; j <= k; ++j) {
    const double p = j * nu;
    if (p - c_l > snap && c_m - p > snap) pts.push_back(p);
  }
  pts.push_back(c_m);
  State prev = v_from;
  for (std::size_t q = 0; q + 1 < pts.size(); ++q) {
    const double a = pts[q], b = pts[q + 1];
    const long cell = static_cast<long>(std::floor(0.5 * (a + b) / nu));
    Riem hat = w, to = w;
    if (family == 1) {
      hat.w1 = (cell + 0.5) * nu;
      to.w1 = b;
    } else {
      hat.w2 = (cell + 0.5) * nu;
      to.w2 = b;
    }
    Front f;
    f.family = family;
    f.kind = FrontKind::FanPiece;
    f.left = prev;
    f.right = (q + 2 == pts.size() && v_to) ? *v_to : from_riemann(m, to);
    f.sigma = b - a;
    f.speed = lambda(m, family, from_riemann(m, hat));
    prev = f.right;
    out.push_back(f);
  }
  return out;
}

RiemannFan solve_riemann(const Model &m, double nu, const State &vl, const State &vr) {
  RiemannFan fan;
  check_state(m, vl);
  check_state(m, vr);
  if (vl == vr) {
    fan.vm = vl;
    return fan;
  }
  const Strengths st = solve_strengths(m, nu, vl, vr);
  fan.iterations = st.iterations;
  fan.used_fallback = st.used_fallback;
  const double tiny = negligible(m, vl, vr);
  fan.sigma1 = std::abs(st.sigma1) < tiny ? 0.0 : st.sigma1;
  fan.sigma2 = std::abs(st.sigma2) < tiny ? 0.0 : st.sigma2;
  if (m.families() == 1) fan.vm = vr;
  else if (fan.sigma2 == 0.0) fan.vm = vr;
  else if (fan.sigma1 == 0.0) fan.vm = vl;
  else fan.vm = interp_curve(m, 1, vl, fan.sigma1, nu);

  auto add_wave = [&](int family, const State &from, const State &to, double sigma) {
    if (sigma == 0.0) return;
    if (sigma > 0.0) {
      auto pieces = discretize_rarefaction(m, nu, family, from, sigma, &to);
      fan.fronts.insert(fan.fronts.end(), pieces.begin(), pieces.end());
      return;
    }
    Front f;
    f.family = family;
    f.kind = FrontKind::Shock;
    f.left = from;
    f.right = to;
    f.sigma = sigma;
    f.speed = front_speed(m, nu, family, from, sigma);
    fan.fronts.push_back(f);
  };
  add_wave(1, vl, fan.vm, fan.sigma1);
  if (m.families() == 2) add_wave(2, fan.vm, vr, fan.sigma2);
  return fan;
}

ExactRiemann solve_riemann_exact(const Model &m, const State &vl, const State &vr) {
  // nu -> 0: pure curves; reuse the solver with a vanishing cutoff width.
  const Strengths st = solve_strengths(m, 1e-300, vl, vr);
  ExactRiemann out;
  const Riem wl = to_riemann(m, vl);
  const Riem wm = pure_curve(m, 1, wl, st.sigma1);
  out.vm = m.families() == 1 ? vr : from_riemann(m, wm);
  auto fill = [&](ExactWave &w, int family, const State &a, const State &b, double sigma) {
    w.family = family;
    w.sigma = sigma;
    if (sigma < 0.0) {
      w.speed_lo = w.speed_hi = rh_speed_unchecked(m, a, b);
    } else {
      w.speed_lo = lambda(m, family, a);
      w.speed_hi = lambda(m, family, b);
    }
  };
  fill(out.w1, 1, vl, out.vm, st.sigma1);
  if (m.families() == 2) fill(out.w2, 2, out.vm, vr, st.sigma2);
  return out;
}

}  // namespace ftl
