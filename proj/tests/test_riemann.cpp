#include <doctest.h>

#include <cmath>
#include <random>

#include "ftl/riemann.hpp"

using namespace ftl;

namespace {

double dist(const Riem &a, const Riem &b) { return std::max(std::abs(a.w1 - b.w1), std::abs(a.w2 - b.w2)); }

// Nested bisection on the composed interpolated curves, written against the
// curve primitives only.  Outer unknown s1 fixes w1 of the result, inner s2
// fixes w2 (each is increasing in its own strength).
double bisect(auto g, double lo, double hi) {
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> oracle_strengths(const Model &m, double nu, const State &vl, const State &vr) {
  const Riem wl = to_riemann(m, vl), wr = to_riemann(m, vr);
  auto inner = [&](double s1) {
    const Riem wm = interp_riem(m, 1, wl, s1, nu);
    return bisect([&](double s2) { return interp_riem(m, 2, wm, s2, nu).w2 - wr.w2; }, -20.0, 20.0);
  };
  const double s1 = bisect(
      [&](double s) { return interp_riem(m, 2, interp_riem(m, 1, wl, s, nu), inner(s), nu).w1 - wr.w1; }, -20.0,
      20.0);
  return {s1, inner(s1)};
}

State random_state(std::mt19937_64 &rng, double lo = 0.2, double hi = 5.0) {
  std::uniform_real_distribution<double> lr(std::log(lo), std::log(hi)), v(-1.0, 1.0);
  return iso_state(std::exp(lr(rng)), v(rng));
}

}  // namespace

TEST_CASE("cutoff") {
  CHECK(cutoff_phi(-3.0) == 1.0);
  CHECK(cutoff_phi(-2.0) == 1.0);
  CHECK(cutoff_phi(0.0) == 0.0);
  CHECK(cutoff_phi(-1.0) == 0.0);
  CHECK(cutoff_phi(-1.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double s = -2.5; s <= -0.5; s += 0.01) {
    CHECK(cutoff_phi_prime(s) <= 0.0);
    CHECK(cutoff_phi_prime(s) >= -1.5);
    if (s > -1.999 && s < -1.001) {
      const double fd = (cutoff_phi(s + 1e-6) - cutoff_phi(s - 1e-6)) / 2e-6;
      CHECK(cutoff_phi_prime(s) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("interpolated curves") {
  const Model iso;
  const double nu = 1e-2, sq = std::sqrt(nu);
  const State v = iso_state(1.2, 0.1);
  for (int fam : {1, 2}) {
    CHECK(interp_curve(iso, fam, v, 0.1, nu) == rarefaction_curve(iso, fam, v, 0.1));
    CHECK(interp_curve(iso, fam, v, -3.0 * sq, nu) == shock_curve(iso, fam, v, -3.0 * sq));
    const State blend = interp_curve(iso, fam, v, -1.5 * sq, nu);
    const State sh = shock_curve(iso, fam, v, -1.5 * sq);
    const State ra = from_riemann(iso, rarefaction_riem(iso, fam, to_riemann(iso, v), -1.5 * sq));
    const double gap = state_distance(sh, ra);
    CHECK(gap > 0.0);
    CHECK(state_distance(blend, sh) <= gap * (1 + 1e-9));
    CHECK(state_distance(blend, ra) <= gap * (1 + 1e-9));
    // Halfway in the cutoff: the Riemann coordinates are the exact midpoint.
    const Riem wb = to_riemann(iso, blend), ws = to_riemann(iso, sh), wr = to_riemann(iso, ra);
    CHECK(wb.w1 == doctest::Approx(0.5 * (ws.w1 + wr.w1)).epsilon(1e-12));
    CHECK(wb.w2 == doctest::Approx(0.5 * (ws.w2 + wr.w2)).epsilon(1e-12));
  }
}

TEST_CASE("trivial Riemann problems") {
  const Model iso;
  const State v = iso_state(0.7, -0.3);
  RiemannFan fan = solve_riemann(iso, 1e-3, v, v);
  CHECK(fan.sigma1 == 0.0);
  CHECK(fan.sigma2 == 0.0);
  CHECK(fan.fronts.empty());

  const State r = rarefaction_curve(iso, 1, v, 0.5);
  fan = solve_riemann(iso, 1e-3, v, r);
  CHECK(fan.sigma1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fan.sigma2 == 0.0);
  for (const Front &f : fan.fronts) CHECK(f.family == 1);
  CHECK(fan.fronts.back().right == r);
}

TEST_CASE("strengths against a nested-bisection oracle") {
  const Model iso;
  std::mt19937_64 rng(21);
  for (double nu : {1e-2, 1e-3}) {
    for (int k = 0; k < 60; ++k) {
      const State vl = random_state(rng, 0.5, 2.0), vr = random_state(rng, 0.5, 2.0);
      const Strengths st = solve_strengths(iso, nu, vl, vr);
      const auto [s1, s2] = oracle_strengths(iso, nu, vl, vr);
      CHECK(st.sigma1 == doctest::Approx(s1).epsilon(1e-10).scale(1.0));
      CHECK(st.sigma2 == doctest::Approx(s2).epsilon(1e-10).scale(1.0));
      const Riem back = interp_riem(iso, 2, interp_riem(iso, 1, to_riemann(iso, vl), st.sigma1, nu), st.sigma2, nu);
      CHECK(dist(back, to_riemann(iso, vr)) <= 1e-10);
    }
  }
}

TEST_CASE("fan fronts are ordered and chain the states") {
  const Model iso;
  std::mt19937_64 rng(22);
  for (int k = 0; k < 300; ++k) {
    const State vl = random_state(rng), vr = random_state(rng);
    const RiemannFan fan = solve_riemann(iso, 1e-2, vl, vr);
    REQUIRE(!fan.fronts.empty());
    CHECK(fan.fronts.front().left == vl);
    CHECK(dist(to_riemann(iso, fan.fronts.back().right), to_riemann(iso, vr)) <= 1e-10);
    for (std::size_t j = 0; j + 1 < fan.fronts.size(); ++j) {
      CHECK(fan.fronts[j].speed < fan.fronts[j + 1].speed);
      CHECK(fan.fronts[j].right == fan.fronts[j + 1].left);
    }
    for (const Front &f : fan.fronts) {
      CHECK((f.sigma < 0.0) == (f.kind == FrontKind::Shock));
      if (f.kind == FrontKind::FanPiece) CHECK(f.sigma <= 1e-2 * (1 + 1e-12));
    }
  }
}

TEST_CASE("rarefaction discretization") {
  const Model iso;
  const double nu = 0.1;
  const State from = from_riemann(iso, {0.15, 1.0});
  const auto fr = discretize_rarefaction(iso, nu, 1, from, 0.32);
  REQUIRE(fr.size() == 4);
  const double ends[] = {0.2, 0.3, 0.4, 0.47};
  for (int j = 0; j < 4; ++j) {
    CHECK(to_riemann(iso, fr[j].right).w1 == doctest::Approx(ends[j]).epsilon(1e-13));
    CHECK(to_riemann(iso, fr[j].right).w2 == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(fr[0].sigma == doctest::Approx(0.05));
  CHECK(fr[3].sigma == doctest::Approx(0.07));
  // Each piece moves at the characteristic speed of its grid cell midpoint.
  CHECK(fr[1].speed == doctest::Approx(lambda(iso, 1, from_riemann(iso, {0.25, 1.0}))));

  const State inside = from_riemann(iso, {0.12, 0.0});
  CHECK(discretize_rarefaction(iso, nu, 1, inside, 0.05).size() == 1);
  CHECK(discretize_rarefaction(iso, nu, 2, inside, 0.05).size() == 1);
}

TEST_CASE("front speeds") {
  const Model iso;
  const double nu = 1e-2, sq = std::sqrt(nu);
  const State v = iso_state(1.1, 0.2);
  for (int fam : {1, 2}) {
    for (double s : {-2.0 * sq, -3.0 * sq, -0.5}) {
      const double rh = rh_shock_speed(iso, v, shock_curve(iso, fam, v, s));
      CHECK(front_speed(iso, nu, fam, v, s) == rh);
    }
    const double s = -1.5 * sq;
    const double ls = rh_shock_speed(iso, v, shock_curve(iso, fam, v, s));
    const double lr = averaged_char_speed(iso, nu, fam, v, s);
    const double fs = front_speed(iso, nu, fam, v, s);
    CHECK(fs == doctest::Approx(0.5 * (ls + lr)));
    CHECK(std::min(ls, lr) < fs);
    CHECK(fs < std::max(ls, lr));
  }

  const Model burg = Model::parse("burgers");
  for (double nu2 : {1e-2, 1e-3, 1e-4}) {
    const State u{0.37, 0.0};
    for (double s : {-0.5 * std::sqrt(nu2), -1.5 * std::sqrt(nu2)}) {
      const double rh = 0.5 * (u.a + u.a + s);
      CHECK(std::abs(front_speed(burg, nu2, 1, u, s) - rh) <= nu2);
    }
  }
}

TEST_CASE("waves of one Riemann problem separate") {
  const Model iso;
  std::mt19937_64 rng(23);
  for (int k = 0; k < 1000; ++k) {
    const State vl = random_state(rng), vr = random_state(rng);
    const RiemannFan fan = solve_riemann(iso, 1e-3, vl, vr);
    double max1 = -1e300, min2 = 1e300;
    for (const Front &f : fan.fronts) {
      if (f.family == 1) max1 = std::max(max1, f.speed);
      else min2 = std::min(min2, f.speed);
    }
    CHECK(max1 < min2);
  }
}

TEST_CASE("exact solver matches the closed-form edge speeds") {
  const Model iso;
  // Colliding streams: two shocks.
  ExactRiemann ex = solve_riemann_exact(iso, iso_state(1.0, 1.0), iso_state(2.0, -0.5));
  REQUIRE(ex.w1.sigma < 0.0);
  REQUIRE(ex.w2.sigma < 0.0);
  const double rm = ex.vm.a, vm = velocity(iso, ex.vm);
  CHECK(std::abs(ex.w1.speed_lo - (vm - std::sqrt(1.0 / rm))) <= 1e-10);
  CHECK(std::abs(ex.w2.speed_lo - (vm + std::sqrt(2.0 / rm))) <= 1e-10);
  CHECK(std::abs((ex.w2.speed_lo - ex.w1.speed_lo) - (std::sqrt(2.0 / rm) + std::sqrt(1.0 / rm))) <= 1e-10);
  // Receding streams: two rarefactions.
  ex = solve_riemann_exact(iso, iso_state(1.0, -0.5), iso_state(1.5, 0.5));
  REQUIRE(ex.w1.sigma > 0.0);
  REQUIRE(ex.w2.sigma > 0.0);
  CHECK(std::abs(ex.w1.speed_hi - (velocity(iso, ex.vm) - 1.0)) <= 1e-10);
  CHECK(std::abs(ex.w2.speed_lo - (velocity(iso, ex.vm) + 1.0)) <= 1e-10);
}
