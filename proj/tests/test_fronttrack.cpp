#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ftl/fronttrack.hpp"

using namespace ftl;

namespace {

Front mk(double x, double speed, int family = 1, double sigma = -0.1) {
  Front f;
  f.x0 = x;
  f.speed = speed;
  f.family = family;
  f.sigma = sigma;
  f.kind = sigma < 0 ? FrontKind::Shock : FrontKind::FanPiece;
  return f;
}

// Small-amplitude isothermal data around (1, 0): alternating 1- and 2-waves.
Profile small_data(std::mt19937_64 &rng, int jumps, double amp) {
  const Model iso;
  std::uniform_real_distribution<double> U(-amp, amp), gap(0.05, 0.15);
  Profile p;
  p.u.push_back(iso_state(1, 0));
  double x = -0.5;
  for (int k = 0; k < jumps; ++k) {
    const int fam = 1 + static_cast<int>(rng() % 2);
    const double s = U(rng);
    p.x.push_back(x);
    p.u.push_back(s >= 0 ? rarefaction_curve(iso, fam, p.u.back(), s) : shock_curve(iso, fam, p.u.back(), s));
    x += gap(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("initial fronts") {
  const Model iso;
  const double nu = 1e-2;
  auto sol = init_fronts(iso, nu, constant_profile(iso_state(1, 0)));
  CHECK(sol.epochs.at(0).fronts.empty());

  const State l = iso_state(1, 0.5), r = iso_state(1.5, -0.2);
  Profile one{{0.3}, {l, r}};
  sol = init_fronts(iso, nu, one);
  const RiemannFan fan = solve_riemann(iso, nu, l, r);
  REQUIRE(sol.epochs[0].fronts.size() == fan.fronts.size());
  for (std::size_t k = 0; k < fan.fronts.size(); ++k) {
    CHECK(sol.epochs[0].fronts[k].speed == fan.fronts[k].speed);
    CHECK(sol.epochs[0].fronts[k].x0 == 0.3);
  }

  std::mt19937_64 rng(2);
  const Profile p = small_data(rng, 6, 0.05);
  sol = init_fronts(iso, nu, p);
  double V = 0.0;
  for (std::size_t k = 0; k < p.x.size(); ++k) {
    const RiemannFan f = solve_riemann(iso, nu, p.u[k], p.u[k + 1]);
    for (const Front &w : f.fronts) V += std::abs(w.sigma);
  }
  CHECK(sol.epochs[0].glimm.V == doctest::Approx(V).epsilon(1e-13));

  Profile bad{{0.5, 0.1}, {l, r, l}};
  CHECK_THROWS_AS(init_fronts(iso, nu, bad), DomainError);
}

TEST_CASE("next interaction") {
  auto m = next_interaction({mk(0, 1), mk(1, -1)}, 0.0);
  REQUIRE(m);
  CHECK(m->t == doctest::Approx(0.5));
  CHECK(m->x == doctest::Approx(0.5));
  CHECK(!next_interaction({mk(0, 0.3), mk(1, 0.3), mk(2, 0.3)}, 0.0));
  // Equal times at distinct places: the leftmost pair goes first.
  m = next_interaction({mk(0, 1), mk(1, -1), mk(5, 1), mk(6, -1)}, 0.0);
  REQUIRE(m);
  CHECK(m->first == 0);
}

TEST_CASE("three-way meetings are serialized") {
  const Model burg = Model::parse("burgers");
  // Speeds 2, 0, -2 from x = -2, 0, 2: all three meet at (1, 0).
  Profile p{{-2, 0, 2}, {{3, 0}, {1, 0}, {-1, 0}, {-3, 0}}};
  FrontTrackingSolution sol = run_front_tracking(burg, 1e-3, p, 2.0);
  CHECK(sol.perturbations >= 1);
  int interactions = 0;
  for (const Event &e : sol.events) {
    if (e.kind == EventKind::Perturbation) CHECK(e.perturbation <= 1e-9);
    if (e.kind != EventKind::Interaction) continue;
    ++interactions;
    CHECK(e.pairwise);
  }
  CHECK(interactions == 2);
  const auto fronts = sol.fronts_at(2.0);
  REQUIRE(fronts.size() == 1);
  CHECK(fronts[0].speed == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(fronts[0].pos(2.0)) <= 1e-8);
}

TEST_CASE("interaction outcomes") {
  const Model iso;
  const double nu = 1e-3;
  const State u0 = iso_state(1.2, 0.1);
  SUBCASE("head-on waves cross unchanged") {
    for (double a : {-0.2, 0.03}) {
      for (double b : {-0.3, 0.02}) {
        const State u1 = interp_curve(iso, 2, u0, a, nu), u2 = interp_curve(iso, 1, u1, b, nu);
        Front f2 = mk(0, 1, 2, a), f1 = mk(0, -1, 1, b);
        f2.left = u0;
        f2.right = u1;
        f1.left = u1;
        f1.right = u2;
        const auto out = resolve_interaction(iso, nu, {f2, f1}, 0.0, 0.0);
        double s[2] = {0, 0};
        for (const Front &f : out) s[f.family - 1] += f.sigma;
        CHECK(std::abs(s[0] - b) <= 1e-10);
        CHECK(std::abs(s[1] - a) <= 1e-10);
      }
    }
  }
  SUBCASE("overtaking 2-shocks reflect a rarefaction") {
    const State u1 = shock_curve(iso, 2, u0, -0.3), u2 = shock_curve(iso, 2, u1, -0.2);
    Front a = mk(0, 1, 2, -0.3), b = mk(0, 0.5, 2, -0.2);
    a.left = u0;
    a.right = u1;
    b.left = u1;
    b.right = u2;
    const auto out = resolve_interaction(iso, nu, {a, b}, 0.0, 0.0);
    double s1 = 0, s2 = 0;
    for (const Front &f : out) (f.family == 1 ? s1 : s2) += f.sigma;
    CHECK(s1 > 0.0);
    CHECK(s2 < 0.0);
    CHECK(std::abs(s2) < 0.5);
  }
  SUBCASE("Burgers shocks merge") {
    const Model burg = Model::parse("burgers");
    Front a = mk(0, 1.5, 1, -1), b = mk(0, 0.25, 1, -0.5);
    a.left = {2, 0};
    a.right = {1, 0};
    b.left = {1, 0};
    b.right = {-0.5, 0};
    const auto out = resolve_interaction(burg, nu, {a, b}, 1.0, 2.0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].speed == doctest::Approx(0.5 * (2 - 0.5)));
    CHECK(out[0].x0 == 2.0);
    CHECK(out[0].t0 == 1.0);
  }
  CHECK_THROWS_AS(resolve_interaction(iso, nu, {mk(0, 1)}, 0, 0), DomainError);
}

TEST_CASE("trivial evolutions") {
  const Model iso;
  auto sol = run_front_tracking(iso, 1e-3, constant_profile(iso_state(1, 0)), 1.0);
  CHECK(sol.events.empty());
  CHECK(sol.sample(1.0).x.empty());

  const State l = iso_state(1, -0.3), r = iso_state(1.4, 0.4);
  sol = run_front_tracking(iso, 1e-2, Profile{{0.0}, {l, r}}, 1.0);
  CHECK(sol.events.empty());
  CHECK(sol.fronts_at(1.0).size() == sol.fronts_at(0.0).size());
}

TEST_CASE("Glimm functional examples") {
  const GlimmParams gp;
  GlimmReport g = glimm_functionals({}, gp);
  CHECK(g.V == 0.0);
  CHECK(g.Q == 0.0);
  CHECK(g.U == 0.0);
  g = glimm_functionals({mk(0, 0, 1, -0.2), mk(1, 0, 2, -0.3)}, gp);
  CHECK(g.V == doctest::Approx(0.5));
  CHECK(g.Q == 0.0);
  g = glimm_functionals({mk(0, 0, 2, -0.3), mk(1, 0, 1, -0.2)}, gp);
  CHECK(g.Q == doctest::Approx(0.06));
  CHECK(g.U == doctest::Approx(0.5 + gp.kappa * 0.06));
  // Two rarefactions of one family never approach.
  g = glimm_functionals({mk(0, 0, 1, 0.01), mk(1, 0, 1, 0.01)}, gp);
  CHECK(g.Q == 0.0);
  CHECK(g.V2 == doctest::Approx(0.02 * (1 - gp.eta_weight)));
}

TEST_CASE("Glimm functionals decrease along runs") {
  const Model iso;
  std::mt19937_64 rng(31);
  GlimmParams gp;
  long events = 0;
  for (int run = 0; run < 20; ++run) {
    const auto sol = run_front_tracking(iso, 1e-3, small_data(rng, 8, 0.01), 1.0, gp);
    for (const Event &e : sol.events) {
      if (e.kind != EventKind::Interaction) continue;
      ++events;
      CHECK(e.dU <= 1e-12);
      CHECK(e.dU_iso <= 1e-12);
      CHECK(e.dV2 <= 1e-12);
      if (e.pairwise) {
        CHECK(e.dU_iso <= -e.in_product + 1e-12);
        CHECK(e.dU <= -0.5 * gp.kappa * e.in_product + 1e-12);
      }
      if (e.head_on) {
        CHECK(std::abs(e.out_sum[0] - e.in_sum[0]) <= 1e-10);
        CHECK(std::abs(e.out_sum[1] - e.in_sum[1]) <= 1e-10);
      }
    }
  }
  CHECK(events > 0);
}

TEST_CASE("interaction constant is finite") {
  const double K0 = fit_interaction_constant(Model{}, 1e-3, iso_state(1, 0), 0.05, 500, 3);
  CHECK(K0 > 0.0);
  CHECK(K0 < 10.0);
}

TEST_CASE("sampling") {
  const Model iso;
  std::mt19937_64 rng(4);
  const Profile p = small_data(rng, 5, 0.05);
  const auto sol = run_front_tracking(iso, 1e-3, p, 1.0);
  const Profile s0 = sol.sample(0.0);
  for (std::size_t k = 0; k + 1 < p.x.size(); ++k) {
    const double mid = 0.5 * (p.x[k] + p.x[k + 1]);
    CHECK(s0.at(mid) == p.u[k + 1]);
  }
  CHECK(s0.far_left() == p.far_left());

  // Across the first event the profile changes only near its location.
  const Event *first = nullptr;
  for (const Event &e : sol.events)
    if (e.kind == EventKind::Interaction) {
      first = &e;
      break;
    }
  REQUIRE(first);
  const Profile a = sol.sample(first->t - 1e-6), b = sol.sample(first->t + 1e-6);
  for (double x = -1.0; x <= 1.0; x += 1e-3) {
    if (std::abs(x - first->x) < 1e-4) continue;
    if (std::abs(x - first->x) > 1e-3 * 2 + 1e-5 * 5) {
      const double d = state_distance(a.at(x), b.at(x));
      // other fronts move by at most 2e-6 * speed, which a grid point can straddle
      bool near_front = false;
      for (const Front &f : sol.fronts_at(first->t + 1e-6)) near_front |= std::abs(f.pos(first->t) - x) < 1e-5;
      if (!near_front) CHECK(d == 0.0);
    }
  }

  // Outside the cone of the data the far fields persist.
  const double L = 3.0;
  for (double t : {0.25, 0.5, 1.0}) {
    const Profile q = sol.sample(t);
    CHECK(q.at(p.x.front() - L * t - 1e-9) == p.far_left());
    CHECK(q.at(p.x.back() + L * t + 1e-9) == p.far_right());
  }
}

TEST_CASE("event budget and log") {
  const Model iso;
  std::mt19937_64 rng(5);
  const Profile p = small_data(rng, 8, 0.05);
  EvolveOptions opt;
  opt.max_events = 2;
  CHECK_THROWS_AS(run_front_tracking(iso, 1e-3, p, 1.0, {}, opt), BudgetError);

  const auto sol = run_front_tracking(iso, 1e-3, p, 1.0);
  std::istringstream in(sol.events_jsonl(Flavor::Isothermal));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char *k : {"t", "x", "in_ids", "out_ids", "dV", "dQ", "dU"}) CHECK(j.contains(k));
    ++n;
  }
  CHECK(n > 0);
  CHECK_THROWS_AS(sol.sample(2.0), DomainError);
}
