#include <doctest.h>

#include <cmath>
#include <random>

#include "ftl/models.hpp"

using namespace ftl;

namespace {

const double e = std::exp(1.0);

// eta = m^2/(2 rho) + rho log rho, q = m^3/(2 rho^2) + m log rho + m, written
// out in primitive variables.
double eta_oracle(double rho, double v) { return 0.5 * rho * v * v + rho * std::log(rho); }
double q_oracle(double rho, double v) { return 0.5 * rho * v * v * v + rho * v * std::log(rho) + rho * v; }

// Hugoniot locus through (rho_l, v_l): [v]^2 = -[1/rho][rho]; admissible
// shocks of either family lower the velocity.
double hugoniot_v(double rho_l, double v_l, double rho_r) {
  return v_l - std::sqrt(-(1.0 / rho_r - 1.0 / rho_l) * (rho_r - rho_l));
}

State random_iso(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> r(0.3, 3.0), v(-1.5, 1.5);
  return iso_state(r(rng), v(rng));
}

}  // namespace

TEST_CASE("flux examples") {
  const Model iso, burg = Model::parse("burgers");
  auto f = flux(iso, iso_state(1, 0));
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 1.0);
  f = flux(iso, iso_state(2, 3));
  CHECK(f[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(flux(burg, {4.0, 0.0})[0] == 8.0);
  CHECK_THROWS_AS(flux(iso, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(flux(iso, {1e-9, 0.0}), DomainError);
}

TEST_CASE("eigenvalue examples and ordering") {
  const Model iso;
  auto l = eigenvalues(iso, iso_state(1, 0));
  CHECK(l[0] == -1.0);
  CHECK(l[1] == 1.0);
  l = eigenvalues(iso, iso_state(5, 2));
  CHECK(l[0] == doctest::Approx(1.0));
  CHECK(l[1] == doctest::Approx(3.0));
  const Model burg = Model::parse("burgers");
  CHECK(burg.families() == 1);
  CHECK(eigenvalues(burg, {0.5, 0.0})[0] == 0.5);
  CHECK_THROWS_AS(eigenvalues(iso, {-1.0, 0.0}), DomainError);

  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const State s = random_iso(rng);
    CHECK(lambda(iso, 1, s) < lambda(iso, 2, s));
  }
}

TEST_CASE("relative entropy examples") {
  const Model iso;
  CHECK(rel_entropy(iso, {1, 0}, {1, 0}) == 0.0);
  CHECK(rel_entropy(iso, {e, 0}, {1, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rel_entropy(iso, {1, 1}, {1, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(rel_entropy(iso, {1, 0}, {0, 0}), DomainError);
  // Vacuum in the first slot: eta extends by 0, leaving grad eta(b).b - eta(b).
  CHECK(rel_entropy(iso, {0, 0}, {1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("relative entropy flux against the closed form") {
  const Model iso;
  CHECK(rel_entropy_flux(iso, {1, 0}, {1, 0}) == 0.0);
  // q(a; b) = q(a) - q(b) - grad eta(b) . (f(a) - f(b)); with a = (1, 1),
  // b = (1, 0): 1.5 - 0 - (1, 0) . (1, 1) = 0.5.
  const double oracle = q_oracle(1, 1) - q_oracle(1, 0) - 1.0 * (1.0 - 0.0);
  CHECK(oracle == doctest::Approx(0.5));
  CHECK(rel_entropy_flux(iso, {1, 1}, {1, 0}) == doctest::Approx(oracle).epsilon(1e-14));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const State a = random_iso(rng), b = random_iso(rng);
    const double ra = a.a, va = a.b / a.a, rb = b.a, vb = b.b / b.a;
    const double ge0 = -0.5 * vb * vb + std::log(rb) + 1.0, ge1 = vb;
    const double fa0 = ra * va, fa1 = ra * va * va + ra, fb0 = rb * vb, fb1 = rb * vb * vb + rb;
    const double q = q_oracle(ra, va) - q_oracle(rb, vb) - ge0 * (fa0 - fb0) - ge1 * (fa1 - fb1);
    const double h = eta_oracle(ra, va) - eta_oracle(rb, vb) - ge0 * (a.a - b.a) - ge1 * (a.b - b.b);
    CHECK(rel_entropy_flux(iso, a, b) == doctest::Approx(q).epsilon(1e-11));
    CHECK(rel_entropy(iso, a, b) == doctest::Approx(h).epsilon(1e-11));
  }
}

TEST_CASE("shock curve examples") {
  const Model iso;
  const State r = shock_curve(iso, 1, iso_state(1, 0), -2.0);
  CHECK(r.a == doctest::Approx(e).epsilon(1e-14));
  CHECK(velocity(iso, r) == doctest::Approx(-(e - 1.0) / std::sqrt(e)).epsilon(1e-13));
  CHECK(velocity(iso, r) == doctest::Approx(hugoniot_v(1.0, 0.0, e)).epsilon(1e-13));
  CHECK_THROWS_AS(shock_curve(iso, 1, iso_state(1, 0), 0.5), DomainError);
  Model tight;
  tight.rho_min = 0.5;
  CHECK_THROWS_AS(shock_curve(tight, 2, iso_state(1, 0), -2.0), DomainError);
}

TEST_CASE("shock curves are Hugoniot loci with Lax ordering") {
  const Model iso;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> sig(-3.0, -1e-4);
  for (int k = 0; k < 1000; ++k) {
    const State l = random_iso(rng);
    const double s = sig(rng);
    for (int fam : {1, 2}) {
      const State r = shock_curve(iso, fam, l, s);
      const double xi = rh_shock_speed(iso, l, r);
      CHECK(lambda(iso, fam, r) < xi);
      CHECK(xi < lambda(iso, fam, l));
      CHECK(wave_strength(iso, fam, l, r) == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("shock and rarefaction curves are tangent to second order") {
  const Model iso;
  const State base = iso_state(1.3, 0.2);
  for (int fam : {1, 2}) {
    for (double s : {-0.1, -0.05, -0.02, -0.01, -0.001}) {
      const State a = shock_curve(iso, fam, base, s);
      const State b = from_riemann(iso, rarefaction_riem(iso, fam, to_riemann(iso, base), s));
      CHECK(state_distance(a, b) <= 0.05 * s * s);
    }
  }
  const Model temple = Model::parse("temple");
  for (double s : {-0.1, -0.01}) {
    CHECK(shock_phi(temple, s) == 0.0);
    const State a = shock_curve(temple, 1, {0.2, -0.1}, s);
    CHECK(a.a == doctest::Approx(0.2 + s));
    CHECK(a.b == -0.1);
  }
}

TEST_CASE("rarefaction curve examples") {
  const Model iso;
  const Riem w = rarefaction_riem(iso, 2, {0, 0}, 0.3);
  CHECK(w.w1 == 0.0);
  CHECK(w.w2 == 0.3);
  const State base = iso_state(1.7, -0.4);
  CHECK(rarefaction_curve(iso, 1, base, 0.0) == base);
  const State r = rarefaction_curve(iso, 1, iso_state(1, 0), 0.2);
  CHECK(r.a == doctest::Approx(std::exp(-0.1)).epsilon(1e-14));
  CHECK(velocity(iso, r) == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("Rankine-Hugoniot speed") {
  const Model iso;
  const State l = iso_state(1, 0), r = iso_state(e, -(e - 1.0) / std::sqrt(e));
  const double xi = rh_shock_speed(iso, l, r);
  CHECK(std::abs(xi - (velocity(iso, r) - std::sqrt(l.a / r.a))) <= 1e-12);
  CHECK(std::abs(xi - (r.b - l.b) / (r.a - l.a)) <= 1e-12);
  CHECK_THROWS_AS(rh_shock_speed(iso, l, iso_state(2, 0.5)), ConsistencyError);
  const Model burg = Model::parse("burgers");
  CHECK(rh_shock_speed(burg, {1, 0}, {-1, 0}) == 0.0);

  const State base = iso_state(0.8, 0.3);
  CHECK(std::abs(shock_speed_along(iso, 1, base, 1e-6) - lambda(iso, 1, base)) <= 1e-6);
  for (double s : {0.1, 0.05, 0.02, 0.01}) {
    const State rr = shock_curve(iso, 1, base, -s);
    const double mid = 0.5 * (lambda(iso, 1, base) + lambda(iso, 1, rr));
    CHECK(std::abs(rh_shock_speed(iso, base, rr) - mid) <= 0.1 * s * s);
  }
}

TEST_CASE("Riemann round trip") {
  const Model iso;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lr(-5.0, 5.0), v(-4.0, 4.0);
  for (int k = 0; k < 1000; ++k) {
    const State s = iso_state(std::exp(lr(rng)), v(rng));
    const State t = from_riemann(iso, to_riemann(iso, s));
    CHECK(std::abs(t.a - s.a) <= 1e-13 * std::abs(s.a));
    CHECK(std::abs(t.b - s.b) <= 1e-13 * std::max(std::abs(s.b), s.a));
  }
  const Riem w = to_riemann(iso, iso_state(e, 2.0));
  CHECK(w.w1 == doctest::Approx(1.0));
  CHECK(w.w2 == doctest::Approx(3.0));
}

TEST_CASE("relative entropy is strictly convex in its first argument") {
  const Model iso;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dir(-0.3, 0.3);
  for (int k = 0; k < 500; ++k) {
    const State b = random_iso(rng), a = random_iso(rng);
    const State d{dir(rng), dir(rng)};
    if (a.a - std::abs(d.a) < 0.05) continue;
    const State ap{a.a + d.a, a.b + d.b}, am{a.a - d.a, a.b - d.b};
    CHECK(rel_entropy(iso, ap, b) + rel_entropy(iso, am, b) - 2.0 * rel_entropy(iso, a, b) > 0.0);
  }
}

TEST_CASE("shocks strengthen along the curve") {
  const Model iso;
  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    const State u = random_iso(rng);
    double prev = 0.0;
    for (int j = 1; j <= 40; ++j) {
      const double cur = rel_entropy(iso, u, shock_curve(iso, 1, u, -0.05 * j));
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("eigenvectors") {
  const Model iso;
  const State s = iso_state(1.4, 0.3);
  for (int fam : {1, 2}) {
    const auto r = right_eigvec(iso, fam, s), l = left_eigvec(iso, fam, s);
    CHECK(l[0] * r[0] + l[1] * r[1] == doctest::Approx(1.0));
    // d/ds of the rarefaction curve at 0 by central differences.
    const double h = 1e-6;
    const State p = rarefaction_curve(iso, fam, s, h);
    const State q = from_riemann(iso, rarefaction_riem(iso, fam, to_riemann(iso, s), -h));
    CHECK((p.a - q.a) / (2 * h) == doctest::Approx(r[0]).epsilon(1e-7));
    CHECK((p.b - q.b) / (2 * h) == doctest::Approx(r[1]).epsilon(1e-7));
  }
}
