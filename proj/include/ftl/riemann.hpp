#pragma once

#include <vector>

#include "ftl/models.hpp"

namespace ftl {

enum class FrontKind { Shock, FanPiece };

// One moving discontinuity, x(t) = x0 + speed * (t - t0).
struct Front {
  int id = -1;
  double x0 = 0.0;
  double t0 = 0.0;
  double speed = 0.0;
  int family = 1;
  FrontKind kind = FrontKind::Shock;
  State left, right;
  double sigma = 0.0;
  double pos(double t) const { return x0 + speed * (t - t0); }
};

// Smooth cutoff: 1 on (-inf,-2], 0 on [-1,inf), cubic smoothstep between.
double cutoff_phi(double s);
double cutoff_phi_prime(double s);

// Blend of shock and rarefaction curves with cutoff width sqrt(nu).
Riem interp_riem(const Model &m, int family, const Riem &w, double sigma, double nu);
State interp_curve(const Model &m, int family, const State &v, double sigma, double nu);

struct RiemannFan {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  State vm;
  int iterations = 0;
  bool used_fallback = false;
  std::vector<Front> fronts;  // x0 = 0, t0 = 0, ids unset
};

struct Strengths {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

// Solve v_r = Phi_2(Phi_1(v_l, s1), s2) in Riemann coordinates.
Strengths solve_strengths(const Model &m, double nu, const State &vl, const State &vr);
// Bisection-only variant, also used as the fallback of solve_strengths.
Strengths solve_strengths_bisect(const Model &m, double nu, const State &vl, const State &vr);

RiemannFan solve_riemann(const Model &m, double nu, const State &vl, const State &vr);

// Fan pieces of a rarefaction of the given family from v_from with strength
// sigma > 0; the last right state is `v_to` when supplied.
std::vector<Front> discretize_rarefaction(const Model &m, double nu, int family,
                                          const State &v_from, double sigma,
                                          const State *v_to = nullptr);

// Speed of a front with sigma < 0: blend of the exact shock speed and the
// measure-weighted characteristic speed over the grid cells it spans.
double front_speed(const Model &m, double nu, int family, const State &vl, double sigma);
double averaged_char_speed(const Model &m, double nu, int family, const State &vl, double sigma);

// nu -> 0 solution with pure wave curves, used for wave-speed bounds.
struct ExactWave {
  int family = 1;
  double sigma = 0.0;
  double speed_lo = 0.0;  // equal for shocks
  double speed_hi = 0.0;
};
struct ExactRiemann {
  State vm;
  ExactWave w1, w2;
};
ExactRiemann solve_riemann_exact(const Model &m, const State &vl, const State &vr);

}  // namespace ftl
