#pragma once

#include <array>
#include <string>
#include <vector>

#include "ftl/models.hpp"
#include "ftl/profile.hpp"

namespace ftl {

// A reference 1-shock (u_L, u_R, sigma_LR) with weights a1/a2 = 1 + C s0.
// s0 is the strength in the model's wave parameter (2|ln(rho_R/rho_L)| for
// the isothermal model, |u_L - u_R| for Burgers).
struct ShockFrame {
  Model model;
  State uL, uR;
  double sigma_LR = 0.0;
  double s0 = 0.0;
  double C = 0.0;
  double a1() const { return 1.0 + C * s0; }
};

// u_R = S^1_{u_L}(s0); checks the jump relations and Lax ordering.
ShockFrame make_frame(const Model &m, const State &uL, double s0, double C);
// Frame for an arbitrary 1-shock pair.
ShockFrame frame_from_states(const Model &m, const State &uL, const State &uR, double C);

double tilde_eta(const ShockFrame &f, const State &u);
double tilde_q(const ShockFrame &f, const State &u);
std::array<double, 2> tilde_eta_grad(const ShockFrame &f, const State &u);

// -q~ + lambda_1 eta~, and the defining expression for cross-checks.
double d_cont(const ShockFrame &f, const State &u);
double d_cont_direct(const ShockFrame &f, const State &u);

// Throws DomainError unless (um, up, speed) is an entropic 1-shock or um == up.
double d_rh(const ShockFrame &f, const State &um, const State &up, double speed);

// |LHS - RHS| of the relative entropy identity along S^i_u(s) against v;
// the integral of sigma'(t) eta(u | S(t)) uses adaptive Gauss-Kronrod.
double quantified_identity_residual(const Model &m, const State &v, const State &u, int family,
                                    double s);

struct PiGeometry {
  ShockFrame frame;
  double K_ball = 0.5;
  double r_ball = 0.0;
  std::vector<double> angles;
  std::vector<double> radii;       // distance from u_L to the boundary along each ray
  std::vector<char> clipped;       // ray left the state space before leaving Pi
  std::vector<State> boundary;
  State u_star;                    // maximizer of D_cont on the boundary
  double d_star = 0.0;
  double certificate = 0.0;        // |sin| of the angle between grad eta~ and l_1 at u*
  bool unique_max = true;          // no competing local peak near d_star
  State u0;                        // boundary point on the shock curve from u_L
  double diameter = 0.0;
  std::array<double, 4> box{};     // a_lo, a_hi, b_lo, b_hi of Pi*

  bool in_pi(const State &u) const;
  bool in_pi_star(const State &u) const;
};

PiGeometry build_pi_geometry(const ShockFrame &f, double K_ball = 0.5, int rays = 720);

struct MaximalShock {
  double s = 0.0;
  State u_plus;
};
MaximalShock maximal_shock(const PiGeometry &g, const State &u);

// Largest t <= cap with d^2/ds^2 eta(u_L | S(s)) >= lambda/2 on [0, t], where
// lambda is its value at s = 0.
double curve_horizon(const ShockFrame &f, double cap = 1.0);

struct ScanRow {
  double u1 = 0.0, u2 = 0.0, s = 0.0;
  double D = 0.0, bound_rhs = 0.0, margin = 0.0;
  bool rh = false;
};

struct ScanReport {
  double s0 = 0.0, C = 0.0, K_ball = 0.5, t_bar = 0.0;
  long n_cont = 0, n_rh = 0;
  double worst_cont = -1e300, worst_rh = -1e300;  // largest sampled D
  double K_cont = 1e300, K_rh = 1e300;            // fitted bound constants
  double certificate = 0.0;
  std::vector<ScanRow> rows;
  bool all_negative() const { return worst_cont < 0.0 && worst_rh < 0.0; }
  bool constants_positive() const { return K_cont > 0.0 && K_rh > 0.0; }
};

// D_cont over Pi* (grid plus boundary samples) and D_RH(u, S_u(s)) for grid
// points u in Pi* and s in (0, t_bar].  Parallel over grid rows.
ScanReport negativity_scan(const Model &m, double s0, double C, double K_ball = 0.5, int grid = 50,
                           int s_samples = 24, bool keep_rows = false);
ScanReport negativity_scan_serial(const Model &m, double s0, double C, double K_ball = 0.5,
                                  int grid = 50, int s_samples = 24, bool keep_rows = false);

// Overtaking-shock root equation G(B; b, bb) = 0 for density ratios b, bb > 1.
double overtake_phibar(double x);
double overtake_G(double B, double b, double bb);
struct OvertakeRoot {
  double B = 1.0;
  double F = 1.0;
  double residual = 0.0;
};
OvertakeRoot overtake_root(double b, double bb);
// The expression with bb*phibar(B/(b bb)) and b*phibar(bb) weights and
// phibar(x) = x - 1 below 1, sqrt(x) above; kept for comparison only.
double overtake_G_literal(double B, double b, double bb);

// Weighted relative entropy E = a1 int_{-R}^{h} eta(u|u_L) + a2 int_h^{R} eta(u|u_R)
// for a piecewise-constant u given by breakpoints and states.
double frame_entropy(const ShockFrame &f, const std::vector<double> &x, const std::vector<State> &u,
                     double h, double R);

// int_a^b w(x) eta(u(x) | v(x)) dx for piecewise-constant u, v and a scalar
// weight w (stored in the first component of a profile); exact per cell.
double weighted_rel_entropy(const Model &m, const Profile &u, const Profile &v, const Profile &w, double a,
                            double b);

}  // namespace ftl
