#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ftl/dissipation.hpp"
#include "ftl/fronttrack.hpp"

namespace ftl {

struct ShiftParams {
  double C_star = 1.0;  // penalty offset outside Pi*
  double L = 3.0;       // speed bound used in the penalty
  double K_ball = 0.5;
  double C1 = 1.0;      // weight constant that fixes a1/a2 for small shocks
  double eps = 0.05;    // small/large shock threshold
  double a_star = 0.9;  // weight ratio for large shocks
  int rays = 180;
  // Shocks weaker than this cannot resolve Pi in double precision; they
  // travel at their exact Rankine-Hugoniot speed instead.
  double s_floor = 1e-6;
};

// Frame constant C with 1 + C s0 equal to the weight ratio across a shock of
// strength s0: e^{3 C1 s0/4} when small, 1/a* when large.
double frame_constant(double s0, const ShiftParams &p);

// Velocity field for the shift of one reference shock.  Family-2 shocks are
// handled in the mirror (rho, -m) with left and right exchanged, where they
// become 1-shocks.
struct FilippovField {
  Model model;
  int family = 1;
  State uL, uR;          // physical states, uR on the exact shock curve
  double sigma = 0.0;
  double speed = 0.0;    // Rankine-Hugoniot speed of (uL, uR)
  double C_star = 1.0, L = 3.0;
  PiGeometry geometry;   // in 1-shock coordinates

  bool vacuum(const State &u) const;
  bool inside(const State &u) const;  // u in Pi* (after mirroring)
  double velocity(const State &u) const;
  std::string region(const State &u) const;  // inside-Pi* | outside-penalty
  // Weights left and right of the shift: (a1, 1) for 1-shocks, (1, a1) for 2-shocks.
  double a_left() const;
  double a_right() const;
};

FilippovField make_filippov_field(const Model &m, int family, const State &uL, double sigma,
                                  const ShiftParams &p);
// Explicit frame constant C instead of the weight-matched one.
FilippovField make_filippov_field(const Model &m, int family, const State &uL, double sigma, double C,
                                  const ShiftParams &p);

// V(u); std::nullopt stands for the vacuum marker.
double filippov_velocity(const FilippovField &f, const std::optional<State> &u);

struct ShiftSegment {
  double t0 = 0.0, t1 = 0.0, x0 = 0.0, speed = 0.0;
  std::string label;  // inside-Pi* | outside-penalty | rh-exact | boundary-follow | natural | offset
  double x1() const { return x0 + speed * (t1 - t0); }
};

struct ShiftPath {
  int shock_id = -1;
  double t0 = 0.0, x0 = 0.0;
  std::vector<ShiftSegment> segments;

  double t_end() const { return segments.empty() ? t0 : segments.back().t1; }
  const ShiftSegment &segment_at(double t) const;
  double at(double t) const;
  double velocity(double t) const;
  double lipschitz() const;
  std::string csv_rows() const;  // shock_id,t,x,region_label
};

inline constexpr const char *kShiftCsvHeader = "# shift-path v1\nshock_id,t,x,region_label\n";

// Filippov solution of h' = V(u(h, t)) through (t0, x0) against a wild
// front-tracking solution, integrated exactly cell by cell up to T.
ShiftPath build_shift(const FilippovField &f, const FrontTrackingSolution &wild, double t0, double x0,
                      double T, int shock_id = -1);

// Traces of a wild solution at x; equal unless x sits on a front.
std::pair<State, State> wild_traces(const FrontTrackingSolution &wild, double t, double x);

// a_R [q(u+; uR) - s eta(u+|uR)] - a_L [q(u-; uL) - s eta(u-|uL)].
double shift_dissipation(const FilippovField &f, const State &um, const State &up, double s);

// a_L int_{-R}^{h} eta(u|uL) + a_R int_h^{R} eta(u|uR).
double shift_entropy(const FilippovField &f, const Profile &u, double h, double R);

enum class ShiftPolicy { RH, Offset, Filippov };
ShiftPolicy parse_shift_policy(const std::string &s);
std::string shift_policy_name(ShiftPolicy p);

struct ShiftOptions {
  ShiftPolicy policy = ShiftPolicy::RH;
  double offset = 0.0;                          // Offset policy: speed = natural + offset
  ShiftParams params;
  const FrontTrackingSolution *wild = nullptr;  // Filippov policy
  EvolveOptions evolve;
};

struct AnchorRecord {
  int id = -1;
  double t = 0.0, speed = 0.0, natural = 0.0;
  std::string label;
};

struct ShiftedSolution {
  FrontTrackingSolution sol;
  ShiftPolicy policy = ShiftPolicy::RH;
  std::map<int, ShiftPath> paths;  // Filippov paths by shock id, cut at death
  std::vector<AnchorRecord> anchors;

  Profile sample(double t) const { return sol.sample(t); }
  // Same fronts, with states rebuilt left to right along exact wave curves.
  Profile sample_rh(double t) const;
  std::string paths_csv() const;
};

ShiftedSolution shifted_evolve(const Model &m, double nu, const Profile &data, double T,
                               const ShiftOptions &opt, const GlimmParams &gp = {});

// Integral over [0, tau] of sum |sigma| |speed - natural speed| over shocks.
struct ShiftCost {
  double cost = 0.0;
  double mass = 0.0;       // int sum |sigma|
  double quadratic = 0.0;  // int sum |sigma| (speed - natural)^2
};
ShiftCost shift_cost_parts(const FrontTrackingSolution &psi, double tau);
double shift_cost(const ShiftedSolution &psi, double tau);

}  // namespace ftl
