#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace ftl {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conserved variables.  Isothermal: (rho, m = rho*v).  Burgers: (u, 0).
// Temple toy: (a, b), which are also its Riemann coordinates.
struct State {
  double a = 0.0;
  double b = 0.0;
  bool operator==(const State &) const = default;
};

// Riemann coordinates.  Isothermal: w1 = v - log rho, w2 = v + log rho.
struct Riem {
  double w1 = 0.0;
  double w2 = 0.0;
};

enum class ModelKind { Isothermal, Burgers, Temple };

struct Model {
  ModelKind kind = ModelKind::Isothermal;
  double rho_min = 1e-6;

  int families() const { return kind == ModelKind::Burgers ? 1 : 2; }
  std::string name() const;
  static Model parse(const std::string &name);
};

State iso_state(double rho, double vel);
double velocity(const Model &m, const State &s);

void check_state(const Model &m, const State &s);

std::array<double, 2> flux(const Model &m, const State &s);
// Burgers returns (u, u) so callers can index either family.
std::array<double, 2> eigenvalues(const Model &m, const State &s);
double lambda(const Model &m, int family, const State &s);

Riem to_riemann(const Model &m, const State &s);
State from_riemann(const Model &m, const Riem &w);

double entropy(const Model &m, const State &s);
double entropy_flux(const Model &m, const State &s);
std::array<double, 2> entropy_grad(const Model &m, const State &s);
// Hessian of eta in conserved variables, row major.
std::array<double, 4> entropy_hessian(const Model &m, const State &s);

double rel_entropy(const Model &m, const State &a, const State &b);
double rel_entropy_flux(const Model &m, const State &a, const State &b);

// Right/left eigenvectors of f'(u); r_i normalized by the strength
// parameter so that d/ds rarefaction_curve = r_i at s = 0.
std::array<double, 2> right_eigvec(const Model &m, int family, const State &s);
std::array<double, 2> left_eigvec(const Model &m, int family, const State &s);

// Change of the non-principal Riemann coordinate across a shock of strength
// sigma < 0 (zero for the Temple toy and Burgers).  Computed from the jump
// relations, see models.cpp.
double shock_phi(const Model &m, double sigma);

Riem rarefaction_riem(const Model &m, int family, const Riem &base, double sigma);
Riem shock_riem(const Model &m, int family, const Riem &base, double sigma);

State rarefaction_curve(const Model &m, int family, const State &base, double sigma);
State shock_curve(const Model &m, int family, const State &base, double sigma);

// Signed strength of a single wave of `family` joining l to r.
double wave_strength(const Model &m, int family, const State &l, const State &r);

// Exact Rankine-Hugoniot speed; throws ConsistencyError when the pair is not
// on a Hugoniot locus to 1e-10.
double rh_shock_speed(const Model &m, const State &l, const State &r);
// Speed from the first jump relation only, no locus check.
double rh_speed_unchecked(const Model &m, const State &l, const State &r);
// Residual of the second jump relation at speed rh_speed_unchecked.
double rh_residual(const Model &m, const State &l, const State &r);

// Shock speed along S_u^i(s) = shock_curve(u, -s) and its s-derivative.
double shock_speed_along(const Model &m, int family, const State &u, double s);
double shock_speed_rate(const Model &m, int family, const State &u, double s);

double state_distance(const State &x, const State &y);

}  // namespace ftl
