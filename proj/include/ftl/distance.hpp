#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftl/fronttrack.hpp"
#include "ftl/profile.hpp"

namespace ftl {

// Exact integrals of |p - q| (Euclidean norm of the state difference) over
// [a, b]; the two-argument forms integrate over the whole line.
double l1_distance(const Profile &p, const Profile &q, double a, double b);
double l2_distance(const Profile &p, const Profile &q, double a, double b);
double linf_distance(const Profile &p, const Profile &q, double a, double b);
double l1_distance(const Profile &p, const Profile &q);
double l2_distance(const Profile &p, const Profile &q);
double linf_distance(const Profile &p, const Profile &q);

struct UpsilonParams {
  double H1 = 1.0, H2 = 1.0, H3 = 1.0;  // isothermal exponents
  double K = 10.0;                      // small-BV constant
};

// One jump of an elementary path: strengths of its two waves and its shift rate.
struct PathJump {
  double x = 0.0;
  double sigma[2] = {0.0, 0.0};
  double xi = 0.0;
};

struct PathInterval {
  double a = 0.0, b = 0.0;
  std::vector<PathJump> jumps;  // sorted by x
};

struct PseudopolygonalPath {
  Flavor flavor = Flavor::Isothermal;
  std::vector<PathInterval> intervals;
  double l1_length() const;  // sum (b - a) sum |sigma xi|
};

struct UpsilonValue {
  double value = 0.0;       // weighted sum
  double l1 = 0.0;          // sum |sigma xi|
  double max_weight = 0.0;  // largest wave weight in the configuration
};

UpsilonValue upsilon(const std::vector<PathJump> &jumps, Flavor flavor, const UpsilonParams &p);

// Jump strengths of a profile, from the nu-interpolated wave curves.
std::vector<PathJump> profile_jumps(const Model &m, double nu, const Profile &u);

// Sweeping homotopy u on (-inf, theta], ubar on (theta, inf) over the cells of
// the common refinement where the two differ.
PseudopolygonalPath sweeping_path(const Model &m, double nu, const Profile &u, const Profile &ubar, Flavor flavor);

struct DnuResult {
  double value = 0.0;        // weighted length of the sweeping path
  double l1_strength = 0.0;  // its unweighted length (strength L1 distance)
  double max_weight = 0.0;
  std::size_t cells = 0;
};

// Upper bound for d_nu; parallel over cells, serial variant for reference.
DnuResult dnu_upper(const Model &m, double nu, const Profile &u, const Profile &ubar, Flavor flavor,
                    const UpsilonParams &p = {});
DnuResult dnu_upper_serial(const Model &m, double nu, const Profile &u, const Profile &ubar, Flavor flavor,
                           const UpsilonParams &p = {});

// Integral of the summed strengths of the Riemann problem (u(x), ubar(x)).
double strength_l1(const Model &m, double nu, const Profile &u, const Profile &ubar);

// A priori weight bounds: e^{(2H1 + H2 + H3) V} and 3 (1 + K V) e^{K Q}.
double k2_isothermal(double V, const UpsilonParams &p);
double k2_smallbv(double V, double Q, const UpsilonParams &p);

// Weighted length rate of an elementary path at time t, from two runs whose
// initial data differ by translating jumps by dtheta * xi.  Fronts are
// matched by id; nullopt when the configurations differ.
std::optional<UpsilonValue> elementary_upsilon(const std::vector<Front> &a, const std::vector<Front> &b,
                                               double dtheta, double t, Flavor flavor, const UpsilonParams &p);

struct GrowthSample {
  double t = 0.0;
  double l1 = 0.0, l2 = 0.0;
  double measured = 0.0;  // dnu_upper(v(t), psi(t))
  double cost = 0.0;      // shift cost up to t
  double K2 = 0.0;        // largest weight seen up to t
  double bound = 0.0;     // K2 cost + c sqrt(nu)
};

inline constexpr const char *kDistanceCsvHeader = "# distance v1\nt,l1,l2,dnu_upper,bound_rhs\n";

// Distance between an unshifted and a shifted solution sharing initial data,
// against the shift-cost bound, at the given times.
std::vector<GrowthSample> shifted_growth(const FrontTrackingSolution &v, const FrontTrackingSolution &psi,
                                         const std::vector<double> &times, Flavor flavor,
                                         const UpsilonParams &p = {}, double c = 1.0);
std::string growth_csv(const std::vector<GrowthSample> &rows);

}  // namespace ftl
