#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftl/dissipation.hpp"
#include "ftl/distance.hpp"
#include "ftl/shift.hpp"
#include "ftl/weight.hpp"

namespace ftl {

struct DataSpec {
  std::string kind = "random";  // profile | random | oscillating
  Profile profile;              // kind == profile
  int jumps = 8;                // kind == random
  double amplitude = 0.05;
  State b1{1.0, 0.0}, b2{1.5, 0.0};  // kind == oscillating
  std::string gamma = "log1p";
  double finest = 1.0 / 1024.0;
};

struct RunConfig {
  std::string model = "isothermal";
  double rho_min = 1e-6;
  double nu = 1e-3;
  double T = 1.0;
  double R = 2.0;
  double info_speed = 0.0;  // 0: derived from the run
  Flavor flavor = Flavor::Isothermal;
  GlimmParams glimm;
  WeightParams weight;
  ShiftParams shift;
  UpsilonParams upsilon;
  ShiftPolicy policy = ShiftPolicy::RH;
  double offset = 0.0;
  std::uint64_t seed = 1;
  long max_events = 200000;
  std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
  DataSpec data;
};

// Throws DomainError on malformed or out-of-range input.
RunConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const RunConfig &c);
RunConfig load_config(const std::filesystem::path &path);
Model config_model(const RunConfig &c);
Profile config_data(const RunConfig &c);

// Random isothermal data: `jumps` elementary waves of either family with
// strengths uniform in [-amp, amp], spaced 0.05..0.15 apart from x = -0.5.
Profile random_profile(const Model &m, std::mt19937_64 &rng, int jumps, double amp);

// W(x) = b1 + (b2 - b1)/2 (sin(Gamma(1/|x|)) + 1), Gamma(y) = log(1 + y) or y.
State oscillating_value(const State &b1, const State &b2, const std::string &gamma, double x);
// Piecewise-constant sampling on [-R, R]: dyadic bands [r, 2r] split into 16
// cells each, down to the finest scale; W(finest) on (-finest, finest).
Profile infinite_bv_data(const State &b1, const State &b2, const std::string &gamma, double R, double finest);
double total_variation(const Profile &p);

// Largest |speed| over all fronts of a run; the information speed must exceed it.
double max_front_speed(const FrontTrackingSolution &sol);

// "# profiles v1\nt,x_left,x_right,a,b" with infinite ends written as -inf/inf.
std::string profiles_csv(const FrontTrackingSolution &sol, const std::vector<double> &times);

// runs/<timestamp>-<hash>; writes config.json there.
std::filesystem::path make_run_dir(const std::filesystem::path &base, const nlohmann::json &config);
std::string config_hash(const nlohmann::json &config);
void write_file(const std::filesystem::path &p, const std::string &text);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

// ---- experiments -------------------------------------------------------

struct SharpnessResult {
  double eps = 0.0, nu = 0.0;
  double initial = 0.0, final = 0.0;
  double lower_bound = 0.0;  // sqrt(eps/2)
  bool ok() const { return std::abs(initial - std::sqrt(2.0) * eps) <= 1e-10 && final >= lower_bound; }
};
// Stationary Burgers shock 1 | -1 against the data raised by eps on (-2, 0);
// nu = eps/16.
SharpnessResult sharpness_burgers(double eps);

struct HolderRow {
  std::string family;
  double delta = 0.0, tau = 0.0;
  double lhs = 0.0;      // ||u - v||_{L2(-R, R)} at tau
  double initial = 0.0;  // ||u0 - v0||_{L2(-R - s tau, R + s tau)}
  double ratio = 0.0;    // lhs / sqrt(initial)
};
struct HolderFamily {
  std::string name;
  double slope = 0.0;         // log-log slope of lhs(T) against ||u0 - v0||_{L2(-R,R)}
  double K_min = 0.0, K_max = 0.0;  // per-delta constants
};
struct HolderResult {
  double K = 0.0;  // single constant over every row
  double s = 0.0, R = 0.0, nu = 0.0;
  std::vector<HolderRow> rows;
  std::vector<HolderFamily> families;
  bool holds = true;  // lhs <= K sqrt(initial) at every row
  double min_slope() const;
};
HolderResult holder_stability(const std::vector<double> &deltas, double nu = 1e-3, double R = 2.0, double s = 3.0,
                              const std::vector<double> &taus = {0.25, 0.5, 0.75, 1.0});

struct ContractionResult {
  Flavor flavor = Flavor::Isothermal;
  int pairs = 0, violations = 0;
  double worst_ratio = 0.0;  // max over pairs and times of dnu(t)/dnu(0)
  double tolerance = 0.0;    // 10 nu
};
ContractionResult contraction_audit(Flavor flavor, int pairs, double nu, std::uint64_t seed,
                                    const UpsilonParams &p = {});

struct GrowthResult {
  Flavor flavor = Flavor::Isothermal;
  int runs = 0, samples = 0, violations = 0;
  double worst_ratio = 0.0;  // max measured / bound
  double max_K2 = 0.0;
  std::vector<std::string> failures;
};
// Offset, RH and Filippov shifted runs against the unshifted run.
GrowthResult growth_audit(Flavor flavor, int runs, double nu, std::uint64_t seed, const UpsilonParams &p = {});

struct GlimmAudit {
  int runs = 0;
  long events = 0, increases = 0, pairwise = 0, pairwise_violations = 0;
  long head_on = 0;
  double worst_dU = -1e300, worst_pair_margin = -1e300, worst_head_on = 0.0;
  std::size_t min_fronts = 0, max_fronts = 0;
};
// Small-BV isothermal data, eight jumps of amplitude 0.006 in log density and
// velocity; dU is the isothermal functional.
GlimmAudit glimm_audit(int runs, double nu, std::uint64_t seed);

struct WeightAudit {
  int runs = 0;
  WeightReport total;
  long envelope_failures = 0;
  double worst_growth = -1e300;
  double max_log_a = 0.0;
};
// Isothermal runs with closely spaced large and small shocks and rarefactions.
WeightAudit weight_audit(int runs, std::uint64_t seed, const WeightParams &p = {}, const GlimmParams &gp = {});

struct IdentityAudit {
  std::string model;
  int samples = 0;
  double worst = 0.0;
};
IdentityAudit identity_audit(const Model &m, int samples, std::uint64_t seed);

struct OvertakeAudit {
  int samples = 0, failures = 0;
  double worst_residual = 0.0, min_gap = 1e300, min_F = 1e300;
};
OvertakeAudit overtake_audit(int samples, std::uint64_t seed);

struct SeparationAudit {
  int samples = 0, order_failures = 0;
  double worst_closed_form = 0.0;
  double min_gap = 1e300;  // family-2 min speed minus family-1 max speed
};
SeparationAudit separation_audit(int samples, std::uint64_t seed);

struct NuConvergence {
  std::vector<double> nus, distances, factors;
  bool ok(double min_factor = 1.5) const;
};
// L1 distance on (-3, 3) at t = 1 between runs at nu and nu/2 for a
// 1-rarefaction, a 2-shock and a 1-shock that cross each other.
NuConvergence nu_convergence(const std::vector<double> &nus);

// Weighted-length monotonicity along elementary paths: two runs whose data
// differ by moving every jump by dtheta * xi.  Compares upsilon at the output
// times while the configuration is unchanged.
struct MonotonicityAudit {
  int paths = 0, comparisons = 0, increases = 0;
  double worst_rel_increase = -1e300;
};
MonotonicityAudit monotonicity_audit(Flavor flavor, int paths, double nu, std::uint64_t seed,
                                     const UpsilonParams &p = {});

}  // namespace ftl
