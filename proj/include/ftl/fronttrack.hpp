#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ftl/profile.hpp"
#include "ftl/riemann.hpp"

namespace ftl {

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Flavor { SmallBV, Isothermal };
Flavor parse_flavor(const std::string &s);
std::string flavor_name(Flavor f);

struct GlimmParams {
  double kappa = 10.0;
  double kappa2 = 100.0;
  double eta_weight = 0.01;
};

struct GlimmReport {
  double V = 0.0, Q = 0.0, U = 0.0;  // U = V + kappa Q
  double V2 = 0.0, U_iso = 0.0;      // U_iso = kappa2 V2 + Q
};

// Fronts must be sorted by position.
GlimmReport glimm_functionals(const std::vector<Front> &fronts, const GlimmParams &gp);
bool approaching(const Front &left, const Front &right);

enum class EventKind { Interaction, Reanchor, Perturbation };

struct Event {
  EventKind kind = EventKind::Interaction;
  double t = 0.0, x = 0.0;
  std::vector<int> in_ids, out_ids;
  double dV = 0.0, dQ = 0.0, dU = 0.0;  // small-BV functional
  double dV2 = 0.0, dU_iso = 0.0;       // isothermal functional
  bool pairwise = false;
  bool head_on = false;
  double in_product = 0.0;  // |sigma' sigma''| for pairwise events
  // Per-family signed strength sums, index 0 -> family 1.
  double in_sum[2] = {0.0, 0.0}, out_sum[2] = {0.0, 0.0};
  double in_abs[2] = {0.0, 0.0}, out_abs[2] = {0.0, 0.0};
  double perturbation = 0.0;
};

// Fronts alive on [t, next epoch t).
struct Epoch {
  double t = 0.0;
  std::vector<Front> fronts;
  GlimmReport glimm;
};

// Optional speed rule for shock fronts (shifted solutions).  Returns the
// speed to use from time t and the time until which it stays valid.
struct SpeedRule {
  double speed = 0.0;
  double until = std::numeric_limits<double>::infinity();
  std::string label;
};
using ShockSpeedFn = std::function<std::optional<SpeedRule>(const Front &, double t, double natural_speed)>;

// Called whenever a shock is (re)anchored, with its natural speed.
using AnchorHook = std::function<void(const Front &, double t, double natural_speed, const std::string &label)>;

struct EvolveOptions {
  long max_events = 200000;
  // Every epoch keeps a copy of the live fronts; this caps the total copies
  // (80 bytes each) so that fine-nu runs fail instead of exhausting memory.
  long max_stored_fronts = 25000000;
  double serialize_eps = 1e-9;  // speed perturbation for >= 3-front meetings
  ShockSpeedFn shock_speed;     // empty: natural speeds
  AnchorHook on_anchor;
  std::function<void(const Front &, double t)> on_death;
  // Sees each run of meeting fronts before it is resolved; may throw.
  std::function<void(const std::vector<Front> &, double t)> on_meeting;
};

struct FrontTrackingSolution {
  Model model;
  double nu = 1e-3;
  GlimmParams glimm;
  State far_left, far_right;
  std::vector<Epoch> epochs;
  std::vector<Event> events;
  double t_end = 0.0;
  int next_id = 0;
  long perturbations = 0;
  std::vector<double> natural_speed;  // by front id

  const Epoch &epoch_at(double t) const;
  Profile sample(double t) const;
  std::vector<Front> fronts_at(double t) const { return epoch_at(t).fronts; }
  std::size_t max_fronts() const;
  std::string events_jsonl(Flavor flavor) const;
};

FrontTrackingSolution init_fronts(const Model &m, double nu, const Profile &data,
                                  const GlimmParams &gp = {}, const EvolveOptions &opt = {});

struct Meeting {
  double t = 0.0, x = 0.0;
  std::size_t first = 0, last = 0;  // indices into the front list
};
// Earliest meeting among adjacent approaching fronts at or after time t.
std::optional<Meeting> next_interaction(const std::vector<Front> &fronts, double t);

// Outgoing fronts (positioned at x, born at t, ids unset) for the incoming run.
std::vector<Front> resolve_interaction(const Model &m, double nu, const std::vector<Front> &incoming,
                                       double t, double x);

void evolve(FrontTrackingSolution &sol, double T, const EvolveOptions &opt = {});

FrontTrackingSolution run_front_tracking(const Model &m, double nu, const Profile &data, double T,
                                         const GlimmParams &gp = {}, const EvolveOptions &opt = {});

// Largest |sigma2 - sum sigma''| + |sigma1 - sum sigma'| over |sigma' sigma''|
// across random pairwise interactions near `base`.
double fit_interaction_constant(const Model &m, double nu, const State &base, double amp,
                                int samples, unsigned seed);

}  // namespace ftl
