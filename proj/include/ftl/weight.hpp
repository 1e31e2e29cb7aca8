#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ftl/fronttrack.hpp"

namespace ftl {

struct WeightParams {
  double C1 = 1.0;
  double eps = 0.05;     // small/large shock threshold
  double a_star = 0.9;   // ratio across large 1-shocks (inverse for 2-shocks)
  bool strict = true;    // throw InvariantError when the weight grows at an event
};

// Checks e^{3 C1 eps/4} <= 1/a* and a* <= e^{-3 C1 eps/2}; throws DomainError.
void check_weight_params(const WeightParams &p);

// Weight between events: constant between shocks, value[k] left of shocks[k]
// and value.back() right of the last shock.
struct WeightEpoch {
  double t = 0.0;
  std::vector<Front> shocks;
  std::vector<double> value;
  double at(double x, double t) const;
};

struct WeightEvent {
  double t = 0.0, x = 0.0;
  std::string cls;     // interaction class used for the drop decision
  double drop = 1.0;   // factor applied to the whole field
  bool decayed = true; // a(., t+) <= a(., t-) away from x
  double worst = 0.0;  // largest log(a+/a-) over cells away from x
};

struct WeightField {
  Flavor flavor = Flavor::SmallBV;
  std::vector<WeightEpoch> epochs;
  std::vector<WeightEvent> events;
  double t_end = 0.0;

  const WeightEpoch &epoch_at(double t) const;
  double at(double x, double t) const { return epoch_at(t).at(x, t); }
  double max_value() const;
  double min_value() const;
  std::string csv() const;  // epoch_start_t,breakpoint_x,value
  // The field at time t as a profile with the value in the first component.
  Profile profile(double t) const;
};

// a = exp(3 C1/4 (V + 3 kappa Q/2 - sum_{1-shocks left} |sigma| + sum_{2-shocks left} |sigma|)).
WeightEpoch weight_smallbv(const std::vector<Front> &fronts, const GlimmParams &gp, double C1, double t = 0.0);
WeightField weight_smallbv_field(const FrontTrackingSolution &psi, double C1);

// Event-driven isothermal weight: left value e^{3 C1 U/4} times the
// accumulated drops, then Rule 1 (|sigma| > eps) or Rule 2 across each shock.
WeightField weight_iso(const FrontTrackingSolution &psi, const WeightParams &p);

// Drop factor and class name for one interaction.
std::pair<double, std::string> weight_drop(const std::vector<Front> &in, const std::vector<Front> &out,
                                           const WeightParams &p);

struct WeightReport {
  long shocks_checked = 0, bracket_failures = 0;
  long events_checked = 0, decay_failures = 0;
  long drops = 0;
  double max_a = 0.0, min_a = 0.0;
  double log_upper_envelope = 0.0;  // 3C1/4 (U(0) + V(0)) + V(0)/eps |log a*|
  bool within_envelope = true;
  std::vector<std::string> failures;
  bool ok() const { return bracket_failures == 0 && decay_failures == 0 && std::isfinite(max_a) && min_a > 0.0; }
};

// Ratio brackets at every shock of every epoch, decay at every event, and
// global bounds.
WeightReport verify_weight(const WeightField &a, const FrontTrackingSolution &psi, const WeightParams &p);

}  // namespace ftl
