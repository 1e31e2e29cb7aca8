#include "ftl/fronttrack.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "json.hpp"

namespace ftl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pos_tol(double x) { return 1e-11 * (1.0 + std::abs(x)); }

void push_epoch(FrontTrackingSolution &sol, double t, const std::vector<Front> &live) {
  if (!sol.epochs.empty() && sol.epochs.back().t == t) {
    sol.epochs.back().fronts = live;
    sol.epochs.back().glimm = glimm_functionals(live, sol.glimm);
    return;
  }
  sol.epochs.push_back({t, live, glimm_functionals(live, sol.glimm)});
}

void record_natural(FrontTrackingSolution &sol, const Front &f) {
  if (static_cast<std::size_t>(f.id) >= sol.natural_speed.size())
    sol.natural_speed.resize(static_cast<std::size_t>(f.id) + 1, 0.0);
  sol.natural_speed[static_cast<std::size_t>(f.id)] = f.speed;
}

// Applies the optional shock speed rule to a freshly created front.
double apply_rule(const EvolveOptions &opt, Front &f, double t) {
  if (f.kind != FrontKind::Shock || !opt.shock_speed) return kInf;
  const double natural = f.speed;
  auto rule = opt.shock_speed(f, t, natural);
  if (!rule) return kInf;
  f.speed = rule->speed;
  if (opt.on_anchor) opt.on_anchor(f, t, natural, rule->label);
  return rule->until;
}

}  // namespace

Flavor parse_flavor(const std::string &s) {
  if (s == "small-bv" || s == "eps-bv" || s == "smallbv") return Flavor::SmallBV;
  if (s == "isothermal") return Flavor::Isothermal;
  throw DomainError("unknown flavor '" + s + "'");
}

std::string flavor_name(Flavor f) { return f == Flavor::SmallBV ? "small-bv" : "isothermal"; }

bool approaching(const Front &l, const Front &r) {
  if (l.family > r.family) return true;
  if (l.family == r.family) return l.sigma < 0.0 || r.sigma < 0.0;
  return false;
}

GlimmReport glimm_functionals(const std::vector<Front> &fronts, const GlimmParams &gp) {
  GlimmReport g;
  double all[2] = {0.0, 0.0}, shocks[2] = {0.0, 0.0};
  for (const Front &f : fronts) {
    const double a = std::abs(f.sigma);
    const int k = f.family - 1;
    g.V += a;
    g.V2 += (1.0 - gp.eta_weight * (f.sigma > 0 ? 1.0 : (f.sigma < 0 ? -1.0 : 0.0))) * a;
    double partner = f.sigma < 0.0 ? all[k] : shocks[k];
    if (f.family == 1) partner += all[1];
    g.Q += a * partner;
    all[k] += a;
    if (f.sigma < 0.0) shocks[k] += a;
  }
  g.U = g.V + gp.kappa * g.Q;
  g.U_iso = gp.kappa2 * g.V2 + g.Q;
  return g;
}

const Epoch &FrontTrackingSolution::epoch_at(double t) const {
  if (epochs.empty()) throw DomainError("solution has no epochs");
  if (t < epochs.front().t - 1e-14 || t > t_end + 1e-12)
    throw DomainError("sample time " + std::to_string(t) + " outside [0, " + std::to_string(t_end) + "]");
  auto it = std::upper_bound(epochs.begin(), epochs.end(), t,
                             [](double v, const Epoch &e) { return v < e.t; });
  if (it == epochs.begin()) return epochs.front();
  return *std::prev(it);
}

Profile FrontTrackingSolution::sample(double t) const {
  const Epoch &e = epoch_at(t);
  Profile p;
  p.u.push_back(far_left);
  for (const Front &f : e.fronts) {
    double x = f.pos(t);
    if (!p.x.empty() && x < p.x.back()) x = p.x.back();
    p.x.push_back(x);
    p.u.push_back(f.right);
  }
  return p;
}

std::size_t FrontTrackingSolution::max_fronts() const {
  std::size_t n = 0;
  for (const Epoch &e : epochs) n = std::max(n, e.fronts.size());
  return n;
}

std::string FrontTrackingSolution::events_jsonl(Flavor flavor) const {
  std::string out;
  for (const Event &e : events) {
    if (e.kind != EventKind::Interaction) continue;
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["x"] = e.x;
    j["in_ids"] = e.in_ids;
    j["out_ids"] = e.out_ids;
    j["dV"] = flavor == Flavor::SmallBV ? e.dV : e.dV2;
    j["dQ"] = e.dQ;
    j["dU"] = flavor == Flavor::SmallBV ? e.dU : e.dU_iso;
    out += j.dump();
    out += '\n';
  }
  return out;
}

FrontTrackingSolution init_fronts(const Model &m, double nu, const Profile &data, const GlimmParams &gp,
                                  const EvolveOptions &opt) {
  if (data.u.size() != data.x.size() + 1) throw DomainError("profile needs one more state than breakpoints");
  FrontTrackingSolution sol;
  sol.model = m;
  sol.nu = nu;
  sol.glimm = gp;
  sol.far_left = data.u.front();
  sol.far_right = data.u.back();
  std::vector<Front> live;
  for (std::size_t k = 0; k < data.x.size(); ++k) {
    if (k > 0 && data.x[k] < data.x[k - 1]) throw DomainError("profile breakpoints must be sorted");
    RiemannFan fan;
    try {
      fan = solve_riemann(m, nu, data.u[k], data.u[k + 1]);
    } catch (const std::exception &ex) {
      throw SolverError("initial jump " + std::to_string(k) + ": " + ex.what());
    }
    for (Front f : fan.fronts) {
      f.x0 = data.x[k];
      f.t0 = 0.0;
      f.id = sol.next_id++;
      record_natural(sol, f);
      apply_rule(opt, f, 0.0);
      live.push_back(f);
    }
  }
  push_epoch(sol, 0.0, live);
  return sol;
}

std::optional<Meeting> next_interaction(const std::vector<Front> &fronts, double t) {
  double best = kInf;
  std::size_t bi = 0;
  for (std::size_t i = 0; i + 1 < fronts.size(); ++i) {
    const Front &a = fronts[i], &b = fronts[i + 1];
    if (!(a.speed > b.speed)) continue;
    const double gap = std::max(0.0, b.pos(t) - a.pos(t));
    const double tc = t + gap / (a.speed - b.speed);
    // ties go to the leftmost pair
    if (tc < best - 1e-13 * (1.0 + std::abs(best == kInf ? 0.0 : best))) {
      best = tc;
      bi = i;
    }
  }
  if (best == kInf) return std::nullopt;
  Meeting mt;
  mt.t = best;
  mt.x = 0.5 * (fronts[bi].pos(best) + fronts[bi + 1].pos(best));
  mt.first = bi;
  mt.last = bi + 1;
  while (mt.last + 1 < fronts.size() && std::abs(fronts[mt.last + 1].pos(best) - mt.x) <= pos_tol(mt.x))
    ++mt.last;
  while (mt.first > 0 && std::abs(fronts[mt.first - 1].pos(best) - mt.x) <= pos_tol(mt.x)) --mt.first;
  return mt;
}

std::vector<Front> resolve_interaction(const Model &m, double nu, const std::vector<Front> &incoming,
                                       double t, double x) {
  if (incoming.size() < 2) throw DomainError("an interaction needs at least two fronts");
  RiemannFan fan = solve_riemann(m, nu, incoming.front().left, incoming.back().right);
  for (Front &f : fan.fronts) {
    f.x0 = x;
    f.t0 = t;
  }
  return fan.fronts;
}

void evolve(FrontTrackingSolution &sol, double T, const EvolveOptions &opt) {
  if (sol.epochs.empty()) throw DomainError("evolve needs an initialized solution");
  double t = sol.t_end;
  if (T < t) throw DomainError("evolve target time precedes current time");
  std::vector<Front> live = sol.epochs.back().fronts;
  std::vector<double> until(live.size(), kInf);
  if (opt.shock_speed) {
    // rules were applied at creation; fetch validity horizons again
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (live[i].kind != FrontKind::Shock) continue;
      const double nat = sol.natural_speed[static_cast<std::size_t>(live[i].id)];
      if (auto r = opt.shock_speed(live[i], t, nat)) {
        live[i].x0 = live[i].pos(t);
        live[i].t0 = t;
        live[i].speed = r->speed;
        until[i] = r->until;
      }
    }
    push_epoch(sol, t, live);
  }
  // fronts already nudged once; a second coincident meeting is resolved jointly
  std::unordered_set<int> nudged;
  long n_events = 0, stored = 0;
  for (const Epoch &e : sol.epochs) stored += static_cast<long>(e.fronts.size());
  while (true) {
    const auto meet = next_interaction(live, t);
    double t_anchor = kInf;
    for (double u : until) t_anchor = std::min(t_anchor, u);
    const double t_meet = meet ? meet->t : kInf;
    if (std::min(t_meet, t_anchor) > T) break;
    if (++n_events > opt.max_events)
      throw BudgetError("event budget of " + std::to_string(opt.max_events) + " exceeded at t=" +
                        std::to_string(t));
    stored += static_cast<long>(live.size());
    if (stored > opt.max_stored_fronts)
      throw BudgetError("front storage budget of " + std::to_string(opt.max_stored_fronts) + " exceeded at t=" +
                        std::to_string(t) + " (" + std::to_string(live.size()) + " live fronts)");

    if (t_anchor < t_meet) {
      t = std::max(t, t_anchor);
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (until[i] > t_anchor) continue;
        Front &f = live[i];
        const double nat = sol.natural_speed[static_cast<std::size_t>(f.id)];
        f.x0 = f.pos(t);
        f.t0 = t;
        auto r = opt.shock_speed(f, t, nat);
        f.speed = r ? r->speed : nat;
        until[i] = r ? std::max(r->until, t) : kInf;
        if (r && r->until <= t) until[i] = kInf;  // guard against stalls
        if (opt.on_anchor) opt.on_anchor(f, t, nat, r ? r->label : std::string("natural"));
      }
      push_epoch(sol, t, live);
      continue;
    }

    const double tm = std::max(t, meet->t);
    const std::size_t a = meet->first, b = meet->last;
    bool fresh = false;
    for (std::size_t i = a + 1; i < b; ++i) fresh = fresh || !nudged.count(live[i].id);
    if (b - a + 1 >= 3 && tm - t > 1e-12 && fresh) {
      // serialize a multi-front meeting by nudging the middle fronts
      const double g = static_cast<double>(b - a);
      Event ev;
      ev.kind = EventKind::Perturbation;
      ev.t = t;
      ev.x = meet->x;
      for (std::size_t i = a + 1; i < b; ++i) {
        Front &f = live[i];
        f.x0 = f.pos(t);
        f.t0 = t;
        const double d = opt.serialize_eps * static_cast<double>(i - a) / g;
        f.speed += d;
        nudged.insert(f.id);
        ev.in_ids.push_back(f.id);
        ev.perturbation = std::max(ev.perturbation, d);
      }
      sol.events.push_back(ev);
      ++sol.perturbations;
      push_epoch(sol, t, live);
      continue;
    }

    t = tm;
    std::vector<Front> incoming(live.begin() + static_cast<long>(a), live.begin() + static_cast<long>(b) + 1);
    if (opt.on_meeting) opt.on_meeting(incoming, t);
    std::vector<Front> outgoing;
    try {
      outgoing = resolve_interaction(sol.model, sol.nu, incoming, t, meet->x);
    } catch (const std::exception &ex) {
      throw SolverError("interaction at t=" + std::to_string(t) + ", x=" + std::to_string(meet->x) + ": " +
                        ex.what());
    }
    const GlimmReport before = glimm_functionals(live, sol.glimm);
    Event ev;
    ev.t = t;
    ev.x = meet->x;
    ev.pairwise = incoming.size() == 2;
    if (ev.pairwise) {
      ev.head_on = incoming[0].family == 2 && incoming[1].family == 1;
      ev.in_product = std::abs(incoming[0].sigma * incoming[1].sigma);
    }
    for (const Front &f : incoming) {
      ev.in_ids.push_back(f.id);
      ev.in_sum[f.family - 1] += f.sigma;
      ev.in_abs[f.family - 1] += std::abs(f.sigma);
      if (opt.on_death) opt.on_death(f, t);
    }
    std::vector<double> out_until;
    for (Front &f : outgoing) {
      f.id = sol.next_id++;
      record_natural(sol, f);
      out_until.push_back(apply_rule(opt, f, t));
      ev.out_ids.push_back(f.id);
      ev.out_sum[f.family - 1] += f.sigma;
      ev.out_abs[f.family - 1] += std::abs(f.sigma);
    }
    live.erase(live.begin() + static_cast<long>(a), live.begin() + static_cast<long>(b) + 1);
    live.insert(live.begin() + static_cast<long>(a), outgoing.begin(), outgoing.end());
    until.erase(until.begin() + static_cast<long>(a), until.begin() + static_cast<long>(b) + 1);
    until.insert(until.begin() + static_cast<long>(a), out_until.begin(), out_until.end());
    const GlimmReport after = glimm_functionals(live, sol.glimm);
    ev.dV = after.V - before.V;
    ev.dQ = after.Q - before.Q;
    ev.dU = after.U - before.U;
    ev.dV2 = after.V2 - before.V2;
    ev.dU_iso = after.U_iso - before.U_iso;
    sol.events.push_back(ev);
    push_epoch(sol, t, live);
  }
  sol.t_end = T;
}

FrontTrackingSolution run_front_tracking(const Model &m, double nu, const Profile &data, double T,
                                         const GlimmParams &gp, const EvolveOptions &opt) {
  FrontTrackingSolution sol = init_fronts(m, nu, data, gp, opt);
  evolve(sol, T, opt);
  return sol;
}

double fit_interaction_constant(const Model &m, double nu, const State &base, double amp, int samples,
                                unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-amp, amp);
  std::uniform_int_distribution<int> kind(0, m.families() == 2 ? 2 : 0);
  double worst = 0.0;
  for (int n = 0; n < samples; ++n) {
    int fa = 1, fb = 1;
    switch (m.families() == 2 ? kind(rng) : 1) {
      case 0: fa = 2; fb = 1; break;
      case 1: fa = 1; fb = 1; break;
      default: fa = 2; fb = 2; break;
    }
    double sa = U(rng), sb = U(rng);
    if (fa == fb && sa > 0 && sb > 0) sb = -sb;
    if (sa == 0.0 || sb == 0.0) continue;
    try {
      const State u1 = interp_curve(m, fa, base, sa, nu);
      const State u2 = interp_curve(m, fb, u1, sb, nu);
      const Strengths st = solve_strengths(m, nu, base, u2);
      double in[2] = {0.0, 0.0};
      in[fa - 1] += sa;
      in[fb - 1] += sb;
      const double num = std::abs(st.sigma1 - in[0]) + std::abs(st.sigma2 - in[1]);
      worst = std::max(worst, num / std::abs(sa * sb));
    } catch (const DomainError &) {
      continue;
    }
  }
  return worst;
}

}  // namespace ftl
