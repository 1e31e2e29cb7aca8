#include "ftl/weight.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ftl {

namespace {

double rule_ratio(const Front &f, const WeightParams &p) {
  const double s = std::abs(f.sigma);
  if (s > p.eps) return f.family == 1 ? p.a_star : 1.0 / p.a_star;
  return std::exp((f.family == 1 ? -0.75 : 0.75) * p.C1 * s);
}

WeightEpoch build_epoch(const std::vector<Front> &fronts, double left, double t, const WeightParams &p) {
  WeightEpoch e;
  e.t = t;
  e.value.push_back(left);
  for (const Front &f : fronts) {
    if (f.kind != FrontKind::Shock) continue;
    e.shocks.push_back(f);
    e.value.push_back(e.value.back() * rule_ratio(f, p));
  }
  return e;
}

// Largest log(after/before) over cells of positive length at time t.
double worst_growth(const WeightEpoch &before, const WeightEpoch &after, double t) {
  std::vector<double> xs;
  for (const Front &f : before.shocks) xs.push_back(f.pos(t));
  for (const Front &f : after.shocks) xs.push_back(f.pos(t));
  std::sort(xs.begin(), xs.end());
  double worst = std::log(after.value.front() / before.value.front());
  worst = std::max(worst, std::log(after.value.back() / before.value.back()));
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    if (!(xs[k + 1] - xs[k] > 1e-11 * (1.0 + std::abs(xs[k])))) continue;
    const double mid = 0.5 * (xs[k] + xs[k + 1]);
    worst = std::max(worst, std::log(after.at(mid, t) / before.at(mid, t)));
  }
  return worst;
}

std::map<int, Front> by_id(const std::vector<Front> &fs) {
  std::map<int, Front> m;
  for (const Front &f : fs) m[f.id] = f;
  return m;
}

}  // namespace

void check_weight_params(const WeightParams &p) {
  if (!(p.C1 > 0.0 && p.eps > 0.0 && p.a_star > 0.0 && p.a_star < 1.0))
    throw DomainError("weight parameters must satisfy C1, eps > 0 and 0 < a* < 1");
  if (std::exp(0.75 * p.C1 * p.eps) > 1.0 / p.a_star)
    throw DomainError("weight parameters: e^{3 C1 eps/4} exceeds 1/a*");
  if (p.a_star > std::exp(-1.5 * p.C1 * p.eps))
    throw DomainError("weight parameters: a* exceeds e^{-3 C1 eps/2}");
}

double WeightEpoch::at(double x, double t) const {
  std::size_t k = 0;
  while (k < shocks.size() && shocks[k].pos(t) <= x) ++k;
  return value[k];
}

const WeightEpoch &WeightField::epoch_at(double t) const {
  if (epochs.empty()) throw DomainError("empty weight field");
  const auto it = std::upper_bound(epochs.begin(), epochs.end(), t,
                                   [](double v, const WeightEpoch &e) { return v < e.t; });
  return it == epochs.begin() ? epochs.front() : *(it - 1);
}

Profile WeightField::profile(double t) const {
  const WeightEpoch &e = epoch_at(t);
  Profile p;
  p.u.push_back({e.value.front(), 0.0});
  for (std::size_t k = 0; k < e.shocks.size(); ++k) {
    p.x.push_back(e.shocks[k].pos(t));
    p.u.push_back({e.value[k + 1], 0.0});
  }
  return p;
}

double WeightField::max_value() const {
  double m = 0.0;
  for (const WeightEpoch &e : epochs)
    for (double v : e.value) m = std::max(m, v);
  return m;
}

double WeightField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const WeightEpoch &e : epochs)
    for (double v : e.value) m = std::min(m, v);
  return m;
}

std::string WeightField::csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "# weight-field v1\nepoch_start_t,breakpoint_x,value\n";
  for (const WeightEpoch &e : epochs) {
    os << e.t << ",-inf," << e.value.front() << '\n';
    for (std::size_t k = 0; k < e.shocks.size(); ++k)
      os << e.t << ',' << e.shocks[k].pos(e.t) << ',' << e.value[k + 1] << '\n';
  }
  return os.str();
}

WeightEpoch weight_smallbv(const std::vector<Front> &fronts, const GlimmParams &gp, double C1, double t) {
  const GlimmReport g = glimm_functionals(fronts, gp);
  WeightEpoch e;
  e.t = t;
  double expo = g.V + 1.5 * gp.kappa * g.Q;
  e.value.push_back(std::exp(0.75 * C1 * expo));
  for (const Front &f : fronts) {
    if (f.kind != FrontKind::Shock) continue;
    expo += f.family == 1 ? -std::abs(f.sigma) : std::abs(f.sigma);
    e.shocks.push_back(f);
    e.value.push_back(std::exp(0.75 * C1 * expo));
  }
  return e;
}

WeightField weight_smallbv_field(const FrontTrackingSolution &psi, double C1) {
  WeightField a;
  a.flavor = Flavor::SmallBV;
  a.t_end = psi.t_end;
  for (const Epoch &ep : psi.epochs) {
    a.epochs.push_back(weight_smallbv(ep.fronts, psi.glimm, C1, ep.t));
    if (a.epochs.size() < 2) continue;
    WeightEvent ev;
    ev.t = ep.t;
    ev.cls = "small-bv";
    ev.worst = worst_growth(a.epochs[a.epochs.size() - 2], a.epochs.back(), ep.t);
    ev.decayed = ev.worst <= 1e-12;
    a.events.push_back(ev);
  }
  return a;
}

std::pair<double, std::string> weight_drop(const std::vector<Front> &in, const std::vector<Front> &out,
                                           const WeightParams &p) {
  if (in.size() != 2) return {1.0, "multi"};
  const Front &l = in[0], &r = in[1];
  if (l.family == 2 && r.family == 1) return {1.0, "head-on"};
  if (l.family != r.family) return {1.0, "crossing"};
  const int fam = l.family;
  auto large = [&](const Front &f) { return f.kind == FrontKind::Shock && std::abs(f.sigma) > p.eps; };
  const Front *out_shock = nullptr;
  for (const Front &f : out)
    if (f.family == fam && f.kind == FrontKind::Shock) out_shock = &f;
  const bool ls = l.kind == FrontKind::Shock, rs = r.kind == FrontKind::Shock;
  const bool out_large = out_shock && large(*out_shock);
  if (ls && rs) {
    if (fam == 2) {
      if (out_large && !large(l) && !large(r)) return {p.a_star, "small-2-shocks-to-large"};
      return {1.0, "2-shock-overtake"};
    }
    if (out_large && large(l) && large(r)) return {p.a_star, "large-1-shocks-merge"};
    if (out_large && (large(l) != large(r))) {
      const double small = large(l) ? std::abs(r.sigma) : std::abs(l.sigma);
      return {std::exp(-0.75 * p.C1 * small), "large-small-1-shocks"};
    }
    return {1.0, "1-shock-overtake"};
  }
  if (ls || rs) {
    const Front &sh = ls ? l : r;
    if (fam == 1 && large(sh) && !out_large) return {p.a_star, "large-1-shock-weakened"};
    return {1.0, fam == 1 ? "1-shock-rarefaction" : "2-shock-rarefaction"};
  }
  return {1.0, "rarefactions"};
}

WeightField weight_iso(const FrontTrackingSolution &psi, const WeightParams &p) {
  WeightField a;
  a.flavor = Flavor::Isothermal;
  a.t_end = psi.t_end;
  double D = 1.0;
  std::size_t next_event = 0;
  for (std::size_t e = 0; e < psi.epochs.size(); ++e) {
    const Epoch &ep = psi.epochs[e];
    std::vector<WeightEvent> here;
    if (e > 0) {
      const auto before = by_id(psi.epochs[e - 1].fronts), after = by_id(ep.fronts);
      // all interaction events that end at this epoch's start
      while (next_event < psi.events.size() && psi.events[next_event].t <= ep.t) {
        const Event &ev = psi.events[next_event++];
        if (ev.kind != EventKind::Interaction) continue;
        std::vector<Front> in, out;
        for (int id : ev.in_ids)
          if (auto it = before.find(id); it != before.end()) in.push_back(it->second);
        for (int id : ev.out_ids)
          if (auto it = after.find(id); it != after.end()) out.push_back(it->second);
        const auto [drop, cls] = weight_drop(in, out, p);
        D *= drop;
        here.push_back({ev.t, ev.x, cls, drop, true, 0.0});
      }
    }
    a.epochs.push_back(build_epoch(ep.fronts, std::exp(0.75 * p.C1 * ep.glimm.U_iso) * D, ep.t, p));
    if (e == 0) continue;
    const double worst = worst_growth(a.epochs[e - 1], a.epochs[e], ep.t);
    if (here.empty()) here.push_back({ep.t, 0.0, "reanchor", 1.0, true, 0.0});
    for (WeightEvent &w : here) {
      w.worst = worst;
      w.decayed = worst <= 1e-12;
      if (!w.decayed && p.strict) {
        std::ostringstream os;
        os << "weight grew by log-ratio " << worst << " at t=" << w.t << ", x=" << w.x << " (class " << w.cls
           << ")";
        throw InvariantError(os.str());
      }
      a.events.push_back(w);
    }
  }
  return a;
}

WeightReport verify_weight(const WeightField &a, const FrontTrackingSolution &psi, const WeightParams &p) {
  WeightReport r;
  for (const WeightEpoch &e : a.epochs) {
    for (std::size_t k = 0; k < e.shocks.size(); ++k) {
      const Front &f = e.shocks[k];
      const double s = std::abs(f.sigma);
      // ratio a+/a- for 1-shocks, a-/a+ for 2-shocks
      const double ratio = f.family == 1 ? e.value[k + 1] / e.value[k] : e.value[k] / e.value[k + 1];
      bool ok;
      if (a.flavor == Flavor::Isothermal && s > p.eps) {
        ok = std::abs(ratio - p.a_star) <= 1e-12;
      } else {
        ok = ratio >= 1.0 - 2.0 * p.C1 * s - 1e-14 && ratio <= 1.0 - 0.5 * p.C1 * s + 1e-14;
      }
      ++r.shocks_checked;
      if (!ok) {
        ++r.bracket_failures;
        if (r.failures.size() < 20) {
          std::ostringstream os;
          os << "ratio " << ratio << " at shock " << f.id << " (sigma " << f.sigma << ") t=" << e.t;
          r.failures.push_back(os.str());
        }
      }
    }
  }
  for (const WeightEvent &ev : a.events) {
    ++r.events_checked;
    if (ev.drop != 1.0) ++r.drops;
    if (!ev.decayed) {
      ++r.decay_failures;
      if (r.failures.size() < 40) {
        std::ostringstream os;
        os << "growth " << ev.worst << " at t=" << ev.t << " class " << ev.cls;
        r.failures.push_back(os.str());
      }
    }
  }
  r.max_a = a.max_value();
  r.min_a = a.min_value();
  if (!psi.epochs.empty()) {
    const GlimmReport &g0 = psi.epochs.front().glimm;
    const double U0 = a.flavor == Flavor::Isothermal ? g0.U_iso : g0.V + 1.5 * psi.glimm.kappa * g0.Q;
    r.log_upper_envelope = 0.75 * p.C1 * (U0 + g0.V) + g0.V / p.eps * std::abs(std::log(p.a_star));
    r.within_envelope = std::log(r.max_a) <= r.log_upper_envelope + 1e-12;
  }
  return r;
}

}  // namespace ftl
