#include "ftl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

namespace ftl {

using nlohmann::json;

namespace {

State state_from_json(const json &j) {
  if (!j.is_array() || j.size() != 2) throw DomainError("a state is a two-element array");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json state_to_json(const State &s) { return json::array({s.a, s.b}); }

template <class T>
void read(const json &j, const char *key, T &out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void require(bool ok, const std::string &what) {
  if (!ok) throw DomainError("config: " + what);
}

std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig config_from_json(const json &j) {
  RunConfig c;
  try {
    read(j, "model", c.model);
    read(j, "rho_min", c.rho_min);
    read(j, "nu", c.nu);
    read(j, "T", c.T);
    read(j, "R", c.R);
    read(j, "info_speed", c.info_speed);
    if (j.contains("flavor")) c.flavor = parse_flavor(j.at("flavor").get<std::string>());
    read(j, "seed", c.seed);
    read(j, "max_events", c.max_events);
    read(j, "times", c.times);
    if (j.contains("constants")) {
      const json &k = j.at("constants");
      read(k, "C1", c.weight.C1);
      c.shift.C1 = c.weight.C1;
      read(k, "kappa", c.glimm.kappa);
      read(k, "kappa2", c.glimm.kappa2);
      read(k, "eta_weight", c.glimm.eta_weight);
      read(k, "eps", c.weight.eps);
      c.shift.eps = c.weight.eps;
      read(k, "a_star", c.weight.a_star);
      c.shift.a_star = c.weight.a_star;
      read(k, "C_star", c.shift.C_star);
      read(k, "L", c.shift.L);
      read(k, "K_ball", c.shift.K_ball);
      read(k, "H1", c.upsilon.H1);
      read(k, "H2", c.upsilon.H2);
      read(k, "H3", c.upsilon.H3);
      read(k, "K", c.upsilon.K);
    }
    if (j.contains("shift")) {
      const json &s = j.at("shift");
      if (s.contains("policy")) c.policy = parse_shift_policy(s.at("policy").get<std::string>());
      read(s, "offset", c.offset);
    }
    if (j.contains("data")) {
      const json &d = j.at("data");
      read(d, "kind", c.data.kind);
      if (c.data.kind == "profile") {
        c.data.profile.x = d.at("x").get<std::vector<double>>();
        c.data.profile.u.clear();
        for (const json &s : d.at("states")) c.data.profile.u.push_back(state_from_json(s));
      } else if (c.data.kind == "random") {
        read(d, "jumps", c.data.jumps);
        read(d, "amplitude", c.data.amplitude);
      } else if (c.data.kind == "oscillating") {
        if (d.contains("b1")) c.data.b1 = state_from_json(d.at("b1"));
        if (d.contains("b2")) c.data.b2 = state_from_json(d.at("b2"));
        read(d, "gamma", c.data.gamma);
        read(d, "finest", c.data.finest);
      } else {
        throw DomainError("config: unknown data kind '" + c.data.kind + "'");
      }
    }
  } catch (const json::exception &e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  Model::parse(c.model);
  require(c.nu > 0.0, "nu must be positive");
  require(c.T >= 0.0, "T must be non-negative");
  require(c.R > 0.0, "R must be positive");
  require(c.info_speed >= 0.0, "info_speed must be non-negative");
  require(c.rho_min > 0.0, "rho_min must be positive");
  require(c.max_events > 0, "max_events must be positive");
  require(c.glimm.kappa > 0.0 && c.glimm.kappa2 > 0.0, "kappa and kappa2 must be positive");
  require(c.upsilon.H1 > 0.0 && c.upsilon.H2 > 0.0 && c.upsilon.H3 > 0.0 && c.upsilon.K > 0.0,
          "H1, H2, H3 and K must be positive");
  require(c.shift.C_star > 0.0 && c.shift.L > 0.0 && c.shift.K_ball > 0.0, "C_star, L and K_ball must be positive");
  check_weight_params(c.weight);
  for (double t : c.times) require(t >= 0.0 && t <= c.T, "output times must lie in [0, T]");
  if (c.data.kind == "profile") {
    const Profile &p = c.data.profile;
    require(p.u.size() == p.x.size() + 1, "a profile needs one more state than breakpoints");
    require(std::is_sorted(p.x.begin(), p.x.end()), "profile breakpoints must be sorted");
  }
  if (c.data.kind == "random") require(c.data.jumps >= 0 && c.data.amplitude >= 0.0, "bad random data");
  if (c.data.kind == "oscillating")
    require(c.data.finest > 0.0 && c.data.finest < c.R && (c.data.gamma == "log1p" || c.data.gamma == "identity"),
            "oscillating data needs 0 < finest < R and gamma log1p or identity");
  return c;
}

json config_to_json(const RunConfig &c) {
  json j;
  j["model"] = c.model;
  j["rho_min"] = c.rho_min;
  j["nu"] = c.nu;
  j["T"] = c.T;
  j["R"] = c.R;
  j["info_speed"] = c.info_speed;
  j["flavor"] = flavor_name(c.flavor);
  j["seed"] = c.seed;
  j["max_events"] = c.max_events;
  j["times"] = c.times;
  j["constants"] = {{"C1", c.weight.C1},       {"kappa", c.glimm.kappa}, {"kappa2", c.glimm.kappa2},
                    {"eta_weight", c.glimm.eta_weight}, {"eps", c.weight.eps}, {"a_star", c.weight.a_star},
                    {"C_star", c.shift.C_star}, {"L", c.shift.L},         {"K_ball", c.shift.K_ball},
                    {"H1", c.upsilon.H1},       {"H2", c.upsilon.H2},     {"H3", c.upsilon.H3},
                    {"K", c.upsilon.K}};
  j["shift"] = {{"policy", shift_policy_name(c.policy)}, {"offset", c.offset}};
  json d{{"kind", c.data.kind}};
  if (c.data.kind == "profile") {
    d["x"] = c.data.profile.x;
    json s = json::array();
    for (const State &u : c.data.profile.u) s.push_back(state_to_json(u));
    d["states"] = s;
  } else if (c.data.kind == "random") {
    d["jumps"] = c.data.jumps;
    d["amplitude"] = c.data.amplitude;
  } else {
    d["b1"] = state_to_json(c.data.b1);
    d["b2"] = state_to_json(c.data.b2);
    d["gamma"] = c.data.gamma;
    d["finest"] = c.data.finest;
  }
  j["data"] = d;
  return j;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw DomainError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

Model config_model(const RunConfig &c) {
  Model m = Model::parse(c.model);
  m.rho_min = c.rho_min;
  return m;
}

Profile config_data(const RunConfig &c) {
  const Model m = config_model(c);
  Profile p;
  if (c.data.kind == "profile") {
    p = c.data.profile;
  } else if (c.data.kind == "random") {
    std::mt19937_64 rng(c.seed);
    p = random_profile(m, rng, c.data.jumps, c.data.amplitude);
  } else {
    p = infinite_bv_data(c.data.b1, c.data.b2, c.data.gamma, c.R, c.data.finest);
  }
  for (const State &s : p.u) check_state(m, s);
  return p;
}

Profile random_profile(const Model &m, std::mt19937_64 &rng, int jumps, double amp) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Profile d;
  d.u.push_back(m.kind == ModelKind::Burgers ? State{0.5, 0.0} : iso_state(1.0, 0.0));
  double x = -0.5;
  for (int k = 0; k < jumps; ++k) {
    x += 0.05 + 0.1 * U(rng);
    d.x.push_back(x);
    const int fam = m.families() == 1 || U(rng) < 0.5 ? 1 : 2;
    const double s = amp * (2.0 * U(rng) - 1.0);
    d.u.push_back(s < 0.0 ? shock_curve(m, fam, d.u.back(), s) : rarefaction_curve(m, fam, d.u.back(), s));
  }
  return d;
}

State oscillating_value(const State &b1, const State &b2, const std::string &gamma, double x) {
  const double y = 1.0 / std::abs(x);
  const double g = gamma == "identity" ? y : std::log1p(y);
  const double w = 0.5 * (std::sin(g) + 1.0);
  return {b1.a + (b2.a - b1.a) * w, b1.b + (b2.b - b1.b) * w};
}

Profile infinite_bv_data(const State &b1, const State &b2, const std::string &gamma, double R, double finest) {
  constexpr int kSub = 16;
  std::vector<double> right;  // breakpoints in (0, R]
  for (double r = finest; r < R; r *= 2.0) {
    const double hi = std::min(2.0 * r, R);
    for (int k = 0; k < kSub; ++k) right.push_back(r + (hi - r) * k / kSub);
  }
  right.push_back(R);
  Profile p;
  for (std::size_t k = right.size(); k-- > 0;) p.x.push_back(-right[k]);
  for (double x : right) p.x.push_back(x);
  // cell states at midpoints; the centre cell takes W(finest)
  p.u.push_back(oscillating_value(b1, b2, gamma, R));
  for (std::size_t k = 0; k + 1 < p.x.size(); ++k) {
    const double lo = p.x[k], hi = p.x[k + 1];
    p.u.push_back(lo < 0.0 && hi > 0.0 ? oscillating_value(b1, b2, gamma, finest)
                                       : oscillating_value(b1, b2, gamma, 0.5 * (lo + hi)));
  }
  p.u.push_back(oscillating_value(b1, b2, gamma, R));
  return p;
}

double total_variation(const Profile &p) {
  double tv = 0.0;
  for (std::size_t k = 0; k + 1 < p.u.size(); ++k) tv += std::hypot(p.u[k + 1].a - p.u[k].a, p.u[k + 1].b - p.u[k].b);
  return tv;
}

double max_front_speed(const FrontTrackingSolution &sol) {
  double s = 0.0;
  for (const Epoch &e : sol.epochs)
    for (const Front &f : e.fronts) s = std::max(s, std::abs(f.speed));
  return s;
}

std::string profiles_csv(const FrontTrackingSolution &sol, const std::vector<double> &times) {
  std::string out = "# profiles v1\nt,x_left,x_right,a,b\n";
  for (double t : times) {
    const Profile p = sol.sample(t);
    for (std::size_t k = 0; k < p.u.size(); ++k) {
      const double lo = k == 0 ? -INFINITY : p.x[k - 1];
      const double hi = k == p.x.size() ? INFINITY : p.x[k];
      out += fmt(t) + ',' + fmt(lo) + ',' + fmt(hi) + ',' + fmt(p.u[k].a) + ',' + fmt(p.u[k].b) + '\n';
    }
  }
  return out;
}

std::string config_hash(const json &config) {
  // FNV-1a over the canonical dump
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 10);
}

std::filesystem::path make_run_dir(const std::filesystem::path &base, const json &config) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  const std::filesystem::path dir = base / (std::string(stamp) + "-" + config_hash(config));
  std::filesystem::create_directories(dir);
  write_file(dir / "config.json", config.dump(2) + "\n");
  return dir;
}

void write_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  const std::size_t n = std::min(x.size(), y.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

// ---- experiments -------------------------------------------------------

SharpnessResult sharpness_burgers(double eps) {
  if (!(eps > 0.0 && eps <= 0.1)) throw DomainError("sharpness needs 0 < eps <= 0.1");
  const Model m = Model::parse("burgers");
  SharpnessResult r;
  r.eps = eps;
  r.nu = eps / 16.0;
  const Profile phi{{0.0}, {State{1.0, 0.0}, State{-1.0, 0.0}}};
  const Profile pert{{-2.0, 0.0}, {State{1.0, 0.0}, State{1.0 + eps, 0.0}, State{-1.0, 0.0}}};
  const FrontTrackingSolution a = run_front_tracking(m, r.nu, phi, 1.0);
  const FrontTrackingSolution b = run_front_tracking(m, r.nu, pert, 1.0);
  r.initial = l2_distance(a.sample(0.0), b.sample(0.0));
  r.final = l2_distance(a.sample(1.0), b.sample(1.0));
  r.lower_bound = std::sqrt(eps / 2.0);
  return r;
}

double HolderResult::min_slope() const {
  double s = 1e300;
  for (const HolderFamily &f : families) s = std::min(s, f.slope);
  return s;
}

HolderResult holder_stability(const std::vector<double> &deltas, double nu, double R, double s,
                              const std::vector<double> &taus) {
  const Model m;
  HolderResult out;
  out.s = s;
  out.R = R;
  out.nu = nu;
  const State a = iso_state(1.0, 0.0);
  const double T = *std::max_element(taus.begin(), taus.end());
  struct Pair {
    Profile v, u;
  };
  // v-data families and their delta-perturbed u-data
  auto make = [&](int fam, double d) {
    Pair p;
    if (fam == 0) {  // translated 1-shock
      const State b = shock_curve(m, 1, a, -0.3);
      p.v = Profile{{0.0}, {a, b}};
      p.u = Profile{{d}, {a, b}};
    } else if (fam == 1) {  // three waves, density in [0.5, 2], bump left of the 1-shock
      const State b = shock_curve(m, 1, a, -0.4), c = rarefaction_curve(m, 2, b, 0.3), e = shock_curve(m, 2, c, -0.5);
      p.v = Profile{{-0.4, 0.0, 0.4}, {a, b, c, e}};
      p.u = Profile{{-0.65, -0.4, 0.0, 0.4}, {a, State{a.a * (1.0 + d), a.b * (1.0 + d)}, b, c, e}};
    } else {  // rarefaction then 1-shock, momentum raised between them
      const State b = rarefaction_curve(m, 1, a, 0.2), c = shock_curve(m, 1, b, -0.3);
      p.v = Profile{{-0.2, 0.2}, {a, b, c}};
      p.u = Profile{{-0.2, -0.1, 0.2}, {a, b, State{b.a, b.b + d}, c}};
    }
    return p;
  };
  const char *names[] = {"translated-shock", "three-wave-bump", "rarefaction-shock-momentum"};
  for (int fam = 0; fam < 3; ++fam) {
    HolderFamily hf;
    hf.name = names[fam];
    hf.K_min = 1e300;
    std::vector<double> x0, xT;
    for (double d : deltas) {
      const Pair p = make(fam, d);
      const FrontTrackingSolution sv = run_front_tracking(m, nu, p.v, T), su = run_front_tracking(m, nu, p.u, T);
      double Kd = 0.0, last = 0.0;
      for (double tau : taus) {
        HolderRow row;
        row.family = hf.name;
        row.delta = d;
        row.tau = tau;
        row.lhs = l2_distance(su.sample(tau), sv.sample(tau), -R, R);
        row.initial = l2_distance(p.u, p.v, -R - s * tau, R + s * tau);
        row.ratio = row.lhs / std::sqrt(row.initial);
        Kd = std::max(Kd, row.ratio);
        if (tau == T) last = row.lhs;
        out.rows.push_back(row);
      }
      hf.K_min = std::min(hf.K_min, Kd);
      hf.K_max = std::max(hf.K_max, Kd);
      x0.push_back(l2_distance(p.u, p.v, -R, R));
      xT.push_back(last);
      if (!(max_front_speed(sv) < s && max_front_speed(su) < s))
        throw InvariantError("information speed " + std::to_string(s) + " below a front speed");
    }
    hf.slope = loglog_slope(x0, xT);
    out.families.push_back(hf);
    out.K = std::max(out.K, hf.K_max);
  }
  for (const HolderRow &r : out.rows) out.holds = out.holds && r.lhs <= out.K * std::sqrt(r.initial) * (1 + 1e-12);
  return out;
}

ContractionResult contraction_audit(Flavor flavor, int pairs, double nu, std::uint64_t seed, const UpsilonParams &p) {
  const Model m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ContractionResult r;
  r.flavor = flavor;
  r.pairs = pairs;
  r.tolerance = 10.0 * nu;
  for (int k = 0; k < pairs; ++k) {
    const Profile u = random_profile(m, rng, 8, 0.05);
    // same far fields: move the breakpoints and perturb some interior states
    Profile v = u;
    for (double &x : v.x) x += 0.05 * (2.0 * U(rng) - 1.0);
    std::sort(v.x.begin(), v.x.end());
    for (std::size_t j = 1; j + 1 < v.u.size(); ++j)
      if (U(rng) < 0.3) v.u[j] = State{v.u[j].a * (1.0 + 0.01 * (2.0 * U(rng) - 1.0)), v.u[j].b + 0.01 * (2.0 * U(rng) - 1.0)};
    const FrontTrackingSolution su = run_front_tracking(m, nu, u, 1.0), sv = run_front_tracking(m, nu, v, 1.0);
    const double d0 = dnu_upper(m, nu, su.sample(0.0), sv.sample(0.0), flavor, p).value;
    double worst = 0.0;
    for (double t : {0.25, 0.5, 0.75, 1.0}) worst = std::max(worst, dnu_upper(m, nu, su.sample(t), sv.sample(t), flavor, p).value / d0);
    r.worst_ratio = std::max(r.worst_ratio, worst);
    if (worst > 1.0 + r.tolerance) ++r.violations;
  }
  return r;
}

GrowthResult growth_audit(Flavor flavor, int runs, double nu, std::uint64_t seed, const UpsilonParams &p) {
  const Model m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GrowthResult r;
  r.flavor = flavor;
  const std::vector<double> times{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  for (int k = 0; k < runs; ++k) {
    const Profile d = random_profile(m, rng, 6, 0.08);
    const FrontTrackingSolution v = run_front_tracking(m, nu, d, 1.0);
    ShiftOptions o;
    FrontTrackingSolution wild;
    const int policy = k % 3;
    const double offset = 0.2 * (2.0 * U(rng) - 1.0);
    Profile w = d;
    for (double &x : w.x) x += 0.02 * (2.0 * U(rng) - 1.0);
    std::sort(w.x.begin(), w.x.end());
    if (policy == 0) {
      o.policy = ShiftPolicy::Offset;
      o.offset = offset;
    } else if (policy == 1) {
      o.policy = ShiftPolicy::RH;
    } else {
      wild = run_front_tracking(m, nu, w, 1.0);
      o.policy = ShiftPolicy::Filippov;
      o.wild = &wild;
    }
    const ShiftedSolution psi = shifted_evolve(m, nu, d, 1.0, o);
    ++r.runs;
    for (const GrowthSample &g : shifted_growth(v, psi.sol, times, flavor, p)) {
      ++r.samples;
      r.worst_ratio = std::max(r.worst_ratio, g.measured / g.bound);
      r.max_K2 = std::max(r.max_K2, g.K2);
      if (g.measured > g.bound) {
        ++r.violations;
        if (r.failures.size() < 10)
          r.failures.push_back("run " + std::to_string(k) + " t=" + std::to_string(g.t) + " measured " +
                               std::to_string(g.measured) + " > bound " + std::to_string(g.bound));
      }
    }
  }
  return r;
}

GlimmAudit glimm_audit(int runs, double nu, std::uint64_t seed) {
  const Model m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  GlimmAudit a;
  a.runs = runs;
  a.min_fronts = ~std::size_t{0};
  GlimmParams gp;
  for (int run = 0; run < runs; ++run) {
    Profile p;
    p.u.push_back(iso_state(1.0, 0.0));
    const int n = 8;
    for (int k = 0; k < n; ++k) {
      p.x.push_back(-1.0 + 2.0 * k / n + 0.05 * U(rng));
      const State s = p.u.back();
      p.u.push_back(iso_state(s.a * std::exp(0.006 * U(rng)), s.b / s.a + 0.006 * U(rng)));
    }
    const FrontTrackingSolution sol = run_front_tracking(m, nu, p, 1.0, gp);
    for (const Event &e : sol.events) {
      if (e.kind != EventKind::Interaction) continue;
      ++a.events;
      a.worst_dU = std::max(a.worst_dU, e.dU_iso);
      if (e.dU_iso > 1e-12) ++a.increases;
      if (e.pairwise) {
        ++a.pairwise;
        const double margin = e.dU_iso + e.in_product;
        a.worst_pair_margin = std::max(a.worst_pair_margin, margin);
        if (margin > 1e-12) ++a.pairwise_violations;
      }
      if (e.head_on) {
        ++a.head_on;
        a.worst_head_on = std::max({a.worst_head_on, std::abs(e.in_sum[0] - e.out_sum[0]),
                                    std::abs(e.in_sum[1] - e.out_sum[1])});
      }
    }
    a.max_fronts = std::max(a.max_fronts, sol.max_fronts());
    a.min_fronts = std::min(a.min_fronts, sol.max_fronts());
  }
  return a;
}

WeightAudit weight_audit(int runs, std::uint64_t seed, const WeightParams &p, const GlimmParams &gp) {
  const Model m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  WeightAudit a;
  a.runs = runs;
  WeightParams q = p;
  q.strict = false;
  for (int run = 0; run < runs; ++run) {
    Profile d;
    d.u.push_back(iso_state(1.0, 0.0));
    double x = -0.5;
    for (int k = 0; k < 10; ++k) {
      x += 0.02 + 0.04 * U(rng);
      d.x.push_back(x);
      const State s = d.u.back();
      const int fam = U(rng) < 0.5 ? 1 : 2;
      const double r = U(rng);
      if (r < 0.3) d.u.push_back(shock_curve(m, fam, s, -(0.05 + 0.1 * U(rng))));
      else if (r < 0.7) d.u.push_back(shock_curve(m, fam, s, -0.04 * U(rng)));
      else d.u.push_back(rarefaction_curve(m, fam, s, 0.02 * U(rng)));
    }
    const FrontTrackingSolution sol = run_front_tracking(m, 1e-3, d, 1.0, gp);
    const WeightField w = weight_iso(sol, q);
    const WeightReport r = verify_weight(w, sol, q);
    a.total.shocks_checked += r.shocks_checked;
    a.total.bracket_failures += r.bracket_failures;
    a.total.events_checked += r.events_checked;
    a.total.decay_failures += r.decay_failures;
    a.total.drops += r.drops;
    a.total.max_a = std::max(a.total.max_a, r.max_a);
    a.total.min_a = run == 0 ? r.min_a : std::min(a.total.min_a, r.min_a);
    if (!r.within_envelope) ++a.envelope_failures;
    for (const std::string &f : r.failures)
      if (a.total.failures.size() < 20) a.total.failures.push_back(f);
    for (const WeightEvent &e : w.events) a.worst_growth = std::max(a.worst_growth, e.worst);
  }
  a.max_log_a = std::log(a.total.max_a);
  return a;
}

IdentityAudit identity_audit(const Model &m, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  IdentityAudit a;
  a.model = m.name();
  a.samples = samples;
  for (int k = 0; k < samples; ++k) {
    State u, v;
    int fam = 1;
    if (m.kind == ModelKind::Burgers) {
      u = {4.0 * U(rng) - 2.0, 0.0};
      v = {4.0 * U(rng) - 2.0, 0.0};
    } else {
      u = iso_state(0.5 + 1.5 * U(rng), 2.0 * U(rng) - 1.0);
      v = iso_state(0.5 + 1.5 * U(rng), 2.0 * U(rng) - 1.0);
      fam = U(rng) < 0.5 ? 1 : 2;
    }
    const double s = 1e-3 + U(rng);
    a.worst = std::max(a.worst, quantified_identity_residual(m, v, u, fam, s));
  }
  return a;
}

OvertakeAudit overtake_audit(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // (1, 10]: 1 + 9 (1 - U) with U in [0, 1)
  std::uniform_real_distribution<double> U(0.0, 1.0);
  OvertakeAudit a;
  a.samples = samples;
  for (int k = 0; k < samples; ++k) {
    const double b = 1.0 + 9.0 * (1.0 - U(rng)), bb = 1.0 + 9.0 * (1.0 - U(rng));
    const OvertakeRoot r = overtake_root(b, bb);
    a.worst_residual = std::max(a.worst_residual, r.residual);
    a.min_gap = std::min(a.min_gap, r.B - std::max(b, bb));
    a.min_F = std::min(a.min_F, r.F);
    if (!(r.B > std::max(b, bb) && r.F > 1.0 && r.residual < 1e-10)) ++a.failures;
  }
  return a;
}

SeparationAudit separation_audit(int samples, std::uint64_t seed) {
  const Model m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SeparationAudit a;
  a.samples = samples;
  for (int k = 0; k < samples; ++k) {
    const State l = iso_state(0.2 + 4.8 * U(rng), 2.0 * U(rng) - 1.0);
    const State r = iso_state(0.2 + 4.8 * U(rng), 2.0 * U(rng) - 1.0);
    const ExactRiemann e = solve_riemann_exact(m, l, r);
    const double rm = e.vm.a, vm = e.vm.b / e.vm.a;
    // closed forms in terms of the middle state
    const double xi1 = e.w1.sigma < 0.0 ? vm - std::sqrt(l.a / rm) : vm - 1.0;
    const double xi2 = e.w2.sigma < 0.0 ? vm + std::sqrt(r.a / rm) : vm + 1.0;
    a.worst_closed_form = std::max({a.worst_closed_form, std::abs(xi1 - e.w1.speed_hi), std::abs(xi2 - e.w2.speed_lo)});
    const double gap = e.w2.speed_lo - e.w1.speed_hi;
    a.min_gap = std::min(a.min_gap, gap);
    if (!(gap > 0.0)) ++a.order_failures;
  }
  return a;
}

bool NuConvergence::ok(double min_factor) const {
  if (factors.empty()) return false;
  for (double f : factors)
    if (!(f >= min_factor)) return false;
  return true;
}

NuConvergence nu_convergence(const std::vector<double> &nus) {
  const Model m;
  const State a = iso_state(1.0, 0.0), b = rarefaction_curve(m, 1, a, 0.15), c = shock_curve(m, 2, b, -0.3),
              e = shock_curve(m, 1, c, -0.3);
  const Profile d{{-0.5, 0.0, 0.4}, {a, b, c, e}};
  NuConvergence out;
  for (double nu : nus) {
    const FrontTrackingSolution x = run_front_tracking(m, nu, d, 1.0), y = run_front_tracking(m, nu / 2.0, d, 1.0);
    out.nus.push_back(nu);
    out.distances.push_back(l1_distance(x.sample(1.0), y.sample(1.0), -3.0, 3.0));
  }
  for (std::size_t k = 1; k < out.distances.size(); ++k) out.factors.push_back(out.distances[k - 1] / out.distances[k]);
  return out;
}

MonotonicityAudit monotonicity_audit(Flavor flavor, int paths, double nu, std::uint64_t seed, const UpsilonParams &p) {
  const Model m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  MonotonicityAudit a;
  a.paths = paths;
  const double dtheta = 1e-7;
  for (int k = 0; k < paths; ++k) {
    const Profile u = random_profile(m, rng, 6, 0.05);
    Profile v = u;
    for (double &x : v.x) x += dtheta * (2.0 * U(rng) - 1.0);
    const FrontTrackingSolution su = run_front_tracking(m, nu, u, 1.0), sv = run_front_tracking(m, nu, v, 1.0);
    bool have = false;
    double prev = 0.0;
    for (int j = 0; j <= 20; ++j) {
      const double t = 0.05 * j;
      const auto val = elementary_upsilon(su.fronts_at(t), sv.fronts_at(t), dtheta, t, flavor, p);
      if (!val) {
        have = false;
        continue;
      }
      if (have) {
        ++a.comparisons;
        const double rel = (val->value - prev) / std::max(prev, 1e-300);
        a.worst_rel_increase = std::max(a.worst_rel_increase, rel);
        if (rel > 1e-6) ++a.increases;
      }
      prev = val->value;
      have = true;
    }
  }
  return a;
}

}  // namespace ftl
