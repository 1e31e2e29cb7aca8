// ftlab: front-tracking experiments from the command line.
//
// Exit status: 0 success, 1 runtime failure, 2 malformed configuration,
// 3 invariant violation (the message names the criterion).
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ftl/harness.hpp"

using namespace ftl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out = "runs";
  std::optional<double> nu, T;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("--config", c.config, "run configuration (JSON)");
  cmd->add_option("--out", c.out, "base directory for run output");
  cmd->add_option("--nu", c.nu, "override nu");
  cmd->add_option("--T", c.T, "override the final time");
  cmd->add_option("--seed", c.seed, "override the seed");
}

RunConfig resolve(const Common &c) {
  RunConfig cfg = c.config.empty() ? config_from_json(json::object()) : load_config(c.config);
  json j = config_to_json(cfg);
  if (c.nu) j["nu"] = *c.nu;
  if (c.T) j["T"] = *c.T;
  if (c.seed) j["seed"] = *c.seed;
  return config_from_json(j);  // re-validate after overrides
}

void violation(int criterion, const std::string &what) {
  throw InvariantError("criterion " + std::to_string(criterion) + ": " + what);
}

fs::path finish(const fs::path &dir, const json &report) {
  write_file(dir / "report.json", report.dump(2) + "\n");
  std::cout << dir.string() << "\n";
  return dir;
}

int cmd_simulate(const Common &c) {
  const RunConfig cfg = resolve(c);
  const Model m = config_model(cfg);
  const Profile data = config_data(cfg);
  EvolveOptions eo;
  eo.max_events = cfg.max_events;
  const FrontTrackingSolution sol = run_front_tracking(m, cfg.nu, data, cfg.T, cfg.glimm, eo);
  const fs::path dir = make_run_dir(c.out, config_to_json(cfg));
  write_file(dir / "events.jsonl", sol.events_jsonl(cfg.flavor));
  write_file(dir / "profiles.csv", profiles_csv(sol, cfg.times));
  if (m.kind == ModelKind::Isothermal) {
    const WeightField a = cfg.flavor == Flavor::Isothermal ? weight_iso(sol, cfg.weight)
                                                           : weight_smallbv_field(sol, cfg.weight.C1);
    write_file(dir / "weight.csv", a.csv());
  }
  long increases = 0;
  for (const Event &e : sol.events)
    if (e.kind == EventKind::Interaction && (cfg.flavor == Flavor::Isothermal ? e.dU_iso : e.dU) > 1e-12) ++increases;
  const double vmax = max_front_speed(sol);
  json rep{{"command", "simulate"},
           {"events", sol.events.size()},
           {"max_fronts", sol.max_fronts()},
           {"max_front_speed", vmax},
           {"total_variation0", total_variation(data)},
           {"checks", json::array({{{"criterion", 2}, {"functional_increases", increases}}})}};
  if (cfg.policy != ShiftPolicy::RH) {
    ShiftOptions o;
    o.policy = cfg.policy;
    o.offset = cfg.offset;
    o.params = cfg.shift;
    o.evolve = eo;
    FrontTrackingSolution wild;
    if (cfg.policy == ShiftPolicy::Filippov) {
      wild = sol;
      o.wild = &wild;
    }
    const ShiftedSolution psi = shifted_evolve(m, cfg.nu, data, cfg.T, o, cfg.glimm);
    write_file(dir / "shifts.csv", psi.paths_csv());
    rep["shift_cost"] = shift_cost(psi, cfg.T);
  }
  finish(dir, rep);
  if (cfg.info_speed > 0.0 && vmax >= cfg.info_speed)
    throw InvariantError("information speed " + std::to_string(cfg.info_speed) + " does not exceed front speed " +
                         std::to_string(vmax));
  if (increases > 0) violation(2, std::to_string(increases) + " events increased the Glimm functional");
  return 0;
}

int cmd_distance(const Common &c, int pairs) {
  const RunConfig cfg = resolve(c);
  const Model m = config_model(cfg);
  const Profile data = config_data(cfg);
  const FrontTrackingSolution v = run_front_tracking(m, cfg.nu, data, cfg.T, cfg.glimm);
  ShiftOptions o;
  o.policy = cfg.policy;
  o.offset = cfg.offset;
  o.params = cfg.shift;
  FrontTrackingSolution wild;
  if (cfg.policy == ShiftPolicy::Filippov) {
    std::mt19937_64 rng(cfg.seed + 1);
    std::uniform_real_distribution<double> U(-0.02, 0.02);
    Profile w = data;
    for (double &x : w.x) x += U(rng);
    std::sort(w.x.begin(), w.x.end());
    wild = run_front_tracking(m, cfg.nu, w, cfg.T, cfg.glimm);
    o.wild = &wild;
  }
  const ShiftedSolution psi = shifted_evolve(m, cfg.nu, data, cfg.T, o, cfg.glimm);
  const std::vector<GrowthSample> rows = shifted_growth(v, psi.sol, cfg.times, cfg.flavor, cfg.upsilon);
  const ContractionResult con = contraction_audit(cfg.flavor, pairs, cfg.nu, cfg.seed, cfg.upsilon);
  const fs::path dir = make_run_dir(c.out, config_to_json(cfg));
  write_file(dir / "distance.csv", growth_csv(rows));
  long over = 0;
  for (const GrowthSample &g : rows) over += g.measured > g.bound;
  finish(dir, json{{"command", "distance"},
                   {"checks", json::array({{{"criterion", 4},
                                            {"pairs", con.pairs},
                                            {"worst_ratio", con.worst_ratio},
                                            {"violations", con.violations}},
                                           {{"criterion", 5}, {"samples", rows.size()}, {"violations", over}}})}});
  if (con.violations > 0) violation(4, std::to_string(con.violations) + " pairs expanded");
  if (over > 0) violation(5, std::to_string(over) + " samples above the shift-cost bound");
  return 0;
}

int cmd_diss_scan(const Common &c, double C, double s0, int grid) {
  const RunConfig cfg = resolve(c);
  const ScanReport r = negativity_scan(config_model(cfg), s0, C, cfg.shift.K_ball, grid, 24, true);
  const fs::path dir = make_run_dir(c.out, json{{"command", "diss-scan"}, {"C", C}, {"s0", s0}, {"grid", grid},
                                                  {"model", cfg.model}, {"K_ball", cfg.shift.K_ball}});
  std::ostringstream os;
  os.precision(17);
  os << "# diss-scan v1\nu1,u2,s,D_value,bound_rhs,margin\n";
  for (const ScanRow &row : r.rows)
    os << row.u1 << ',' << row.u2 << ',' << row.s << ',' << row.D << ',' << row.bound_rhs << ',' << row.margin << '\n';
  write_file(dir / "scan.csv", os.str());
  finish(dir, json{{"command", "diss-scan"},
                   {"checks", json::array({{{"criterion", 8},
                                            {"worst_cont", r.worst_cont},
                                            {"worst_rh", r.worst_rh},
                                            {"K_cont", r.K_cont},
                                            {"K_rh", r.K_rh},
                                            {"t_bar", r.t_bar},
                                            {"samples", r.n_cont + r.n_rh}}})}});
  if (!r.all_negative()) violation(8, "a sampled dissipation value is not negative");
  return 0;
}

int cmd_stability(const Common &c) {
  const RunConfig cfg = resolve(c);
  const double s = cfg.info_speed > 0.0 ? cfg.info_speed : 3.0;
  const HolderResult h = holder_stability({1e-1, 1e-2, 1e-3, 1e-4}, cfg.nu, cfg.R, s);
  const NuConvergence n = nu_convergence({4.0 * cfg.nu, 2.0 * cfg.nu, cfg.nu});
  const fs::path dir = make_run_dir(c.out, config_to_json(cfg));
  std::ostringstream os;
  os.precision(17);
  os << "# stability v1\nfamily,delta,tau,lhs,initial,ratio\n";
  for (const HolderRow &r : h.rows)
    os << r.family << ',' << r.delta << ',' << r.tau << ',' << r.lhs << ',' << r.initial << ',' << r.ratio << '\n';
  write_file(dir / "stability.csv", os.str());
  json fam = json::array();
  for (const HolderFamily &f : h.families)
    fam.push_back({{"name", f.name}, {"slope", f.slope}, {"K_min", f.K_min}, {"K_max", f.K_max}});
  finish(dir, json{{"command", "stability"},
                   {"checks", json::array({{{"criterion", 11}, {"K", h.K}, {"holds", h.holds}, {"families", fam}},
                                           {{"criterion", 12}, {"distances", n.distances}, {"factors", n.factors}}})}});
  if (!(h.holds && h.min_slope() >= 0.45)) violation(11, "slope below 0.45");
  if (!n.ok()) violation(12, "nu-halving factor below 1.5");
  return 0;
}

int cmd_sharpness(const Common &c, double eps) {
  const SharpnessResult r = sharpness_burgers(eps);
  const fs::path dir = make_run_dir(c.out, json{{"command", "sharpness"}, {"eps", eps}});
  finish(dir, json{{"command", "sharpness"},
                   {"checks", json::array({{{"criterion", 1},
                                            {"eps", eps},
                                            {"nu", r.nu},
                                            {"initial_l2", r.initial},
                                            {"final_l2", r.final},
                                            {"final_lower_bound", r.lower_bound}}})}});
  if (!r.ok()) violation(1, "sharpness distances out of range");
  return 0;
}

int cmd_interactions(const Common &c, int samples) {
  const RunConfig cfg = resolve(c);
  const OvertakeAudit o = overtake_audit(samples, cfg.seed);
  const SeparationAudit s = separation_audit(samples, cfg.seed + 1);
  const fs::path dir = make_run_dir(c.out, json{{"command", "interactions"}, {"samples", samples}, {"seed", cfg.seed}});
  finish(dir, json{{"command", "interactions"},
                   {"checks", json::array({{{"criterion", 9},
                                            {"failures", o.failures},
                                            {"min_gap", o.min_gap},
                                            {"min_F", o.min_F},
                                            {"max_residual", o.worst_residual}},
                                           {{"criterion", 10},
                                            {"order_failures", s.order_failures},
                                            {"min_gap", s.min_gap},
                                            {"closed_form_error", s.worst_closed_form}}})}});
  if (o.failures > 0) violation(9, std::to_string(o.failures) + " overtaking roots out of range");
  if (s.order_failures > 0 || s.worst_closed_form > 1e-10) violation(10, "wave speeds not separated");
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"front-tracking laboratory"};
  app.require_subcommand(1);
  Common common;

  auto *sim = app.add_subcommand("simulate", "run front tracking and write events and profiles");
  add_common(sim, common);
  int pairs = 10;
  auto *dist = app.add_subcommand("distance", "shifted-growth rows and a contraction audit");
  add_common(dist, common);
  dist->add_option("--pairs", pairs, "random pairs for the contraction audit");
  double C = 40.0, s0 = 0.02;
  int grid = 50;
  auto *diss = app.add_subcommand("diss-scan", "dissipation negativity scan; exit 0 iff all negative");
  add_common(diss, common);
  diss->add_option("--C", C, "weight slope");
  diss->add_option("--s0", s0, "shock strength");
  diss->add_option("--grid", grid, "grid points per side");
  auto *stab = app.add_subcommand("stability", "Holder stability and nu-convergence runs");
  add_common(stab, common);
  double eps = 0.01;
  auto *sharp = app.add_subcommand("sharpness", "Burgers shock perturbed by eps");
  add_common(sharp, common);
  sharp->add_option("--eps", eps, "perturbation size")->check(CLI::Range(1e-12, 0.1));
  int samples = 1000;
  auto *inter = app.add_subcommand("interactions", "overtaking-root and wave-separation scans");
  add_common(inter, common);
  inter->add_option("--samples", samples, "random samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*sim) return cmd_simulate(common);
    if (*dist) return cmd_distance(common, pairs);
    if (*diss) return cmd_diss_scan(common, C, s0, grid);
    if (*stab) return cmd_stability(common);
    if (*sharp) return cmd_sharpness(common, eps);
    if (*inter) return cmd_interactions(common, samples);
  } catch (const DomainError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError &e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
