#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>

#include "ftl/harness.hpp"

using namespace ftl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
  const fs::path d = fs::temp_directory_path() / ("ftlab-test-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("config round trip") {
  const RunConfig def = config_from_json(json::object());
  CHECK(def.model == "isothermal");
  CHECK(def.nu == 1e-3);
  const json j = config_to_json(def);
  CHECK(config_to_json(config_from_json(j)) == j);

  json k = j;
  k["model"] = "burgers";
  k["flavor"] = "small-bv";
  k["constants"]["C1"] = 2.0;
  k["constants"]["eps"] = 0.02;
  k["shift"]["policy"] = "offset";
  k["shift"]["offset"] = 0.1;
  k["data"] = {{"kind", "profile"}, {"x", {0.0}}, {"states", {{1.0, 0.0}, {-1.0, 0.0}}}};
  const RunConfig c = config_from_json(k);
  CHECK(c.weight.C1 == 2.0);
  CHECK(c.shift.C1 == 2.0);
  CHECK(c.policy == ShiftPolicy::Offset);
  CHECK(c.flavor == Flavor::SmallBV);
  CHECK(config_data(c).u.size() == 2);
  CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));

  const fs::path dir = scratch_dir("config");
  write_file(dir / "run.json", k.dump());
  CHECK(config_to_json(load_config(dir / "run.json")) == config_to_json(c));
}

TEST_CASE("config errors") {
  const json base = config_to_json(config_from_json(json::object()));
  auto with = [&](const std::string &key, const json &v) {
    json j = base;
    j[key] = v;
    return j;
  };
  CHECK_THROWS_AS(config_from_json(with("nu", -1.0)), DomainError);
  CHECK_THROWS_AS(config_from_json(with("nu", "small")), DomainError);
  CHECK_THROWS_AS(config_from_json(with("model", "euler")), DomainError);
  CHECK_THROWS_AS(config_from_json(with("times", {0.5, 2.0})), DomainError);
  CHECK_THROWS_AS(config_from_json(with("data", {{"kind", "noise"}})), DomainError);
  CHECK_THROWS_AS(config_from_json(with("data", {{"kind", "profile"}, {"x", {0.0, 1.0}}, {"states", {{1, 0}, {2, 0}}}})),
                  DomainError);
  CHECK_THROWS_AS(config_from_json(with("data", {{"kind", "profile"}, {"x", {1.0, 0.0}}, {"states", {{1, 0}, {2, 0}, {1, 0}}}})),
                  DomainError);
  json bad = base;
  bad["constants"]["a_star"] = 1.5;
  CHECK_THROWS_AS(config_from_json(bad), DomainError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.json"), DomainError);
}

TEST_CASE("oscillating data") {
  const State b1{1.0, 0.0}, b2{1.5, 0.2};
  const State w = oscillating_value(b1, b2, "log1p", 1.0 / (std::exp(1.0) - 1.0));
  CHECK(w.a == doctest::Approx(1.0 + 0.25 * (std::sin(1.0) + 1.0)).epsilon(1e-14));
  CHECK(w.b == doctest::Approx(0.1 * (std::sin(1.0) + 1.0)).epsilon(1e-14));
  CHECK(oscillating_value(b1, b2, "identity", 2.0 / M_PI).a == doctest::Approx(1.5).epsilon(1e-14));

  const Profile flat = infinite_bv_data(b1, b1, "identity", 1.0, 1.0 / 1024.0);
  for (const State &s : flat.u) CHECK(s == b1);
  CHECK(total_variation(flat) == 0.0);

  for (const std::string g : {"log1p", "identity"}) {
    double prev = -1.0;
    for (int k = 4; k <= 12; ++k) {
      const double tv = total_variation(infinite_bv_data(b1, b2, g, 1.0, std::ldexp(1.0, -k)));
      CHECK(tv > prev);
      prev = tv;
    }
  }
}

TEST_CASE("sharpness example") {
  std::vector<double> init, fin;
  for (double eps : {0.1, 0.01, 0.001}) {
    const SharpnessResult r = sharpness_burgers(eps);
    CHECK(std::abs(r.initial - std::sqrt(2.0) * eps) <= 1e-10);
    CHECK(r.final >= std::sqrt(eps / 2.0));
    CHECK(r.ok());
    init.push_back(r.initial);
    fin.push_back(r.final);
  }
  CHECK(loglog_slope(init, fin) == doctest::Approx(0.5).epsilon(0.04));
  CHECK(loglog_slope({1, 4, 16}, {1, 2, 4}) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("runs are deterministic and persist their config") {
  RunConfig c = config_from_json(json::object());
  c.seed = 7;
  const Model m = config_model(c);
  const auto a = run_front_tracking(m, c.nu, config_data(c), c.T, c.glimm);
  const auto b = run_front_tracking(m, c.nu, config_data(c), c.T, c.glimm);
  CHECK(profiles_csv(a, c.times) == profiles_csv(b, c.times));
  CHECK(a.events_jsonl(c.flavor) == b.events_jsonl(c.flavor));
  CHECK(profiles_csv(a, c.times).rfind("# profiles v1\nt,x_left,x_right,a,b\n", 0) == 0);
  c.seed = 8;
  CHECK(profiles_csv(run_front_tracking(m, c.nu, config_data(c), c.T, c.glimm), c.times) != profiles_csv(a, c.times));

  const json j = config_to_json(c);
  CHECK(config_hash(j) == config_hash(config_to_json(config_from_json(j))));
  const fs::path dir = make_run_dir(scratch_dir("rundir"), j);
  CHECK(dir.filename().string().ends_with(config_hash(j)));
  std::ifstream in(dir / "config.json");
  CHECK(json::parse(in) == j);

  // The information speed must exceed every front speed.
  const auto burg = run_front_tracking(Model::parse("burgers"), 1e-3, Profile{{0.0}, {{2, 0}, {0, 0}}}, 1.0);
  CHECK(max_front_speed(burg) == doctest::Approx(1.0));
  CHECK(max_front_speed(a) < 3.0);
}

TEST_CASE("audit drivers") {
  const OvertakeAudit o = overtake_audit(200, 3);
  CHECK(o.failures == 0);
  CHECK(o.min_gap > 0.0);
  CHECK(o.min_F > 1.0);
  CHECK(o.worst_residual < 1e-10);
  const SeparationAudit s = separation_audit(200, 4);
  CHECK(s.order_failures == 0);
  CHECK(s.worst_closed_form < 1e-10);
  CHECK(s.min_gap > 0.0);
  for (const Model &m : {Model{}, Model::parse("burgers")}) CHECK(identity_audit(m, 20, 5).worst < 1e-8);
  const GrowthResult g = growth_audit(Flavor::SmallBV, 2, 1e-3, 6);
  CHECK(g.runs == 2);
  CHECK(g.violations == 0);
}

#ifdef FTLAB_CLI
TEST_CASE("command line exit status") {
  const fs::path dir = scratch_dir("cli");
  const std::string cli = FTLAB_CLI, out = " --out " + dir.string() + " > /dev/null 2>&1";
  auto status = [](const std::string &cmd) {
    const int r = std::system(cmd.c_str());
    return WIFEXITED(r) ? WEXITSTATUS(r) : -1;
  };
  CHECK(status(cli + " sharpness --eps 0.01" + out) == 0);
  CHECK(status(cli + " diss-scan --C 40 --s0 0.02 --grid 10" + out) == 0);
  write_file(dir / "bad.json", R"({"nu": -1})");
  CHECK(status(cli + " simulate --config " + (dir / "bad.json").string() + out) == 2);
  CHECK(status(cli + " simulate --bogus" + out) == 2);
  CHECK(status(cli + out) == 2);
  int reports = 0;
  for (const auto &e : fs::directory_iterator(dir))
    if (fs::exists(e.path() / "report.json")) ++reports;
  CHECK(reports == 2);
}
#endif
