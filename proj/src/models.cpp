#include "ftl/models.hpp"

#include <cmath>
#include <sstream>

namespace ftl {

namespace {

constexpr double kTempleShift = 3.0;  // lambda_1 = a - 3, lambda_2 = b + 3
constexpr double kTempleBox = 3.0;

void require_family(const Model &m, int family) {
  if (family < 1 || family > m.families())
    throw DomainError("family " + std::to_string(family) + " not defined for " + m.name());
}

std::string fmt_state(const State &s) {
  std::ostringstream os;
  os << "(" << s.a << ", " << s.b << ")";
  return os.str();
}

// Velocity behind a shock of the given family with density ratio b = rho_r/rho_l.
// Eliminating the speed from the two jump relations leaves
//   G(v) = [rho v]^2 - [rho][rho v^2 + rho] = 0,
// a parabola in v_r with roots v_l -+ (b-1)/sqrt(b).  The branch continuous
// through b = 1 with the right Lax side is taken; one Newton step on G
// removes the rounding of the closed form.
double hugoniot_velocity(int family, double rho_l, double v_l, double rho_r) {
  const double b = rho_r / rho_l;
  const double jump = (rho_r - rho_l) / std::sqrt(rho_l * rho_r);
  double v = family == 1 ? v_l - jump : v_l + jump;
  const double dr = rho_r - rho_l;
  const double jm = rho_r * v - rho_l * v_l;
  const double g = jm * jm - dr * (rho_r * v * v + rho_r - rho_l * v_l * v_l - rho_l);
  const double dg = 2.0 * rho_r * jm - 2.0 * dr * rho_r * v;
  // only polish away from the double root at b = 1
  if (std::abs(b - 1.0) > 1e-4 && dg != 0.0) {
    const double nv = v - g / dg;
    if (std::abs(nv - v) <= 1e-12 * (1.0 + std::abs(v))) v = nv;
  }
  return v;
}

}  // namespace

std::string Model::name() const {
  switch (kind) {
    case ModelKind::Isothermal: return "isothermal";
    case ModelKind::Burgers: return "burgers";
    case ModelKind::Temple: return "temple";
  }
  return "?";
}

Model Model::parse(const std::string &name) {
  Model m;
  if (name == "isothermal") m.kind = ModelKind::Isothermal;
  else if (name == "burgers") m.kind = ModelKind::Burgers;
  else if (name == "temple" || name == "temple-toy") m.kind = ModelKind::Temple;
  else throw DomainError("unknown model '" + name + "'");
  return m;
}

State iso_state(double rho, double vel) { return {rho, rho * vel}; }

double velocity(const Model &m, const State &s) {
  if (m.kind == ModelKind::Isothermal) return s.b / s.a;
  return s.a;
}

void check_state(const Model &m, const State &s) {
  if (!std::isfinite(s.a) || !std::isfinite(s.b))
    throw DomainError("non-finite state " + fmt_state(s));
  switch (m.kind) {
    case ModelKind::Isothermal:
      if (s.a < m.rho_min) throw DomainError("density below rho_min in " + fmt_state(s));
      break;
    case ModelKind::Burgers: break;
    case ModelKind::Temple:
      if (std::abs(s.a) >= kTempleBox || std::abs(s.b) >= kTempleBox)
        throw DomainError("temple state outside |a|,|b| < 3: " + fmt_state(s));
      break;
  }
}

std::array<double, 2> flux(const Model &m, const State &s) {
  check_state(m, s);
  switch (m.kind) {
    case ModelKind::Isothermal: return {s.b, s.b * s.b / s.a + s.a};
    case ModelKind::Burgers: return {0.5 * s.a * s.a, 0.0};
    case ModelKind::Temple:
      return {0.5 * s.a * s.a - kTempleShift * s.a, 0.5 * s.b * s.b + kTempleShift * s.b};
  }
  return {};
}

std::array<double, 2> eigenvalues(const Model &m, const State &s) {
  check_state(m, s);
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double v = s.b / s.a;
      return {v - 1.0, v + 1.0};
    }
    case ModelKind::Burgers: return {s.a, s.a};
    case ModelKind::Temple: return {s.a - kTempleShift, s.b + kTempleShift};
  }
  return {};
}

double lambda(const Model &m, int family, const State &s) {
  require_family(m, family);
  return eigenvalues(m, s)[family - 1];
}

Riem to_riemann(const Model &m, const State &s) {
  check_state(m, s);
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double v = s.b / s.a, l = std::log(s.a);
      return {v - l, v + l};
    }
    case ModelKind::Burgers: return {s.a, 0.0};
    case ModelKind::Temple: return {s.a, s.b};
  }
  return {};
}

State from_riemann(const Model &m, const Riem &w) {
  State s;
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double rho = std::exp(0.5 * (w.w2 - w.w1));
      s = iso_state(rho, 0.5 * (w.w1 + w.w2));
      break;
    }
    case ModelKind::Burgers: s = {w.w1, 0.0}; break;
    case ModelKind::Temple: s = {w.w1, w.w2}; break;
  }
  check_state(m, s);
  return s;
}

double entropy(const Model &m, const State &s) {
  switch (m.kind) {
    case ModelKind::Isothermal:
      if (s.a == 0.0 && s.b == 0.0) return 0.0;  // continuous extension at vacuum
      check_state(m, s);
      return 0.5 * s.b * s.b / s.a + s.a * std::log(s.a);
    case ModelKind::Burgers: return 0.5 * s.a * s.a;
    case ModelKind::Temple: return 0.5 * (s.a * s.a + s.b * s.b);
  }
  return 0.0;
}

double entropy_flux(const Model &m, const State &s) {
  switch (m.kind) {
    case ModelKind::Isothermal: {
      if (s.a == 0.0 && s.b == 0.0) return 0.0;
      check_state(m, s);
      const double v = s.b / s.a;
      return 0.5 * s.a * v * v * v + s.a * v * std::log(s.a) + s.a * v;
    }
    case ModelKind::Burgers: return s.a * s.a * s.a / 3.0;
    case ModelKind::Temple:
      return s.a * s.a * s.a / 3.0 - 0.5 * kTempleShift * s.a * s.a + s.b * s.b * s.b / 3.0 +
             0.5 * kTempleShift * s.b * s.b;
  }
  return 0.0;
}

std::array<double, 2> entropy_grad(const Model &m, const State &s) {
  check_state(m, s);
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double v = s.b / s.a;
      return {-0.5 * v * v + std::log(s.a) + 1.0, v};
    }
    case ModelKind::Burgers: return {s.a, 0.0};
    case ModelKind::Temple: return {s.a, s.b};
  }
  return {};
}

std::array<double, 4> entropy_hessian(const Model &m, const State &s) {
  check_state(m, s);
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double v = s.b / s.a, r = s.a;
      return {(v * v + 1.0) / r, -v / r, -v / r, 1.0 / r};
    }
    case ModelKind::Burgers: return {1.0, 0.0, 0.0, 0.0};
    case ModelKind::Temple: return {1.0, 0.0, 0.0, 1.0};
  }
  return {};
}

double rel_entropy(const Model &m, const State &a, const State &b) {
  const auto g = entropy_grad(m, b);
  return entropy(m, a) - entropy(m, b) - g[0] * (a.a - b.a) - g[1] * (a.b - b.b);
}

double rel_entropy_flux(const Model &m, const State &a, const State &b) {
  const auto g = entropy_grad(m, b);
  std::array<double, 2> fa{0.0, 0.0};
  if (!(m.kind == ModelKind::Isothermal && a.a == 0.0 && a.b == 0.0)) fa = flux(m, a);
  const auto fb = flux(m, b);
  return entropy_flux(m, a) - entropy_flux(m, b) - g[0] * (fa[0] - fb[0]) - g[1] * (fa[1] - fb[1]);
}

std::array<double, 2> right_eigvec(const Model &m, int family, const State &s) {
  require_family(m, family);
  check_state(m, s);
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double v = s.b / s.a, r = s.a;
      if (family == 1) return {-0.5 * r, 0.5 * r * (1.0 - v)};
      return {0.5 * r, 0.5 * r * (1.0 + v)};
    }
    case ModelKind::Burgers: return {1.0, 0.0};
    case ModelKind::Temple: return family == 1 ? std::array<double, 2>{1.0, 0.0}
                                               : std::array<double, 2>{0.0, 1.0};
  }
  return {};
}

std::array<double, 2> left_eigvec(const Model &m, int family, const State &s) {
  const auto r = right_eigvec(m, family, s);
  std::array<double, 2> l{};
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double v = s.b / s.a;
      l = family == 1 ? std::array<double, 2>{-(v + 1.0), 1.0} : std::array<double, 2>{1.0 - v, 1.0};
      break;
    }
    case ModelKind::Burgers: l = {1.0, 0.0}; break;
    case ModelKind::Temple: l = family == 1 ? std::array<double, 2>{1.0, 0.0}
                                            : std::array<double, 2>{0.0, 1.0};
  }
  const double n = l[0] * r[0] + l[1] * r[1];
  return {l[0] / n, l[1] / n};
}

double shock_phi(const Model &m, double sigma) {
  if (sigma >= 0.0) throw DomainError("shock strength must be negative");
  if (m.kind != ModelKind::Isothermal) return 0.0;
  // Base-independent: evaluate at rho = 1, v = 0.  Family 1 raises log rho by
  // -sigma/2; phi is the change of w2.
  const double rho_r = std::exp(-0.5 * sigma);
  const double v_r = hugoniot_velocity(1, 1.0, 0.0, rho_r);
  return v_r + std::log(rho_r);
}

Riem rarefaction_riem(const Model &m, int family, const Riem &base, double sigma) {
  require_family(m, family);
  Riem w = base;
  if (family == 1) w.w1 += sigma;
  else w.w2 += sigma;
  return w;
}

Riem shock_riem(const Model &m, int family, const Riem &base, double sigma) {
  require_family(m, family);
  const double p = shock_phi(m, sigma);
  Riem w = base;
  if (family == 1) {
    w.w1 += sigma + p;
    w.w2 += p;
  } else {
    w.w1 += p;
    w.w2 += sigma + p;
  }
  return w;
}

State rarefaction_curve(const Model &m, int family, const State &base, double sigma) {
  if (sigma < 0.0) throw DomainError("rarefaction strength must be non-negative");
  if (sigma == 0.0) {
    check_state(m, base);
    return base;
  }
  return from_riemann(m, rarefaction_riem(m, family, to_riemann(m, base), sigma));
}

State shock_curve(const Model &m, int family, const State &base, double sigma) {
  require_family(m, family);
  if (sigma >= 0.0) throw DomainError("shock strength must be negative");
  check_state(m, base);
  if (m.kind != ModelKind::Isothermal)
    return from_riemann(m, shock_riem(m, family, to_riemann(m, base), sigma));
  const double rho_l = base.a, v_l = base.b / base.a;
  const double rho_r = rho_l * std::exp(family == 1 ? -0.5 * sigma : 0.5 * sigma);
  const State s = iso_state(rho_r, hugoniot_velocity(family, rho_l, v_l, rho_r));
  check_state(m, s);
  return s;
}

double wave_strength(const Model &m, int family, const State &l, const State &r) {
  require_family(m, family);
  switch (m.kind) {
    case ModelKind::Isothermal: {
      const double lr = std::log(r.a / l.a);
      return family == 1 ? -2.0 * lr : 2.0 * lr;
    }
    case ModelKind::Burgers: return r.a - l.a;
    case ModelKind::Temple: return family == 1 ? r.a - l.a : r.b - l.b;
  }
  return 0.0;
}

double rh_speed_unchecked(const Model &m, const State &l, const State &r) {
  switch (m.kind) {
    case ModelKind::Isothermal: return (r.b - l.b) / (r.a - l.a);
    case ModelKind::Burgers: return 0.5 * (l.a + r.a);
    case ModelKind::Temple:
      if (std::abs(r.a - l.a) >= std::abs(r.b - l.b)) return 0.5 * (l.a + r.a) - kTempleShift;
      return 0.5 * (l.b + r.b) + kTempleShift;
  }
  return 0.0;
}

double rh_residual(const Model &m, const State &l, const State &r) {
  const double xi = rh_speed_unchecked(m, l, r);
  const auto fl = flux(m, l), fr = flux(m, r);
  const double r0 = std::abs(xi * (r.a - l.a) - (fr[0] - fl[0]));
  const double r1 = std::abs(xi * (r.b - l.b) - (fr[1] - fl[1]));
  const double scale = 1.0 + std::abs(fr[0]) + std::abs(fr[1]) + std::abs(fl[0]) + std::abs(fl[1]);
  return std::max(r0, r1) / scale;
}

double rh_shock_speed(const Model &m, const State &l, const State &r) {
  if (l == r) throw DomainError("Rankine-Hugoniot speed of identical states");
  check_state(m, l);
  check_state(m, r);
  const double res = rh_residual(m, l, r);
  if (res > 1e-10)
    throw ConsistencyError("states " + fmt_state(l) + " and " + fmt_state(r) +
                           " are not on a Hugoniot locus (residual " + std::to_string(res) + ")");
  return rh_speed_unchecked(m, l, r);
}

double shock_speed_along(const Model &m, int family, const State &u, double s) {
  if (s <= 1e-14) return lambda(m, family, u);
  return rh_speed_unchecked(m, u, shock_curve(m, family, u, -s));
}

double shock_speed_rate(const Model &m, int family, const State &u, double s) {
  const double h = 1e-3 * std::max(1.0, s) * 0.25;
  auto f = [&](double t) { return shock_speed_along(m, family, u, t); };
  if (s >= 2.0 * h)
    return (f(s - 2 * h) - 8.0 * f(s - h) + 8.0 * f(s + h) - f(s + 2 * h)) / (12.0 * h);
  return (-25.0 * f(s) + 48.0 * f(s + h) - 36.0 * f(s + 2 * h) + 16.0 * f(s + 3 * h) -
          3.0 * f(s + 4 * h)) /
         (12.0 * h);
}

double state_distance(const State &x, const State &y) { return std::hypot(x.a - y.a, x.b - y.b); }

}  // namespace ftl
