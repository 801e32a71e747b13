#include "wamls/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "wamls/errors.hpp"

namespace wamls {

namespace {

constexpr double kClampTolerance = 1e-12;
constexpr int kMaxGoldenIterations = 200;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Pulls a value that should lie in [0, 1] back into range, tolerating only
// rounding-level excursions.
double clamp_unit(double x, const char* what) {
  if (x < -kClampTolerance || x > 1.0 + kClampTolerance || std::isnan(x)) {
    throw DomainError(std::string(what) + " = " + fmt(x) + " outside [0, 1]");
  }
  return std::clamp(x, 0.0, 1.0);
}

double line_at(double x0, double f0, double x1, double f1, double x) {
  if (x1 == x0) return std::min(f0, f1);
  return f0 + (f1 - f0) / (x1 - x0) * (x - x0);
}

// Lower bound on min f over [p0, p3] for convex f sampled at p0 <= p1 <= p2 <= p3.
double convex_lower_bound(const std::array<double, 4>& x, const std::array<double, 4>& f) {
  double lb = std::min({f[0], f[1], f[2], f[3]});
  // Outer pieces lie above the extension of the (p1, p2) secant.
  if (x[2] > x[1]) {
    lb = std::min(lb, line_at(x[1], f[1], x[2], f[2], x[0]));
    lb = std::min(lb, line_at(x[1], f[1], x[2], f[2], x[3]));
  }
  // Middle piece lies above both outer secants; the minimum of their upper
  // envelope over [p1, p2] is at an endpoint or at their crossing.
  if (x[1] > x[0] && x[3] > x[2]) {
    const double s1 = (f[1] - f[0]) / (x[1] - x[0]);
    const double s2 = (f[3] - f[2]) / (x[3] - x[2]);
    auto envelope = [&](double t) {
      return std::max(f[1] + s1 * (t - x[1]), f[2] + s2 * (t - x[2]));
    };
    double mid = std::min(envelope(x[1]), envelope(x[2]));
    if (s1 != s2) {
      const double cross = (f[2] - f[1] + s1 * x[1] - s2 * x[2]) / (s1 - s2);
      if (cross > x[1] && cross < x[2]) mid = std::min(mid, envelope(cross));
    }
    lb = std::min(lb, mid);
  }
  return lb;
}

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;  // best sampled value
  double bound = 0.0;  // certified bound on the optimum (other side of value)
};

// Minimizes a convex function on [lo, hi]. Stops when the convexity
// certificate is within tol of the best sample, or the bracket is exhausted.
template <typename F>
GoldenResult golden_minimize(F&& f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (b - a <= 0.0) {
    return {a, std::min(fa, fb), std::min(fa, fb)};
  }
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);

  GoldenResult best;
  auto record_best = [&] {
    const std::array<std::pair<double, double>, 4> pts{{{a, fa}, {x1, f1}, {x2, f2}, {b, fb}}};
    auto it = std::min_element(pts.begin(), pts.end(),
                               [](const auto& p, const auto& q) { return p.second < q.second; });
    best.x = it->first;
    best.value = it->second;
    best.bound = convex_lower_bound({a, x1, x2, b}, {fa, f1, f2, fb});
  };

  for (int it = 0; it < kMaxGoldenIterations; ++it) {
    record_best();
    if (best.value - best.bound <= tol) break;
    if (b - a <= 1e-15 * std::max(1.0, std::abs(b))) break;
    if (f1 <= f2) {
      b = x2;
      fb = f2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      fa = f1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  record_best();
  return best;
}

}  // namespace

void BoundParams::validate() const {
  for (double v : {alpha, c, beta, precision}) {
    if (!std::isfinite(v)) throw DomainError("bound parameters must be finite");
  }
  if (alpha < 1.0) throw DomainError("alpha must be >= 1, got " + fmt(alpha));
  if (c < 1.0) throw DomainError("c must be >= 1, got " + fmt(c));
  if (beta < 1.0) throw DomainError("beta must be >= 1, got " + fmt(beta));
  if (precision <= 0.0) throw DomainError("precision must be > 0");
}

double entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("entropy argument " + fmt(x) + " outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double brute_bound(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw DomainError("brute_bound needs alpha >= 1");
  return 1.0 + std::exp(-alpha * entropy(1.0 / alpha));
}

double m_lower(double alpha, double beta, double kappa) {
  if (alpha < beta) {
    const double denom = 1.0 - alpha * kappa;
    if (denom <= 0.0) throw DomainError("m_lower: singular denominator 1 - alpha*kappa");
    return (beta - alpha) / denom * kappa;
  }
  if (alpha == beta) return 0.0;
  return (alpha - beta) / (alpha - 1.0) * kappa;
}

double g_value(double alpha, double beta, double c, double kappa, double tau) {
  if (kappa < -kClampTolerance || kappa > 1.0 / beta + kClampTolerance) {
    throw DomainError("g_value: kappa " + fmt(kappa) + " outside [0, 1/beta]");
  }
  kappa = std::clamp(kappa, 0.0, 1.0 / beta);
  const double lo = m_lower(alpha, beta, kappa);
  const double hi = beta * kappa;
  if (tau < lo - kClampTolerance || tau > hi + kClampTolerance) {
    throw DomainError("g_value: tau " + fmt(tau) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  tau = std::clamp(tau, std::min(lo, hi), hi);

  double delta = tau == 1.0 ? 1.0 / alpha : (beta * kappa - tau) / alpha / (1.0 - tau);
  double gamma = tau == 0.0 ? 1.0 / alpha : (1.0 - beta / alpha) * kappa / tau + 1.0 / alpha;
  // Near the ends both ratios are 0/0 cancellations, but their entropy terms
  // carry the vanishing factors (1 - tau) and tau.
  if (1.0 - tau < 1e-9) delta = std::clamp(delta, 0.0, 1.0);
  if (tau < 1e-9) gamma = std::clamp(gamma, 0.0, 1.0);

  return (beta * kappa - tau) / alpha * std::log(c) - tau * entropy(clamp_unit(gamma, "gamma")) -
         (1.0 - tau) * entropy(clamp_unit(delta, "delta")) + entropy(kappa);
}

InnerMinimum g_star(double alpha, double beta, double c, double kappa, double precision) {
  double lo = m_lower(alpha, beta, kappa);
  const double hi = beta * kappa;
  if (lo > hi + kClampTolerance) {
    throw std::logic_error("g_star: empty tau interval at kappa " + fmt(kappa));
  }
  lo = std::min(lo, hi);
  auto f = [&](double tau) { return g_value(alpha, beta, c, kappa, tau); };
  const GoldenResult r = golden_minimize(f, lo, hi, precision);
  return {r.value, r.x, std::max(0.0, r.value - r.bound)};
}

SaddlePoint amls_bound(const BoundParams& params) {
  params.validate();
  const double alpha = params.alpha, beta = params.beta, c = params.c;

  // All errors are tracked on the exponent; the base is at most 2, so a
  // log-width of precision/2 keeps the half-width of the base bracket
  // below precision. Half of that budget goes to the outer search and the
  // inner gaps (which enter the outer bracket up to four times) share the rest.
  const double log_budget = params.precision / 2.0;
  const double inner_tol = log_budget / 8.0;
  const double outer_tol = log_budget / 2.0;

  double worst_inner_gap = 0.0;
  // Negated so the concave maximization becomes a convex minimization.
  auto neg_gstar = [&](double kappa) {
    const InnerMinimum m = g_star(alpha, beta, c, kappa, inner_tol);
    worst_inner_gap = std::max(worst_inner_gap, m.gap);
    return -m.value;
  };
  const GoldenResult outer = golden_minimize(neg_gstar, 0.0, 1.0 / beta, outer_tol);

  const double kappa_star = outer.x;
  const InnerMinimum at_star = g_star(alpha, beta, c, kappa_star, inner_tol);
  // Lower end: a sampled kappa certifies max >= g_star(kappa) >= value - gap.
  const double v_lo = std::max(0.0, at_star.value - at_star.gap);
  const double v_hi = std::max(v_lo, -outer.bound + 3.0 * worst_inner_gap);

  SaddlePoint sp;
  sp.kappa_star = kappa_star;
  sp.tau_star = at_star.tau_star;
  sp.value = std::exp(0.5 * (v_lo + v_hi));
  sp.err_bound = 0.5 * (std::exp(v_hi) - std::exp(v_lo));
  return sp;
}

std::vector<BoundRow> bound_table(std::span<const BoundParams> rows) {
  if (rows.empty()) throw DomainError("bound_table: no rows requested");
  std::vector<BoundRow> out;
  out.reserve(rows.size());
  for (const BoundParams& p : rows) {
    p.validate();
    out.push_back({p, brute_bound(p.beta), amls_bound(p)});
  }
  return out;
}

void write_bound_table(std::ostream& out, std::span<const BoundRow> rows, TableFormat format) {
  if (format == TableFormat::csv) {
    out << "alpha,c,beta,brute,amls,kappa_star,tau_star,err_bound\n";
    const auto old_precision = out.precision(6);
    for (const BoundRow& r : rows) {
      out << r.params.alpha << ',' << r.params.c << ',' << r.params.beta << ',' << r.brute << ','
          << r.amls.value << ',' << r.amls.kappa_star << ',' << r.amls.tau_star << ','
          << r.amls.err_bound << '\n';
    }
    out.precision(old_precision);
    return;
  }
  for (const BoundRow& r : rows) {
    nlohmann::ordered_json j;
    j["alpha"] = r.params.alpha;
    j["c"] = r.params.c;
    j["beta"] = r.params.beta;
    j["brute"] = r.brute;
    j["amls"] = r.amls.value;
    j["kappa_star"] = r.amls.kappa_star;
    j["tau_star"] = r.amls.tau_star;
    j["err_bound"] = r.amls.err_bound;
    out << j.dump() << '\n';
  }
}

ShapeReport shape_check(const BoundParams& params, int grid_resolution) {
  if (grid_resolution < 10) throw DomainError("shape_check: grid_resolution must be >= 10");
  params.validate();
  const double alpha = params.alpha, beta = params.beta, c = params.c;
  const int n = grid_resolution;

  ShapeReport report;
  std::vector<double> gstar_values;
  gstar_values.reserve(static_cast<std::size_t>(n));
  std::vector<double> row(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    const double kappa = (static_cast<double>(i) / (n - 1)) / beta;
    const double lo = std::min(m_lower(alpha, beta, kappa), beta * kappa);
    const double hi = beta * kappa;
    for (int j = 0; j < n; ++j) {
      row[static_cast<std::size_t>(j)] = g_value(alpha, beta, c, kappa, lo + (hi - lo) * j / (n - 1));
    }
    for (std::size_t j = 1; j + 1 < row.size(); ++j) {
      const double second = row[j - 1] - 2.0 * row[j] + row[j + 1];
      report.max_convexity_violation = std::max(report.max_convexity_violation, -second);
    }
    gstar_values.push_back(g_star(alpha, beta, c, kappa, 1e-13).value);
  }
  for (std::size_t i = 1; i + 1 < gstar_values.size(); ++i) {
    const double second = gstar_values[i - 1] - 2.0 * gstar_values[i] + gstar_values[i + 1];
    report.max_concavity_violation = std::max(report.max_concavity_violation, second);
  }
  report.pass = report.max_convexity_violation <= kShapeTolerance &&
                report.max_concavity_violation <= kShapeTolerance;
  return report;
}

const std::vector<TablePreset>& table_presets() {
  auto grid = [](double first, double step) {
    std::vector<double> betas;
    for (int i = 0; i < 9; ++i) betas.push_back(std::round((first + step * i) * 1e9) / 1e9);
    return betas;
  };
  // (alpha, c) pairs per problem: an exact parameterized extension algorithm
  // (alpha = 1) and a polynomial-time approximation (c = 1).
  static const std::vector<TablePreset> presets = {
      {"vc", {{1.0, 1.363}, {2.0, 1.0}}, grid(1.1, 0.1)},
      {"fvs", {{1.0, 3.618}, {2.0, 1.0}}, grid(1.1, 0.1)},
      {"tfvs", {{1.0, 2.0}, {3.0, 1.0}}, grid(1.2, 0.2)},
      {"3hs", {{1.0, 2.168}, {3.0, 1.0}}, grid(1.2, 0.2)},
      {"4hs", {{1.0, 3.168}, {4.0, 1.0}}, grid(1.3, 0.3)},
      {"5hs", {{1.0, 4.168}, {5.0, 1.0}}, grid(1.4, 0.4)},
  };
  return presets;
}

const TablePreset& table_preset(const std::string& name) {
  for (const TablePreset& p : table_presets()) {
    if (p.name == name) return p;
  }
  throw DomainError("unknown table preset '" + name + "'");
}

std::vector<BoundParams> preset_rows(const TablePreset& preset, double precision) {
  std::vector<BoundParams> rows;
  for (const auto& [alpha, c] : preset.alpha_c) {
    for (double beta : preset.betas) rows.push_back({alpha, c, beta, precision});
  }
  return rows;
}

}  // namespace wamls
