#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wamls {

// Parameters of an approximate monotone local search bound: the oracle
// approximation factor alpha, the per-query cost base c, the target factor
// beta and the absolute tolerance on the returned base.
struct BoundParams {
  double alpha = 1.0;
  double c = 1.0;
  double beta = 1.0;
  double precision = 1e-6;

  // Throws DomainError unless alpha, c, beta >= 1, precision > 0, all finite.
  void validate() const;
};

// Result of the max-min evaluation. value = exp(g(kappa_star, tau_star)) up
// to err_bound.
struct SaddlePoint {
  double value = 1.0;
  double kappa_star = 0.0;
  double tau_star = 0.0;
  double err_bound = 0.0;
};

// Binary entropy in nats with 0 ln 0 = 0.
double entropy(double x);

// 1 + exp(-alpha * H(1/alpha)), the base of alpha-approximate brute force.
double brute_bound(double alpha);

// Lower end of the feasible tau interval for a given kappa.
double m_lower(double alpha, double beta, double kappa);

// The exponent g(kappa, tau) whose max-min defines the amls base.
double g_value(double alpha, double beta, double c, double kappa, double tau);

struct InnerMinimum {
  double value = 0.0;
  double tau_star = 0.0;
  // value - (certified lower bound on the true minimum), >= 0.
  double gap = 0.0;
};

// min over tau in [m_lower(kappa), beta * kappa] of g(kappa, tau). g is convex
// in tau, so golden-section search applies; the search stops once the
// convexity certificate brackets the minimum within `precision`.
InnerMinimum g_star(double alpha, double beta, double c, double kappa, double precision);

// exp(max over kappa in [0, 1/beta] of g_star(kappa)).
SaddlePoint amls_bound(const BoundParams& params);

struct BoundRow {
  BoundParams params;
  double brute = 0.0;
  SaddlePoint amls;
};

// Evaluates each row; throws DomainError for an empty input.
std::vector<BoundRow> bound_table(std::span<const BoundParams> rows);

enum class TableFormat { csv, json };

// CSV header alpha,c,beta,brute,amls,kappa_star,tau_star,err_bound with six
// significant digits, or one JSON object per line.
void write_bound_table(std::ostream& out, std::span<const BoundRow> rows, TableFormat format);

struct ShapeReport {
  // Most negative second difference of g along tau (0 when none negative).
  double max_convexity_violation = 0.0;
  // Largest positive second difference of g_star along kappa.
  double max_concavity_violation = 0.0;
  bool pass = true;
};

inline constexpr double kShapeTolerance = 1e-7;

// Discrete convexity/concavity scan on grid_resolution points per axis.
ShapeReport shape_check(const BoundParams& params, int grid_resolution);

// Named (alpha, c) presets and beta grids for the bound tables.
struct TablePreset {
  std::string name;
  std::vector<std::pair<double, double>> alpha_c;
  std::vector<double> betas;
};

const std::vector<TablePreset>& table_presets();
const TablePreset& table_preset(const std::string& name);
std::vector<BoundParams> preset_rows(const TablePreset& preset, double precision = 1e-6);

}  // namespace wamls
