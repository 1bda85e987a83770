#pragma once

// Phase-space volumes of Weyl symbols a xi^2 + V(u) and their comparison with
// eigenvalue counts.

#include "nilspec/group.hpp"
#include "nilspec/representation.hpp"
#include "nilspec/schrodinger.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nilspec {

struct WeylSymbol {
  double kinetic = 1.0;
  Potential potential;

  explicit WeylSymbol(const SchrodingerOp& op) : kinetic(op.kinetic), potential(op.potential) {}
  WeylSymbol(double a, Potential v) : kinetic(a), potential(std::move(v)) {}
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Real roots of a polynomial (ascending coefficients) inside [lo, hi], ascending.
std::vector<double> real_roots(std::span<const double> coeffs, double lo, double hi);

/// {u : V(u) < s} as disjoint open intervals, ascending.
std::vector<Interval> sublevel_intervals(const Potential& v, double s);

/// Area of {(u, xi) : a xi^2 + V(u) < s} = int 2 sqrt((s - V)/a) du.
double phase_space_volume(const WeylSymbol& sigma, double s, double rel_tol = 1e-10);

/// 2 pi N(s) / volume(s).
double weyl_ratio(const SchrodingerOp& op, double s, const SolverConfig& cfg = {});

/// The symbol whose counting function is compared at threshold scale * s:
/// A itself for Engel, B' = rho B at threshold rho s for Cartan.
struct CountingProblem {
  SchrodingerOp op;
  double threshold_scale = 1.0;
};
CountingProblem counting_problem(const DualPoint& pi);

/// N(s) of the representation's symbol (through the rescaling identity for Cartan).
std::size_t point_count(const DualPoint& pi, double s, const SolverConfig& cfg = {});
/// Phase-space volume matched to point_count.
double point_volume(const DualPoint& pi, double s);

/// Exponent of the counting bound: 3/2 (Engel) or 5/2 (Cartan).
double counting_exponent(GroupId g);

struct CountingRow {
  double s = 0.0;
  std::size_t max_count = 0;
  double volume = 0.0;  ///< volume at the dual point attaining max_count
  double ratio = 0.0;   ///< max_count / s^exponent
};

struct CountingReport {
  GroupId group = GroupId::Engel;
  double exponent = 1.5;
  std::vector<CountingRow> rows;
  double empirical_constant = 0.0;  ///< max ratio over the grid
  double slope = 0.0;               ///< log-log slope of max_count (NaN if any count is 0)
  bool bounded = false;             ///< ratios non-increasing in trend: last <= first, slope <= exponent

  std::string to_json() const;
};

CountingReport counting_bound_check(GroupId g, std::span<const DualPoint> points, std::span<const double> s_grid,
                                    const SolverConfig& cfg = {}, unsigned threads = 1);

/// Least-squares slope and intercept of log y against log x.
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS deviation in log scale
};
LogFit log_log_fit(std::span<const double> x, std::span<const double> y);

}  // namespace nilspec
