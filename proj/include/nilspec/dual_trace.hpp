#pragma once

// Trace of spectral projections E_(0,s) integrated over the truncated dual
// region, and the growth exponent of that trace in s.

#include "nilspec/group.hpp"
#include "nilspec/quadrature.hpp"
#include "nilspec/representation.hpp"
#include "nilspec/schrodinger.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nilspec {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Engel: lambda in (s^-1/2, s^1/2), mu in (-2s, 4s).
/// Cartan: lambda, mu in (s^-1/2, s^1/2), nu in (-2s, 2s).
struct DualRegion {
  GroupId group = GroupId::Engel;
  double s = 0.0;
  Range lambda, mu, nu;

  std::size_t axes() const { return group == GroupId::Engel ? 2 : 3; }
  /// Lebesgue measure in d lambda d mu (d nu).
  double measure() const;
};

DualRegion region_for(GroupId g, double s);

enum class TraceMethod { EigenCount, VolumeBound };
const char* trace_method_name(TraceMethod m);
TraceMethod parse_trace_method(const std::string& s);

struct QuadratureSpec {
  std::vector<std::size_t> nodes;  ///< per axis: lambda, mu[, nu]
  QuadRule rule = QuadRule::GaussLegendre;
  /// Place each axis rule on the part of the region where some symbol lies
  /// below s (iterated rule). The integrand vanishes elsewhere, so the
  /// integral is unchanged while the kinks at the support edge disappear.
  bool clip_support = true;
};
/// 32 x 32 (Engel), 16 x 16 x 16 (Cartan).
QuadratureSpec default_quadrature(GroupId g);

/// Per-point integrand override (test hook); receives the dual point and s.
using PointValue = std::function<double(const DualPoint&, double)>;

struct TraceOptions {
  TraceMethod method = TraceMethod::VolumeBound;
  QuadratureSpec quadrature;  ///< empty nodes -> default_quadrature
  SolverConfig solver;
  unsigned threads = 1;
  bool error_indicator = true;  ///< also evaluate at half the nodes per axis
  PointValue integrand;
};

struct TraceEstimate {
  double s = 0.0;
  double value = 0.0;
  TraceMethod method = TraceMethod::VolumeBound;
  std::vector<std::size_t> nodes;
  double error_indicator = 0.0;  ///< |Q(n) - Q(n/2)|, 0 if not requested
};

/// One tensor-product node.
struct DualNode {
  DualPoint point;
  double weight = 0.0;
};
std::vector<DualNode> dual_nodes(const DualRegion& r, const QuadratureSpec& q);

/// Exact support of the counting integrand: the symbol at the dual point has
/// potential minimum below s iff the point lies in these nested ranges.
/// Empty ranges have lo >= hi.
Range lambda_support(GroupId g, double s);
Range mu_support(GroupId g, double s, double lambda);
Range nu_support(double s, double lambda, double mu);

/// Counting value at one dual point: N(s) or volume/(2 pi).
double point_value(const DualPoint& pi, double s, TraceMethod m, const SolverConfig& cfg = {});

TraceEstimate trace_estimate(GroupId g, double s, const TraceOptions& opts = {});

/// Target exponent: 3 (Engel), 9/2 (Cartan).
double growth_target(GroupId g);

struct GrowthFit {
  GroupId group = GroupId::Engel;
  std::vector<double> s_grid;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double target = 0.0;

  /// slope <= target + 0.3
  bool pass() const { return slope <= target + 0.3; }
  std::string to_json() const;
};

/// Geometric grid of n points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// Least-squares growth fit of trace_estimate over a geometric grid
/// (>= 5 points spanning >= 2 decades).
GrowthFit growth_exponent(GroupId g, std::span<const double> s_grid, const TraceOptions& opts = {},
                          std::vector<TraceEstimate>* estimates = nullptr);

/// Eigen-count against volume/(2 pi) at a few quadrature nodes.
struct CrossCheck {
  DualPoint point;
  double s = 0.0;
  std::size_t count = 0;
  double volume_estimate = 0.0;
  double rel_diff = 0.0;  ///< |count - volume_estimate| / volume_estimate
};
/// Picks k nodes whose volume estimate is at least min_estimate, spread over
/// the quantiles of the estimate, and computes eigen-counts there.
std::vector<CrossCheck> cross_validate(GroupId g, double s, const TraceOptions& opts = {}, std::size_t k = 3,
                                       double min_estimate = 20.0);

/// CSV: s,estimate,method,nodes,error_indicator
void write_sweep_csv(std::ostream& os, std::span<const TraceEstimate> rows);

}  // namespace nilspec
