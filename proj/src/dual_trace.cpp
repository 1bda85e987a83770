#include "nilspec/dual_trace.hpp"

#include "nilspec/parallel.hpp"
#include "nilspec/weyl.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nilspec {

double DualRegion::measure() const {
  double m = lambda.length() * mu.length();
  if (group == GroupId::Cartan) m *= nu.length();
  return m;
}

DualRegion region_for(GroupId g, double s) {
  if (!(s > 1.0)) {
    std::ostringstream os;
    os << "dual region needs s > 1 so that s^-1/2 < s^1/2, got s=" << s;
    throw std::invalid_argument(os.str());
  }
  DualRegion r;
  r.group = g;
  r.s = s;
  r.lambda = {1.0 / std::sqrt(s), std::sqrt(s)};
  if (g == GroupId::Engel) {
    r.mu = {-2.0 * s, 4.0 * s};
  } else {
    r.mu = r.lambda;
    r.nu = {-2.0 * s, 2.0 * s};
  }
  return r;
}

const char* trace_method_name(TraceMethod m) { return m == TraceMethod::EigenCount ? "eigen_count" : "volume_bound"; }

TraceMethod parse_trace_method(const std::string& s) {
  if (s == "eigen_count" || s == "eigen" || s == "count") return TraceMethod::EigenCount;
  if (s == "volume_bound" || s == "volume") return TraceMethod::VolumeBound;
  throw std::invalid_argument("unknown trace method '" + s + "' (expected eigen_count or volume_bound)");
}

QuadratureSpec default_quadrature(GroupId g) {
  QuadratureSpec q;
  q.nodes = g == GroupId::Engel ? std::vector<std::size_t>{32, 32} : std::vector<std::size_t>{16, 16, 16};
  return q;
}

namespace {

Range intersect(Range a, Range b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

// {x > 0 : x + 1/x < r}, i.e. between the roots of x^2 - r x + 1
Range quadratic_window(double r) {
  const double disc = r * r - 4.0;
  if (!(r > 0.0) || !(disc > 0.0)) return {0.0, 0.0};
  const double sq = std::sqrt(disc);
  return {2.0 / (r + sq), 0.5 * (r + sq)};  // stable form of (r - sq)/2
}

Range sqrt_range(Range x) {
  if (!(x.hi > x.lo)) return {0.0, 0.0};
  return {std::sqrt(x.lo), std::sqrt(x.hi)};
}

}  // namespace

Range lambda_support(GroupId g, double s) {
  // Engel: lambda^2 + lambda^-2 < s. Cartan, minimizing over mu and nu
  // (nu = 0, mu = 1): lambda^2 + lambda^-2 + 2 < s.
  return sqrt_range(quadratic_window(g == GroupId::Engel ? s : s - 2.0));
}

Range mu_support(GroupId g, double s, double lambda) {
  const double l2 = lambda * lambda;
  if (g == GroupId::Engel) {
    const double k = s - l2 - 1.0 / l2;
    if (!(k > 0.0)) return {0.0, 0.0};
    const double edge = 2.0 * std::abs(lambda) * std::sqrt(k);
    // past mu = 2 lambda^2 the minimum moves off u = 0 and equals mu + lambda^-2
    return {-edge, k > l2 ? s - 1.0 / l2 : edge};
  }
  // minimum over nu sits at nu = 0: rho + lambda^-2 + mu^-2 < s
  return sqrt_range(quadratic_window(s - l2 - 1.0 / l2));
}

Range nu_support(double s, double lambda, double mu) {
  const double r = lambda * lambda + mu * mu;
  const double inv = 1.0 / (lambda * lambda) + 1.0 / (mu * mu);
  const double c = r * r + r * inv;
  const double room = r * s - c;
  if (!(room > 0.0)) return {0.0, 0.0};
  const double edge = 2.0 * std::sqrt(room);
  // below nu = -2 rho the minimum moves off u = 0 and equals c - nu rho - rho^2
  return {room > r * r ? inv - s : -edge, edge};
}

namespace {

void push_axis(std::vector<DualNode>& out, const Rule1D& rule, const DualNode& base, int axis) {
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    DualNode n = base;
    (axis == 0 ? n.point.lambda : axis == 1 ? n.point.mu : n.point.nu) = rule.nodes[k];
    n.weight *= rule.weights[k];
    out.push_back(n);
  }
}

std::vector<DualNode> refine_axis(const std::vector<DualNode>& in, const QuadratureSpec& q, int axis,
                                  const std::function<Range(const DualPoint&)>& range) {
  std::vector<DualNode> out;
  for (const DualNode& b : in) {
    const Range r = range(b.point);
    if (!(r.hi > r.lo)) continue;
    push_axis(out, make_rule(q.rule, q.nodes[static_cast<std::size_t>(axis)], r.lo, r.hi), b, axis);
  }
  return out;
}

}  // namespace

std::vector<DualNode> dual_nodes(const DualRegion& r, const QuadratureSpec& q) {
  if (q.nodes.size() != r.axes()) throw std::invalid_argument("quadrature spec must give one node count per axis");
  const GroupId g = r.group;
  const double s = r.s;
  const bool clip = q.clip_support;
  std::vector<DualNode> nodes{DualNode{DualPoint{g, 0.0, 0.0, 0.0}, 1.0}};
  nodes = refine_axis(nodes, q, 0, [&](const DualPoint&) {
    return clip ? intersect(r.lambda, lambda_support(g, s)) : r.lambda;
  });
  nodes = refine_axis(nodes, q, 1, [&](const DualPoint& p) {
    return clip ? intersect(r.mu, mu_support(g, s, p.lambda)) : r.mu;
  });
  if (g == GroupId::Cartan)
    nodes = refine_axis(nodes, q, 2, [&](const DualPoint& p) {
      return clip ? intersect(r.nu, nu_support(s, p.lambda, p.mu)) : r.nu;
    });
  return nodes;
}

double point_value(const DualPoint& pi, double s, TraceMethod m, const SolverConfig& cfg) {
  if (m == TraceMethod::EigenCount) return static_cast<double>(point_count(pi, s, cfg));
  return point_volume(pi, s) / (2.0 * std::numbers::pi);
}

namespace {

std::string describe(const DualPoint& p) {
  std::ostringstream os;
  os << std::setprecision(17) << "(lambda=" << p.lambda << ", mu=" << p.mu;
  if (p.group == GroupId::Cartan) os << ", nu=" << p.nu;
  os << ")";
  return os.str();
}

double integrate_nodes(const DualRegion& r, const QuadratureSpec& q, const TraceOptions& opts) {
  const std::vector<DualNode> nodes = dual_nodes(r, q);
  std::vector<double> terms(nodes.size());
  parallel_for(nodes.size(), opts.threads, [&](std::size_t i) {
    const DualNode& n = nodes[i];
    double v;
    try {
      v = opts.integrand ? opts.integrand(n.point, r.s) : point_value(n.point, r.s, opts.method, opts.solver);
    } catch (const std::exception& e) {
      throw std::runtime_error("trace integrand failed at dual point " + describe(n.point) + ": " + e.what());
    }
    terms[i] = n.weight * v;
  });
  return pairwise_sum(terms);
}

}  // namespace

TraceEstimate trace_estimate(GroupId g, double s, const TraceOptions& opts) {
  const DualRegion r = region_for(g, s);
  QuadratureSpec q = opts.quadrature.nodes.empty() ? default_quadrature(g) : opts.quadrature;
  if (opts.quadrature.nodes.empty()) q.rule = opts.quadrature.rule;
  TraceEstimate est;
  est.s = s;
  est.method = opts.method;
  est.nodes = q.nodes;
  est.value = integrate_nodes(r, q, opts);
  if (opts.error_indicator) {
    QuadratureSpec coarse = q;
    for (std::size_t& n : coarse.nodes) n = std::max<std::size_t>(1, (n + 1) / 2);
    est.error_indicator = std::abs(est.value - integrate_nodes(r, coarse, opts));
  }
  return est;
}

double growth_target(GroupId g) { return g == GroupId::Engel ? 3.0 : 4.5; }

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("geometric grid needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  // base 10 keeps decade points exact
  const double a = std::log10(lo), step = (std::log10(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::pow(10.0, a + step * static_cast<double>(k));
  out.front() = lo;
  out.back() = hi;
  return out;
}

GrowthFit growth_exponent(GroupId g, std::span<const double> s_grid, const TraceOptions& opts,
                          std::vector<TraceEstimate>* estimates) {
  if (s_grid.size() < 5) throw std::invalid_argument("growth fit needs at least 5 s values");
  for (std::size_t k = 1; k < s_grid.size(); ++k)
    if (!(s_grid[k] > s_grid[k - 1])) throw std::invalid_argument("s grid must be strictly increasing");
  if (s_grid.back() / s_grid.front() < 100.0 * (1.0 - 1e-12))
    throw std::invalid_argument("growth fit needs an s grid spanning at least two decades");
  GrowthFit fit;
  fit.group = g;
  fit.target = growth_target(g);
  fit.s_grid.assign(s_grid.begin(), s_grid.end());
  for (double s : s_grid) {
    TraceEstimate e = trace_estimate(g, s, opts);
    fit.values.push_back(e.value);
    if (estimates) estimates->push_back(e);
  }
  const LogFit lf = log_log_fit(fit.s_grid, fit.values);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.residual = lf.residual;
  return fit;
}

std::string GrowthFit::to_json() const {
  nlohmann::json j;
  j["group"] = group_name(group);
  j["slope"] = slope;
  j["intercept"] = intercept;
  j["residual"] = residual;
  j["target"] = target;
  j["pass"] = pass();
  j["s"] = s_grid;
  j["values"] = values;
  j["assumption"] =
      "dual measure taken as d lambda d mu (d nu) on the positive-lambda region; Plancherel density absorbed in the constant";
  return j.dump(2);
}

std::vector<CrossCheck> cross_validate(GroupId g, double s, const TraceOptions& opts, std::size_t k,
                                       double min_estimate) {
  const DualRegion r = region_for(g, s);
  const QuadratureSpec q = opts.quadrature.nodes.empty() ? default_quadrature(g) : opts.quadrature;
  const std::vector<DualNode> nodes = dual_nodes(r, q);
  std::vector<double> vol(nodes.size());
  parallel_for(nodes.size(), opts.threads, [&](std::size_t i) {
    vol[i] = point_value(nodes[i].point, s, TraceMethod::VolumeBound, opts.solver);
  });
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (vol[i] >= min_estimate) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vol[a] < vol[b] || (vol[a] == vol[b] && a < b); });
  std::vector<std::size_t> pick;
  for (std::size_t j = 0; j < k && !idx.empty(); ++j) {
    const std::size_t pos = ((2 * j + 1) * idx.size()) / (2 * k);
    const std::size_t cand = idx[std::min(pos, idx.size() - 1)];
    if (std::find(pick.begin(), pick.end(), cand) == pick.end()) pick.push_back(cand);
  }
  std::vector<CrossCheck> out(pick.size());
  parallel_for(pick.size(), opts.threads, [&](std::size_t j) {
    const DualNode& n = nodes[pick[j]];
    CrossCheck c;
    c.point = n.point;
    c.s = s;
    c.count = point_count(n.point, s, opts.solver);
    c.volume_estimate = vol[pick[j]];
    c.rel_diff = std::abs(static_cast<double>(c.count) - c.volume_estimate) / c.volume_estimate;
    out[j] = c;
  });
  return out;
}

void write_sweep_csv(std::ostream& os, std::span<const TraceEstimate> rows) {
  os << "s,estimate,method,nodes,error_indicator\n" << std::setprecision(17);
  for (const TraceEstimate& e : rows) {
    os << e.s << ',' << e.value << ',' << trace_method_name(e.method) << ',';
    for (std::size_t k = 0; k < e.nodes.size(); ++k) os << (k ? "x" : "") << e.nodes[k];
    os << ',' << e.error_indicator << '\n';
  }
}

}  // namespace nilspec
