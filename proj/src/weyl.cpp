#include "nilspec/weyl.hpp"

#include "nilspec/parallel.hpp"
#include "nilspec/quadrature.hpp"

#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nilspec {

namespace {

double horner(std::span<const double> c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

// Root of a polynomial that changes sign on [a, b].
double refine_root(std::span<const double> c, double a, double b, double fa, double fb) {
  auto f = [c](double x) { return horner(c, x); };
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

// Intervals of w >= 0 where P(w) < s, P given by ascending coefficients in w.
std::vector<Interval> sublevel_in_square(const Potential& v, double s) {
  std::vector<double> c = v.even_coefficients();
  c[0] -= s;
  const double lead = std::abs(c.back());
  double bound = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) bound = std::max(bound, std::abs(c[k]) / lead);
  const double wmax = 1.0 + bound;

  std::vector<double> cuts{0.0};
  for (double r : real_roots(c, 0.0, wmax)) cuts.push_back(r);
  cuts.push_back(wmax);

  std::vector<Interval> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    if (horner(c, 0.5 * (a + b)) >= 0.0) continue;
    if (!out.empty() && out.back().hi == a)
      out.back().hi = b;  // tangential touch inside the set
    else
      out.push_back({a, b});
  }
  return out;
}

}  // namespace

std::vector<double> real_roots(std::span<const double> coeffs, double lo, double hi) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
  if (deg <= 1) return {};
  std::span<const double> c = coeffs.first(deg);
  if (deg == 2) {
    const double r = -c[0] / c[1];
    if (r >= lo && r <= hi) return {r};
    return {};
  }
  // monotone pieces between the critical points
  std::vector<double> dc(deg - 1);
  for (std::size_t k = 1; k < deg; ++k) dc[k - 1] = static_cast<double>(k) * c[k];
  std::vector<double> cuts{lo};
  for (double x : real_roots(dc, lo, hi))
    if (x > cuts.back()) cuts.push_back(x);
  if (hi > cuts.back()) cuts.push_back(hi);

  std::vector<double> roots;
  auto push = [&roots](double x) {
    if (roots.empty() || x > roots.back()) roots.push_back(x);
  };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const double fa = horner(c, a), fb = horner(c, b);
    if (fa == 0.0) {
      push(a);
      continue;
    }
    if (fb == 0.0) continue;  // reported as the left end of the next piece
    if ((fa < 0.0) != (fb < 0.0)) push(refine_root(c, a, b, fa, fb));
  }
  if (cuts.size() >= 2 && horner(c, cuts.back()) == 0.0) push(cuts.back());
  return roots;
}

std::vector<Interval> sublevel_intervals(const Potential& v, double s) {
  std::vector<Interval> pos;
  bool through_zero = false;
  for (const Interval& w : sublevel_in_square(v, s)) {
    if (w.lo == 0.0) {
      through_zero = true;
      pos.push_back({0.0, std::sqrt(w.hi)});
    } else {
      pos.push_back({std::sqrt(w.lo), std::sqrt(w.hi)});
    }
  }
  std::vector<Interval> out;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (through_zero && it->lo == 0.0) continue;
    out.push_back({-it->hi, -it->lo});
  }
  for (const Interval& i : pos) {
    if (through_zero && i.lo == 0.0)
      out.push_back({-i.hi, i.hi});
    else
      out.push_back(i);
  }
  return out;
}

namespace {

// V(m + v) - s as a polynomial in v, expanded in extended precision so that
// evaluation near a deep, narrow well does not cancel catastrophically.
std::vector<double> shifted_gap(const Potential& v, double s, double m) {
  const std::vector<double>& e = v.even_coefficients();
  std::vector<long double> c(2 * e.size() - 1, 0.0L);
  for (std::size_t k = 0; k < e.size(); ++k) c[2 * k] = e[k];
  c[0] -= s;
  // repeated synthetic division: Taylor coefficients at m
  const long double lm = m;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += lm * c[j];
  return {c.begin(), c.end()};
}

// Root of q near v0, bracketed by expanding a symmetric window.
double refine_near(std::span<const double> q, double v0, double scale) {
  double d = std::max(scale * 1e-12, std::abs(v0) * 1e-15);
  for (int k = 0; k < 60; ++k, d *= 4.0) {
    const double a = v0 - d, b = v0 + d;
    const double fa = horner(q, a), fb = horner(q, b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) != (fb < 0.0)) return refine_root(q, a, b, fa, fb);
    if (d > 0.25 * scale) break;
  }
  return v0;
}

}  // namespace

double phase_space_volume(const WeylSymbol& sigma, double s, double rel_tol) {
  if (!(sigma.kinetic > 0.0)) throw std::invalid_argument("phase_space_volume: kinetic coefficient must be positive");
  const double a = sigma.kinetic;

  std::vector<double> parts;
  for (const Interval& w : sublevel_in_square(sigma.potential, s)) {
    const double hi = std::sqrt(w.hi);
    const double lo = w.lo == 0.0 ? -hi : std::sqrt(w.lo);
    const double m = w.lo == 0.0 ? 0.0 : 0.5 * (lo + hi);
    const std::vector<double> q = shifted_gap(sigma.potential, s, m);
    const double half = 0.5 * (hi - lo);
    const double vl = w.lo == 0.0 ? -half : refine_near(q, lo - m, half);
    const double vh = refine_near(q, hi - m, half);
    auto height = [&](double v) { return 2.0 * std::sqrt(std::max(0.0, -horner(q, v)) / a); };
    // v = v0 + dir t^2 removes the square-root singularity at a turning point v0
    auto from_turning_point = [&](double v0, double dir, double len) {
      auto g = [&, v0, dir](double t) { return height(v0 + dir * t * t) * 2.0 * t; };
      return integrate_adaptive(g, 0.0, std::sqrt(len), rel_tol).value;
    };
    const double vm = 0.5 * (vl + vh);
    const double mult = w.lo == 0.0 ? 1.0 : 2.0;  // mirror image at -u
    parts.push_back(mult * (from_turning_point(vl, 1.0, vm - vl) + from_turning_point(vh, -1.0, vh - vm)));
  }
  return pairwise_sum(parts);
}

double weyl_ratio(const SchrodingerOp& op, double s, const SolverConfig& cfg) {
  const double vol = phase_space_volume(WeylSymbol(op), s);
  if (!(vol > 0.0)) throw std::invalid_argument("weyl_ratio: empty sublevel set (s below the potential minimum)");
  return 2.0 * std::numbers::pi * static_cast<double>(counting_function(op, s, cfg)) / vol;
}

CountingProblem counting_problem(const DualPoint& pi) {
  SchrodingerOp op = build_symbol(pi);
  if (pi.group == GroupId::Engel) return {op, 1.0};
  const double r = pi.rho();
  return {op.scaled(r), r};
}

std::size_t point_count(const DualPoint& pi, double s, const SolverConfig& cfg) {
  CountingProblem p = counting_problem(pi);
  return counting_function(p.op, p.threshold_scale * s, cfg);
}

double point_volume(const DualPoint& pi, double s) {
  CountingProblem p = counting_problem(pi);
  return phase_space_volume(WeylSymbol(p.op), p.threshold_scale * s);
}

double counting_exponent(GroupId g) { return g == GroupId::Engel ? 1.5 : 2.5; }

LogFit log_log_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_fit: need at least two paired values");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("log_log_fit: values must be positive");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw std::invalid_argument("log_log_fit: abscissae must not all coincide");
  LogFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = std::log(y[k]) - (f.intercept + f.slope * std::log(x[k]));
    ss += d * d;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

CountingReport counting_bound_check(GroupId g, std::span<const DualPoint> points, std::span<const double> s_grid,
                                    const SolverConfig& cfg, unsigned threads) {
  if (points.empty() || s_grid.empty()) throw std::invalid_argument("counting_bound_check: empty sample");
  for (const DualPoint& p : points)
    if (p.group != g) throw std::invalid_argument("counting_bound_check: dual point from another group");
  const std::size_t np = points.size();
  std::vector<std::size_t> counts(np * s_grid.size());
  parallel_for(counts.size(), threads, [&](std::size_t i) {
    counts[i] = point_count(points[i % np], s_grid[i / np], cfg);
  });

  CountingReport rep;
  rep.group = g;
  rep.exponent = counting_exponent(g);
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    CountingRow row;
    row.s = s_grid[k];
    std::size_t best = 0;
    for (std::size_t j = 0; j < np; ++j)
      if (counts[k * np + j] > row.max_count) {
        row.max_count = counts[k * np + j];
        best = j;
      }
    row.volume = point_volume(points[best], row.s);
    row.ratio = static_cast<double>(row.max_count) / std::pow(row.s, rep.exponent);
    rep.empirical_constant = std::max(rep.empirical_constant, row.ratio);
    if (row.max_count > 0) {
      xs.push_back(row.s);
      ys.push_back(static_cast<double>(row.max_count));
    }
    rep.rows.push_back(row);
  }
  rep.slope = xs.size() >= 2 ? log_log_fit(xs, ys).slope : std::numeric_limits<double>::quiet_NaN();
  rep.bounded = xs.size() < 2 || rep.slope <= rep.exponent;
  return rep;
}

std::string CountingReport::to_json() const {
  nlohmann::json j;
  j["group"] = group_name(group);
  j["exponent"] = exponent;
  j["empirical_constant"] = empirical_constant;
  j["slope"] = std::isfinite(slope) ? nlohmann::json(slope) : nlohmann::json(nullptr);
  j["bounded"] = bounded;
  j["note"] = "bound holds up to an unspecified constant; the empirical constant is reported, not asserted";
  for (const CountingRow& r : rows)
    j["rows"].push_back({{"s", r.s}, {"N", r.max_count}, {"volume", r.volume}, {"ratio", r.ratio},
                         {"empirical_constant", empirical_constant}});
  return j.dump(2);
}

}  // namespace nilspec
