// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "nilspec/dual_trace.hpp"
#include "nilspec/group.hpp"
#include "nilspec/multiplier.hpp"
#include "nilspec/representation.hpp"
#include "nilspec/schrodinger.hpp"
#include "nilspec/weyl.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nilspec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = std::log(xs[k]), y = std::log(ys[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Eigen::VectorXd dense_eigenvalues(const TridiagSystem& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = t.diagonal[static_cast<std::size_t>(i)];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off_diagonal[static_cast<std::size_t>(i)];
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

std::size_t count_below(const Eigen::VectorXd& ev, double s) {
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) c += ev(i) < s ? 1 : 0;
  return c;
}

// ---------------------------------------------------------------------------

Outcome exact_algebra() {
  // expected structure constants, written out independently of the library table
  struct Rel {
    int i, j, k;
  };
  const std::vector<Rel> engel = {{1, 2, 3}, {1, 3, 4}};
  const std::vector<Rel> cartan = {{1, 2, 3}, {1, 3, 4}, {2, 3, 5}};
  int checked = 0, bad = 0;
  for (GroupId g : {GroupId::Engel, GroupId::Cartan}) {
    const auto& rels = g == GroupId::Engel ? engel : cartan;
    const int n = dimension(g);
    const ExactOp zero(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        int k = 0;
        for (const Rel& r : rels)
          if (r.i == i && r.j == j) k = r.k;
        const ExactOp br = commutator(algebra_basis(g, i), algebra_basis(g, j));
        const bool ok = k == 0 ? br == zero : br == algebra_basis(g, k);
        ++checked;
        if (!ok) ++bad;
      }
    }
  }
  std::ostringstream os;
  os << checked << " brackets, " << bad << " mismatches";
  return {bad == 0, os.str()};
}

GroupElement<double> aligned_element(const DualPoint& pi, double step, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> M(-100, 100);
  std::vector<double> x(static_cast<std::size_t>(dimension(pi.group)));
  for (double& v : x) v = U(rng);
  const double shift = M(rng) * step;
  if (pi.group == GroupId::Engel)
    x[0] = shift;
  else
    x[0] = (shift * pi.rho() - pi.mu * x[1]) / pi.lambda;
  return GroupElement<double>(pi.group, x);
}

Outcome representation_fidelity() {
  std::mt19937_64 rng(7);
  auto gaussian = [](double L, std::size_t n, double c) {
    return GridFunction::sample(L, n, [&](double u) {
      const double w = u - c;
      return std::exp(-0.5 * w * w) * Complex(std::cos(0.7 * u), std::sin(0.7 * u));
    });
  };

  double worst_hom = 0.0, worst_unit = 0.0;
  bool lost = false;
  const GridFunction h = gaussian(12.0, 3073, 0.0);
  for (DualPoint pi : {DualPoint::engel(1.2, 0.6), DualPoint::cartan(1.0, 0.5, 1.5)}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto g1 = aligned_element(pi, h.step(), rng);
      auto g2 = aligned_element(pi, h.step(), rng);
      RepResult lhs = apply_rep(pi, multiply(g1, g2), h);
      RepResult inner = apply_rep(pi, g2, h);
      RepResult rhs = apply_rep(pi, g1, inner.value);
      lost = lost || lhs.boundary_warning || rhs.boundary_warning;
      worst_hom = std::max(worst_hom, (lhs.value - rhs.value).norm() / rhs.value.norm());
      worst_unit = std::max(worst_unit, std::abs(inner.value.norm() - h.norm()) / h.norm());
    }
  }

  // second-order convergence of the difference quotient to each symbol
  const double step = std::ldexp(1.0, -11);
  const double L = 8.0;
  const auto n = static_cast<std::size_t>(std::llround(2 * L / step)) + 1;
  const GridFunction f = gaussian(L, n, 0.3);
  std::vector<double> ts;
  for (int e = 3; e <= 9; ++e) ts.push_back(std::ldexp(1.0, -e));
  double min_order = 1e9, max_order = -1e9;
  for (DualPoint pi : {DualPoint::engel(1.0, 0.5), DualPoint::cartan(1.0, 1.0, 0.5)}) {
    for (int i = 1; i <= dimension(pi.group); ++i) {
      std::vector<double> res;
      for (double t : ts) res.push_back(infinitesimal_check(pi, i, f, t));
      const double order = fit_slope(ts, res);
      min_order = std::min(min_order, order);
      max_order = std::max(max_order, order);
    }
  }

  const bool pass = !lost && worst_hom <= 1e-10 && worst_unit <= 1e-10 && std::abs(min_order - 2.0) <= 0.2 &&
                    std::abs(max_order - 2.0) <= 0.2;
  char buf[256];
  std::snprintf(buf, sizeof buf, "homomorphism %.2e, unitarity %.2e, orders in [%.3f, %.3f]", worst_hom, worst_unit,
                min_order, max_order);
  return {pass, buf};
}

Outcome eigensolver_oracle() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> N(2, 600);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  int count_mismatch = 0, thresholds = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = N(rng);
    TridiagSystem t;
    t.diagonal.resize(n);
    t.off_diagonal.resize(n - 1);
    for (double& v : t.diagonal) v = U(rng);
    for (double& v : t.off_diagonal) v = U(rng);
    t.half_width = 1.0;
    t.step = 2.0 / static_cast<double>(n - 1);
    const Eigen::VectorXd ev = dense_eigenvalues(t);
    for (int k = 0; k < 10; ++k) {
      const double s = 3.0 * U(rng);
      ++thresholds;
      if (sturm_count(t, s) != count_below(ev, s)) ++count_mismatch;
    }
  }

  double worst = 0.0;
  std::size_t largest = 0;
  const SchrodingerOp op = build_symbol_engel(1.0, 0.0);
  for (double s : {5.0, 10.0, 20.0}) {
    const DomainChoice d = auto_domain(op, s);
    const TridiagSystem t = discretize(op, d.half_width, d.points);
    largest = std::max(largest, t.size());
    const Eigen::VectorXd ev = dense_eigenvalues(t);
    const std::size_t c = count_below(ev, s);
    if (sturm_count(t, s) != c) ++count_mismatch;
    const std::vector<double> mine = eigenvalues_below(t, s, 1e-10);
    if (mine.size() != c) {
      ++count_mismatch;
      continue;
    }
    for (std::size_t k = 0; k < c; ++k) worst = std::max(worst, std::abs(mine[k] - ev(static_cast<Eigen::Index>(k))));
  }

  char buf[256];
  std::snprintf(buf, sizeof buf, "%d count mismatches over %d random thresholds + Engel(1,0); max |dE| %.2e (n <= %zu)",
                count_mismatch, thresholds, worst, largest);
  return {count_mismatch == 0 && worst <= 1e-6, buf};
}

Outcome weyl_certification() {
  const double harmonic = weyl_ratio(SchrodingerOp(1.0, Potential({0.0, 1.0})), 1000.0);
  const double s_top = 400.0;
  const DualPoint e = DualPoint::engel(1.0, 0.0);
  const DualPoint c = DualPoint::cartan(1.0, 1.0, 0.0);
  const double engel = 2.0 * M_PI * static_cast<double>(point_count(e, s_top)) / point_volume(e, s_top);
  const double cartan = 2.0 * M_PI * static_cast<double>(point_count(c, s_top)) / point_volume(c, s_top);
  const bool pass = std::abs(harmonic - 1.0) <= 0.02 && std::abs(engel - 1.0) <= 0.10 && std::abs(cartan - 1.0) <= 0.10;
  char buf[256];
  std::snprintf(buf, sizeof buf, "harmonic(s=1000) %.4f, Engel(1,0) %.4f, Cartan(1,1,0) %.4f at s=%g", harmonic, engel,
                cartan, s_top);
  return {pass, buf};
}

Outcome counting_slopes() {
  const std::vector<double> grid = geometric_grid(50.0, 5000.0, 7);
  std::ostringstream os;
  bool pass = true;
  for (GroupId g : {GroupId::Engel, GroupId::Cartan}) {
    const std::vector<DualPoint> points =
        g == GroupId::Engel
            ? std::vector<DualPoint>{DualPoint::engel(1.0, 0.0), DualPoint::engel(1.0, 1.0), DualPoint::engel(0.8, -2.0)}
            : std::vector<DualPoint>{DualPoint::cartan(1.0, 1.0, 0.0), DualPoint::cartan(1.0, 0.5, 0.5),
                                     DualPoint::cartan(0.9, 1.2, -1.0)};
    const double limit = counting_exponent(g) + 0.2;
    double worst = -1e9;
    for (const DualPoint& pi : points) {
      std::vector<double> counts;
      for (double s : grid) counts.push_back(static_cast<double>(point_count(pi, s)));
      for (double c : counts)
        if (!(c > 0)) pass = false;
      if (!pass) break;
      worst = std::max(worst, fit_slope(grid, counts));
    }
    pass = pass && worst <= limit;
    os << group_name(g) << " max slope " << worst << " (limit " << limit << "), ";
  }
  os << "s in [50, 5000]";
  return {pass, os.str()};
}

Outcome trace_growth() {
  const std::vector<double> grid = geometric_grid(1e2, 1e4, 5);
  TraceOptions opts;
  opts.threads = 4;
  std::ostringstream os;
  bool pass = true;
  for (GroupId g : {GroupId::Engel, GroupId::Cartan}) {
    const GrowthFit fit = growth_exponent(g, grid, opts);
    const double limit = growth_target(g) + 0.3;
    const auto xs = cross_validate(g, 1e3, opts, 3);
    double worst = 0.0;
    for (const CrossCheck& c : xs) worst = std::max(worst, c.rel_diff);
    pass = pass && fit.slope <= limit && xs.size() == 3 && worst <= 0.25;
    if (g == GroupId::Cartan) os << "; ";
    os << group_name(g) << " slope " << fit.slope << " (limit " << limit << "), cross-check " << xs.size()
       << " nodes max rel " << worst;
  }
  return {pass, os.str()};
}

Outcome closed_forms() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logt(std::log(1e-3), std::log(1e3));
  std::uniform_real_distribution<double> P(1.01, 1.99);
  std::uniform_real_distribution<double> Qd(2.01, 12.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = std::exp(logt(rng));
    const ExponentPair pq(P(rng), Qd(rng));
    const double inv_r = pq.inv_r();
    const double expected = std::pow(3.0 / t * inv_r, 3.0 * inv_r) * std::exp(-3.0 * inv_r);
    const SupResult r = sup_bound(PhiFunction::heat(t), GroupId::Engel, pq);
    worst = std::max(worst, std::abs(r.numeric - expected) / expected);
  }

  // Cartan: sup exp(-ts) s^{e/r} scales as t^{-e (1/p - 1/q)} with e = 9/2
  double worst_exp = 0.0;
  bool exact = true;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1.5, 3.0}, {1.25, 2.5}, {2.0, 4.0}, {1.1, 9.0}}) {
    const ExponentPair pq(p, q);
    const double expected = 4.5 * (1.0 / p - 1.0 / q);
    const HeatDecay a = heat_decay(GroupId::Cartan, pq, 0.5);
    const HeatDecay b = heat_decay(GroupId::Cartan, pq, 8.0);
    exact = exact && a.exponent == expected;
    const double measured = std::log(a.sup / b.sup) / std::log(8.0 / 0.5);
    worst_exp = std::max(worst_exp, std::abs(measured - expected));
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "heat sup max rel err %.2e over 100 draws; Cartan exponent exact=%s, measured err %.2e",
                worst, exact ? "yes" : "no", worst_exp);
  return {worst <= 1e-6 && exact && worst_exp <= 1e-6, buf};
}

Outcome sobolev_consistency() {
  const std::vector<std::pair<double, double>> pairs = {{2.0, 2.0}, {1.5, 3.0},  {4.0 / 3.0, 4.0}, {1.5, 6.0},
                                                        {1.2, 2.0}, {2.0, 10.0}, {1.25, 5.0},      {1.1, 2.5},
                                                        {1.8, 3.6}, {1.05, 20.0}};
  int checked = 0, disagree = 0, passing = 0, boundary = 0;
  for (GroupId g : {GroupId::Engel, GroupId::Cartan}) {
    for (auto [p, q] : pairs) {
      const ExponentPair pq(p, q);
      for (int ia = 1; ia <= 10; ++ia) {
        const double a = 0.75 * ia;
        for (int j = 0; j < 10; ++j) {
          const double b = a * j / 10.0;
          const SobolevResult s = sobolev_check(g, a, b, pq);
          const SupResult r = sup_bound(PhiFunction::power(a - b), g, pq);
          ++checked;
          if (s.pass != r.finite) ++disagree;
          passing += s.pass ? 1 : 0;
          boundary += s.margin == 0.0 ? 1 : 0;
        }
      }
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d disagreements over %d cases (%d finite, %d on the boundary)", disagree, checked,
                passing, boundary);
  return {disagree == 0, buf};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"exact algebra", 1.0, exact_algebra},
      {"representation fidelity", 30.0, representation_fidelity},
      {"eigensolver oracle equivalence", 120.0, eigensolver_oracle},
      {"Weyl certification", 300.0, weyl_certification},
      {"counting bounds", 600.0, counting_slopes},
      {"trace growth", 1800.0, trace_growth},
      {"closed-form reproduction", 10.0, closed_forms},
      {"Sobolev consistency", 10.0, sobolev_consistency},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& c = criteria[k];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.pass && secs < c.limit_seconds;
    failures += ok ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s [%.2f s, limit %.0f s]\n", ok ? "PASS" : "FAIL", k + 1, c.name,
                o.detail.c_str(), secs, c.limit_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
