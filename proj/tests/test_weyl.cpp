#include "doctest.h"

#include "nilspec/weyl.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace nilspec;
using std::numbers::pi;

TEST_CASE("real_roots") {
  // (x-1)(x-2)(x-3) = -6 + 11x - 6x^2 + x^3
  const std::vector<double> c{-6.0, 11.0, -6.0, 1.0};
  auto r = real_roots(c, 0.0, 4.0);
  REQUIRE(r.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(r[k] == doctest::Approx(k + 1.0).epsilon(1e-14));
  CHECK(real_roots(c, 1.5, 2.5).size() == 1);
  const std::vector<double> none{1.0, 0.0, 1.0};
  CHECK(real_roots(none, -10.0, 10.0).empty());
}

TEST_CASE("sublevel_intervals") {
  Potential harmonic({0.0, 1.0});
  auto i = sublevel_intervals(harmonic, 4.0);
  REQUIRE(i.size() == 1);
  CHECK(i[0].lo == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(i[0].hi == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sublevel_intervals(harmonic, 0.0).empty());
  CHECK(sublevel_intervals(harmonic, -1.0).empty());

  // Engel (1, 2): V = u^4/4 + 3, so nothing below 3 and (-sqrt 2, sqrt 2) below 4
  const Potential& e = build_symbol_engel(1.0, 2.0).potential;
  CHECK(sublevel_intervals(e, 3.0).empty());
  auto j = sublevel_intervals(e, 4.0);
  REQUIRE(j.size() == 1);
  CHECK(j[0].hi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(j[0].lo == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));

  // Engel (1, 8): V = w^2/4 - 3w + 18 in w = u^2, a double well with barrier 18
  const Potential& d = build_symbol_engel(1.0, 8.0).potential;
  auto k = sublevel_intervals(d, 12.0);
  REQUIRE(k.size() == 2);
  const double w1 = 6.0 - std::sqrt(12.0), w2 = 6.0 + std::sqrt(12.0);
  CHECK(k[1].lo == doctest::Approx(std::sqrt(w1)).epsilon(1e-12));
  CHECK(k[1].hi == doctest::Approx(std::sqrt(w2)).epsilon(1e-12));
  CHECK(k[0].lo == doctest::Approx(-std::sqrt(w2)).epsilon(1e-12));
  CHECK(k[0].hi == doctest::Approx(-std::sqrt(w1)).epsilon(1e-12));
  auto m = sublevel_intervals(d, 20.0);
  REQUIRE(m.size() == 1);
  CHECK(m[0].hi == doctest::Approx(std::sqrt(6.0 + std::sqrt(44.0))).epsilon(1e-12));
  for (const auto& iv : k) {
    CHECK(d(iv.lo) == doctest::Approx(12.0).epsilon(1e-10));
    CHECK(d(0.5 * (iv.lo + iv.hi)) < 12.0);
  }
}

TEST_CASE("phase_space_volume closed forms") {
  Potential harmonic({0.0, 1.0});
  CHECK(phase_space_volume(WeylSymbol(1.0, harmonic), 4.0) == doctest::Approx(4.0 * pi).epsilon(1e-10));
  // ellipse a xi^2 + u^2 < s has area pi s / sqrt a
  CHECK(phase_space_volume(WeylSymbol(4.0, harmonic), 9.0) == doctest::Approx(pi * 9.0 / 2.0).epsilon(1e-10));
  CHECK(phase_space_volume(WeylSymbol(1.0, harmonic), -1.0) == 0.0);
  // pure quartic: volume = s^{3/4} B(1/4, 3/2)
  Potential quartic({0.0, 0.0, 1.0});
  for (double s : {1.0, 10.0, 1e4})
    CHECK(phase_space_volume(WeylSymbol(1.0, quartic), s) ==
          doctest::Approx(std::pow(s, 0.75) * std::beta(0.25, 1.5)).epsilon(1e-9));
}

TEST_CASE("phase_space_volume: double well splits additively") {
  const Potential& d = build_symbol_engel(1.0, 8.0).potential;
  WeylSymbol sig(1.0, d);
  auto iv = sublevel_intervals(d, 12.0);
  // direct integration on each interval without the substitution, fine enough for 1e-6
  double direct = 0.0;
  for (const auto& i : iv) {
    const int n = 400000;
    const double h = (i.hi - i.lo) / n;
    for (int k = 0; k < n; ++k) {
      const double u = i.lo + (k + 0.5) * h;
      direct += 2.0 * std::sqrt(std::max(0.0, 12.0 - d(u))) * h;
    }
  }
  CHECK(phase_space_volume(sig, 12.0) == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("phase_space_volume: Monte Carlo oracle, Engel (1, 0) at s = 50") {
  SchrodingerOp op = build_symbol_engel(1.0, 0.0);
  const double s = 50.0;
  auto iv = sublevel_intervals(op.potential, s);
  REQUIRE(iv.size() == 1);
  const double U = iv[0].hi, X = std::sqrt(s - op.potential.minimum());
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> du(-U, U), dx(-X, X);
  const int n = 1000000;
  int hits = 0;
  for (int k = 0; k < n; ++k) {
    const double u = du(rng), x = dx(rng);
    hits += (x * x + op.potential(u) < s) ? 1 : 0;
  }
  const double box = 4.0 * U * X, p = static_cast<double>(hits) / n;
  const double mc = box * p, sigma = box * std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(phase_space_volume(WeylSymbol(op), s) - mc) < 3.0 * sigma);
}

TEST_CASE("phase_space_volume: monotone in s and converged") {
  SchrodingerOp op = build_symbol_cartan(1.0, 1.0, -6.0).scaled(2.0);
  WeylSymbol sig(op);
  double prev = 0.0;
  for (double s = 1.0; s < 400.0; s *= 1.3) {
    const double v = phase_space_volume(sig, s);
    CHECK(v >= prev);
    prev = v;
    if (v > 0.0) CHECK(std::abs(phase_space_volume(sig, s, 1e-13) - v) <= 1e-8 * v);
  }
}

TEST_CASE("weyl_ratio") {
  SchrodingerOp harmonic(1.0, Potential({0.0, 1.0}));
  CHECK(std::abs(weyl_ratio(harmonic, 1000.0) - 1.0) < 0.02);
  CHECK(std::abs(weyl_ratio(build_symbol_engel(1.0, 0.0), 200.0) - 1.0) < 0.1);
  CHECK(std::abs(weyl_ratio(build_symbol_cartan(1.0, 1.0, 0.0).scaled(2.0), 400.0) - 1.0) < 0.1);
  CHECK_THROWS(weyl_ratio(harmonic, -1.0));
}

TEST_CASE("counting problem and rescaling") {
  DualPoint c = DualPoint::cartan(1.0, 1.0, 0.0);
  CountingProblem p = counting_problem(c);
  CHECK(p.threshold_scale == doctest::Approx(2.0));
  CHECK(p.op.kinetic == doctest::Approx(1.0));
  CHECK(point_count(c, 100.0) == counting_function(build_symbol_cartan(1.0, 1.0, 0.0), 100.0));
  CHECK(counting_exponent(GroupId::Engel) == 1.5);
  CHECK(counting_exponent(GroupId::Cartan) == 2.5);
}

TEST_CASE("counting_bound_check") {
  const DualPoint pts[] = {DualPoint::engel(1.0, 0.0), DualPoint::engel(0.5, 3.0)};
  const double ss[] = {100.0, 316.22776601683796, 1000.0};
  CountingReport r = counting_bound_check(GroupId::Engel, pts, ss, {}, 2);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.bounded);
  CHECK(r.slope < 1.5);
  for (const auto& row : r.rows) {
    CHECK(row.max_count > 0);
    CHECK(row.ratio <= r.empirical_constant);
  }
  CHECK(r.to_json().find("\"empirical_constant\"") != std::string::npos);

  const DualPoint one[] = {DualPoint::engel(1.0, 0.0)};
  const double low[] = {1.0};
  CountingReport z = counting_bound_check(GroupId::Engel, one, low);
  CHECK(z.rows[0].max_count == 0);
  CHECK(z.rows[0].ratio == 0.0);

  CHECK_THROWS(counting_bound_check(GroupId::Cartan, one, low));
}

TEST_CASE("log_log_fit") {
  const double x[] = {1.0, 10.0, 100.0};
  const double y[] = {2.0, 2000.0, 2e6};
  LogFit f = log_log_fit(x, y);
  CHECK(f.slope == doctest::Approx(3.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(2.0));
  CHECK(f.residual < 1e-12);
}
