#include "doctest.h"

#include "nilspec/multiplier.hpp"

#include <cmath>
#include <random>

using namespace nilspec;

TEST_CASE("exponent pairs") {
  ExponentPair pq(4.0 / 3.0, 4.0);
  CHECK(pq.inv_r() == doctest::Approx(0.5));
  CHECK(ExponentPair(2.0, 2.0).inv_r() == 0.0);
  CHECK_THROWS_AS(ExponentPair(1.0, 4.0), MultiplierError);
  CHECK_THROWS_AS(ExponentPair(2.5, 4.0), MultiplierError);
  CHECK_THROWS_AS(ExponentPair(1.5, 1.9), MultiplierError);
  CHECK_THROWS_AS(ExponentPair(1.5, INFINITY), MultiplierError);
}

TEST_CASE("phi families") {
  CHECK(PhiFunction::power(2.0)(0.0) == 1.0);
  CHECK(PhiFunction::power(2.0)(1.0) == doctest::Approx(0.25));
  CHECK(PhiFunction::heat(0.5)(2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(PhiFunction::power(-1.0), MultiplierError);
  CHECK_THROWS_AS(PhiFunction::heat(0.0), MultiplierError);

  std::vector<double> s, v;
  for (int k = -4; k <= 8; ++k) {
    s.push_back(std::pow(10.0, k));
    v.push_back(std::pow(1.0 + s.back(), -2.0));
  }
  PhiFunction c = PhiFunction::custom(s, v);
  CHECK(c(0.0) == 1.0);
  CHECK(c(100.0) == doctest::Approx(std::pow(101.0, -2.0)));
  CHECK(c.tail_slope() == doctest::Approx(-2.0).epsilon(1e-6));
  for (double x = 1e-6; x < 1e10; x *= 3.7) CHECK(c(x) <= c(x / 3.7) + 1e-15);

  auto bad = v;
  bad[3] = 0.99999;
  CHECK_THROWS_AS(PhiFunction::custom(s, bad), MultiplierError);  // not monotone
  auto grid = s;
  grid[5] *= 1.5;
  CHECK_THROWS_AS(PhiFunction::custom(grid, v), MultiplierError);  // not a log grid
  std::vector<double> flat(v.size(), 0.5);
  CHECK_THROWS_AS(PhiFunction::custom(s, flat), MultiplierError);  // no decay
}

TEST_CASE("p = q = 2 gives phi(0) = 1") {
  ExponentPair pq(2.0, 2.0);
  for (GroupId g : {GroupId::Engel, GroupId::Cartan}) {
    CHECK(sup_bound(PhiFunction::power(1.0), g, pq).value == 1.0);
    CHECK(sup_bound(PhiFunction::heat(0.3), g, pq).value == 1.0);
    CHECK(sup_bound(PhiFunction::heat(0.3), g, pq).numeric == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("heat closed form against golden-section search") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> T(-2.0, 2.0), P(1.05, 2.0), Q(2.0, 20.0);
  for (int k = 0; k < 100; ++k) {
    const double t = std::pow(10.0, T(rng));
    ExponentPair pq(P(rng), Q(rng));
    const double ir = pq.inv_r();
    // (3/(t r))^{3/r} e^{-3/r}
    const double closed = std::pow(3.0 * ir / t, 3.0 * ir) * std::exp(-3.0 * ir);
    SupResult r = sup_bound(PhiFunction::heat(t), GroupId::Engel, pq);
    CHECK(r.finite);
    CHECK(r.value == doctest::Approx(closed).epsilon(1e-12));
    CHECK(std::abs(r.numeric - closed) <= 1e-6 * closed);
    CHECK(r.rel_err <= 1e-6);
  }
}

TEST_CASE("power closed form, divergence and the boundary case") {
  ExponentPair pq(4.0 / 3.0, 4.0);  // 3/r = 1.5
  SupResult edge = sup_bound(PhiFunction::power(1.5), GroupId::Engel, pq);
  CHECK(edge.finite);
  CHECK(edge.value == 1.0);
  CHECK(edge.numeric <= 1.0);
  CHECK(edge.numeric >= 1.0 - 1e-6);

  SupResult div = sup_bound(PhiFunction::power(1.0), GroupId::Engel, pq);
  CHECK_FALSE(div.finite);
  CHECK(std::isinf(div.value));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> A(0.01, 6.0), P(1.05, 2.0), Q(2.0, 20.0);
  for (int k = 0; k < 100; ++k) {
    ExponentPair p2(P(rng), Q(rng));
    const double e = 3.0 * p2.inv_r();
    const double alpha = e + A(rng);
    // maximum at s = e/(alpha - e)
    const double s_star = e / (alpha - e);
    const double oracle = std::pow(s_star, e) * std::pow(1.0 + s_star, -alpha);
    SupResult r = sup_bound(PhiFunction::power(alpha), GroupId::Engel, p2);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(r.rel_err <= 1e-6);
  }
}

TEST_CASE("supremum dominates every sample") {
  ExponentPair pq(1.5, 3.0);
  for (const PhiFunction& phi : {PhiFunction::heat(0.2), PhiFunction::power(4.0)}) {
    for (GroupId g : {GroupId::Engel, GroupId::Cartan}) {
      const double k = trace_exponent(g) * pq.inv_r();
      const SupResult r = sup_bound(phi, g, pq);
      for (double s = 1e-6; s < 1e7; s *= 1.7) CHECK(phi(s) * std::pow(s, k) <= r.value * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("heat scale relation") {
  ExponentPair pq(1.25, 5.0);
  const double k = 4.5 * pq.inv_r();
  const double base = sup_bound(PhiFunction::heat(1.0), GroupId::Cartan, pq).numeric;
  for (double c : {0.01, 0.5, 3.0, 100.0}) {
    const double scaled = sup_bound(PhiFunction::heat(c), GroupId::Cartan, pq).numeric;
    CHECK(scaled == doctest::Approx(base * std::pow(c, -k)).epsilon(1e-6));
  }
}

TEST_CASE("custom tables") {
  std::vector<double> s, v;
  for (int k = -8; k <= 16; ++k) {
    s.push_back(std::pow(10.0, 0.5 * k));
    v.push_back(std::pow(1.0 + s.back(), -3.0));
  }
  PhiFunction c = PhiFunction::custom(s, v);
  ExponentPair pq(4.0 / 3.0, 4.0);
  SupResult r = sup_bound(c, GroupId::Engel, pq);
  CHECK(r.finite);
  CHECK_FALSE(r.has_closed_form);
  // interpolation in log-log is exact on the power-law tail, close elsewhere
  CHECK(r.value == doctest::Approx(power_sup_closed_form(3.0, 1.5)).epsilon(0.05));
  CHECK_FALSE(sup_bound(c, GroupId::Cartan, ExponentPair(1.1, 20.0)).finite);
}

TEST_CASE("sobolev_check") {
  ExponentPair pq(4.0 / 3.0, 4.0);
  SobolevResult e = sobolev_check(GroupId::Engel, 1.5, 0.0, pq);
  CHECK(e.pass);
  CHECK(e.margin == doctest::Approx(0.0).epsilon(1e-15));
  SobolevResult c = sobolev_check(GroupId::Cartan, 2.25, 0.0, pq);
  CHECK(c.pass);
  CHECK(c.margin == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_FALSE(sobolev_check(GroupId::Engel, 1.0, 0.0, pq).pass);
  CHECK_FALSE(sup_bound(PhiFunction::power(1.0), GroupId::Engel, pq).finite);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> A(0.0, 6.0), P(1.01, 2.0), Q(2.0, 30.0);
  for (int k = 0; k < 300; ++k) {
    const double a = A(rng), b = a * A(rng) / 6.0;
    ExponentPair p2(P(rng), Q(rng));
    for (GroupId g : {GroupId::Engel, GroupId::Cartan})
      CHECK(sobolev_check(g, a, b, p2).pass == sup_bound(PhiFunction::power(a - b), g, p2).finite);
  }
}

TEST_CASE("heat_decay") {
  HeatDecay flat = heat_decay(GroupId::Engel, ExponentPair(2.0, 2.0), 3.0);
  CHECK(flat.exponent == 0.0);
  CHECK(flat.constant == 1.0);
  ExponentPair pq(4.0 / 3.0, 4.0);
  for (double t : {0.1, 1.0, 10.0}) {
    HeatDecay h = heat_decay(GroupId::Engel, pq, t);
    CHECK(h.exponent == doctest::Approx(1.5));
    CHECK(h.constant == doctest::Approx(std::pow(1.5, 1.5) * std::exp(-1.5)).epsilon(1e-14));
    CHECK(h.rel_err < 1e-6);
  }
  CHECK(heat_decay(GroupId::Cartan, pq, 1.0).exponent == doctest::Approx(2.25));
  CHECK_THROWS(heat_decay(GroupId::Engel, pq, 0.0));
}

TEST_CASE("end_to_end_bound") {
  ExponentPair pq(4.0 / 3.0, 4.0);
  GrowthFit fit;
  fit.group = GroupId::Engel;
  fit.s_grid = {1.0, 10.0};
  fit.values = {1.0, 1000.0};
  fit.slope = 3.0;
  fit.intercept = 0.0;
  for (const PhiFunction& phi : {PhiFunction::heat(0.7), PhiFunction::power(2.0)}) {
    CHECK(end_to_end_bound(phi, pq, fit).value == sup_bound(phi, GroupId::Engel, pq).value);
  }
  fit.intercept = std::log(8.0);
  CHECK(end_to_end_bound(PhiFunction::heat(1.0), pq, fit).value ==
        doctest::Approx(std::sqrt(8.0) * sup_bound(PhiFunction::heat(1.0), GroupId::Engel, pq).value));
  CHECK_THROWS(end_to_end_bound(PhiFunction::heat(1.0), pq, GrowthFit{}));

  const std::string js = sup_record_json(GroupId::Engel, pq, PhiFunction::power(1.0),
                                         sup_bound(PhiFunction::power(1.0), GroupId::Engel, pq));
  for (const char* key : {"\"group\"", "\"p\"", "\"q\"", "\"phi\"", "\"sup\"", "\"finite\"", "\"closed_form\"", "\"rel_err\""})
    CHECK(js.find(key) != std::string::npos);
}
