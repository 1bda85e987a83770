#include "nilspec/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nilspec {

const char* quad_rule_name(QuadRule r) { return r == QuadRule::GaussLegendre ? "gauss" : "midpoint"; }

QuadRule parse_quad_rule(const std::string& s) {
  if (s == "gauss" || s == "gl" || s == "gauss-legendre") return QuadRule::GaussLegendre;
  if (s == "midpoint") return QuadRule::Midpoint;
  throw std::invalid_argument("unknown quadrature rule '" + s + "' (expected gauss or midpoint)");
}

Rule1D gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  static std::mutex mu;
  static std::map<std::size_t, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  const int ni = static_cast<int>(n);
  // legendre_p_zeros returns the nonnegative zeros in ascending order
  const std::vector<double> pos = boost::math::legendre_p_zeros<double>(ni);
  Rule1D r;
  auto weight = [ni](double x) {
    const double dp = boost::math::legendre_p_prime<double>(ni, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it == 0.0) continue;
    r.nodes.push_back(-*it);
    r.weights.push_back(weight(*it));
  }
  for (double x : pos) {
    r.nodes.push_back(x);
    r.weights.push_back(weight(x));
  }
  return cache.emplace(n, std::move(r)).first->second;
}

Rule1D make_rule(QuadRule kind, std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("quadrature rule needs at least one node");
  if (!(b > a)) throw std::invalid_argument("quadrature interval must have b > a");
  Rule1D r;
  if (kind == QuadRule::Midpoint) {
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      r.nodes.push_back(a + (static_cast<double>(k) + 0.5) * h);
      r.weights.push_back(h);
    }
    return r;
  }
  r = gauss_legendre(n);
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  for (std::size_t k = 0; k < n; ++k) {
    r.nodes[k] = c + hw * r.nodes[k];
    r.weights[k] *= hw;
  }
  return r;
}

double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (b <= a) return {};
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, rel_tol, &err);
  return {v, err};
}

}  // namespace nilspec
