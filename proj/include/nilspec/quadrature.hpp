#pragma once

// One-dimensional quadrature rules and a deterministic summation helper.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nilspec {

enum class QuadRule { GaussLegendre, Midpoint };

const char* quad_rule_name(QuadRule r);
QuadRule parse_quad_rule(const std::string& s);

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule on [a, b].
Rule1D make_rule(QuadRule kind, std::size_t n, double a, double b);

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
Rule1D gauss_legendre(std::size_t n);

/// Sum in a fixed pairwise order, independent of how the terms were produced.
double pairwise_sum(std::span<const double> v);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod integration of a smooth integrand on [a, b].
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol);

}  // namespace nilspec
