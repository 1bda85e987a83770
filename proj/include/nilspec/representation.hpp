#pragma once

// Dixmier representations of the Engel and Cartan groups acting on sampled
// functions of one real variable, and the first-order symbols of the frame.

#include "nilspec/group.hpp"
#include "nilspec/poly_diff_op.hpp"
#include "nilspec/scalar.hpp"

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace nilspec {

inline constexpr double kDualEpsilon = 1e-6;

class DualPointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Representation parameters: (lambda, mu) for Engel, (lambda, mu, nu) for Cartan.
struct DualPoint {
  GroupId group = GroupId::Engel;
  double lambda = 1.0;
  double mu = 0.0;
  double nu = 0.0;

  static DualPoint engel(double lambda, double mu);
  static DualPoint cartan(double lambda, double mu, double nu);

  /// lambda^2 + mu^2 (Cartan scale); lambda^2 for Engel.
  double rho() const;

  /// Throws DualPointError unless |lambda| >= eps (Engel) or lambda^2+mu^2 >= eps^2 (Cartan).
  void validate(double eps = kDualEpsilon) const;
};

using Complex = std::complex<double>;

/// Samples on the uniform grid u_k = -L + k * 2L/(n-1), k = 0..n-1.
class GridFunction {
 public:
  GridFunction(double half_width, std::vector<Complex> values);

  template <class F>
  static GridFunction sample(double half_width, std::size_t n, F&& f) {
    std::vector<Complex> v(n);
    GridFunction probe(half_width, std::vector<Complex>(n));
    for (std::size_t k = 0; k < n; ++k) v[k] = f(probe.point(k));
    return GridFunction(half_width, std::move(v));
  }

  double half_width() const { return half_width_; }
  std::size_t size() const { return values_.size(); }
  double step() const { return 2.0 * half_width_ / static_cast<double>(values_.size() - 1); }
  double point(std::size_t k) const { return -half_width_ + static_cast<double>(k) * step(); }
  const std::vector<Complex>& values() const { return values_; }
  const Complex& operator[](std::size_t k) const { return values_[k]; }

  /// Trapezoid-rule L2 norm.
  double norm() const;

  /// Rows "u,re,im" with a header line.
  void write_csv(std::ostream& os) const;

  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(double s, const GridFunction& a);

 private:
  double half_width_;
  std::vector<Complex> values_;
};

struct RepOptions {
  double alignment_tolerance = 1e-9;  ///< in units of the grid step
  double boundary_tolerance = 1e-10;  ///< relative mass allowed to leave the grid
};

struct RepResult {
  GridFunction value;
  double lost_mass = 0.0;  ///< ||dropped samples|| / ||h||
  bool boundary_warning = false;
};

/// Raised when the representation would translate by a non-integer number of
/// grid steps. Carries the nearest group element whose translation is aligned.
class AlignmentError : public std::invalid_argument {
 public:
  AlignmentError(const std::string& what, GroupElement<double> suggestion)
      : std::invalid_argument(what), suggestion_(std::move(suggestion)) {}
  const GroupElement<double>& suggestion() const { return suggestion_; }

 private:
  GroupElement<double> suggestion_;
};

/// Translation amount of pi(g): x1 (Engel), (lambda x1 + mu x2)/(lambda^2+mu^2) (Cartan).
double translation(const DualPoint& pi, const GroupElement<double>& g);

/// Phase Phi with (pi(g)h)(u) = exp(i Phi(u)) h(u + translation).
double phase(const DualPoint& pi, const GroupElement<double>& g, double u);

/// pi(g)h on the grid. The translation must be an integer number of steps;
/// samples translated off the grid are dropped and reported as lost mass.
RepResult apply_rep(const DualPoint& pi, const GroupElement<double>& g, const GridFunction& h,
                    const RepOptions& opts = {});

/// c0(u) + c1 d/du with polynomial c0 (coefficients by power of u).
template <class R>
struct FirstOrderSymbol {
  std::vector<Cplx<R>> multiplier;
  R derivative{};

  PolyDiffOp<Cplx<R>> to_operator() const {
    using C = Cplx<R>;
    PolyDiffOp<C> op(1);
    Polynomial<C> m(1);
    for (std::size_t k = 0; k < multiplier.size(); ++k) m.add_term({static_cast<int>(k)}, multiplier[k]);
    op.add_term({0}, m);
    op.add_term({1}, Polynomial<C>(1, C(derivative)));
    return op;
  }
};

/// Printed infinitesimal symbol pi(X_i), 1-based i, at exact or floating parameters.
template <class R>
FirstOrderSymbol<R> symbol_vector_field(GroupId g, const R& lambda, const R& mu, const R& nu, int i) {
  using C = Cplx<R>;
  if (i < 1 || i > dimension(g)) throw DualPointError("symbol_vector_field: index out of range");
  const R zero(0);
  const R half = R(1) / R(2);
  FirstOrderSymbol<R> s;
  s.derivative = zero;
  if (g == GroupId::Engel) {
    switch (i) {
      case 1:
        s.derivative = R(1);
        break;
      case 2:  // i(-mu/(2 lambda) + lambda u^2 / 2)
        s.multiplier = {C(zero, zero - mu / (R(2) * lambda)), C(zero), C(zero, lambda * half)};
        break;
      case 3:  // -i lambda u
        s.multiplier = {C(zero), C(zero, zero - lambda)};
        break;
      default:  // i lambda
        s.multiplier = {C(zero, lambda)};
    }
    return s;
  }
  const R rho = lambda * lambda + mu * mu;
  switch (i) {
    case 1:
      s.multiplier = {C(zero, zero - nu * mu / (R(2) * rho)), C(zero), C(zero, zero - rho * mu * half)};
      s.derivative = lambda / rho;
      break;
    case 2:
      s.multiplier = {C(zero, lambda * nu / (R(2) * rho)), C(zero), C(zero, rho * lambda * half)};
      s.derivative = mu / rho;
      break;
    case 3:
      s.multiplier = {C(zero), C(zero, rho)};
      break;
    case 4:
      s.multiplier = {C(zero, lambda)};
      break;
    default:
      s.multiplier = {C(zero, mu)};
  }
  return s;
}

FirstOrderSymbol<double> symbol_vector_field(const DualPoint& pi, int i);

/// Printed symbol of the sub-Laplacian X1^2 + X2^2.
template <class R>
PolyDiffOp<Cplx<R>> sublaplacian_symbol(GroupId g, const R& lambda, const R& mu, const R& nu) {
  using C = Cplx<R>;
  using P = Polynomial<C>;
  const P u = P::variable(1, 0);
  const PolyDiffOp<C> d2 = PolyDiffOp<C>::partial(1, 0) * PolyDiffOp<C>::partial(1, 0);
  if (g == GroupId::Engel) {
    P w = C(lambda) * (u * u) - P(1, C(mu / lambda));
    return d2 - PolyDiffOp<C>::multiplication((w * w) / 4);
  }
  const R rho = lambda * lambda + mu * mu;
  P w = C(rho * rho) * (u * u) + P(1, C(nu));
  return C(R(1) / rho) * d2 - PolyDiffOp<C>::multiplication(C(R(1) / (R(4) * rho)) * (w * w));
}

/// Tangent vector v (exponential coordinates) such that the printed symbol of
/// X_i is d/dt pi(t v) at t = 0. This is e_i except for the Cartan X_3 symbol,
/// whose printed sign corresponds to the basis element I_3 = -X_3.
std::vector<double> symbol_direction(GroupId g, int i);

/// Apply a first-order symbol to samples (derivative by central differences).
GridFunction apply_symbol(const FirstOrderSymbol<double>& s, const GridFunction& h);

/// || [pi(exp tV)h - pi(exp -tV)h]/(2t) - sigma_i h ||_2 with V from symbol_direction.
double infinitesimal_check(const DualPoint& pi, int i, const GridFunction& h, double t,
                           const RepOptions& opts = {});

}  // namespace nilspec
