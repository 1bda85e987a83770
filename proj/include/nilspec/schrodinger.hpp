#pragma once

// One-dimensional Schrodinger operators -a d^2/du^2 + V(u) with even polynomial
// V: the operator symbols of A (Engel) and B (Cartan), their finite-difference
// discretization, and eigenvalue counting by Sturm sequences.

#include "nilspec/group.hpp"
#include "nilspec/representation.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace nilspec {

class SymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Even polynomial V(u) = sum_k c_k u^{2k}, coercive (leading c_k > 0).
class Potential {
 public:
  explicit Potential(std::vector<double> even_coeffs);

  /// Coefficients by power of u^2.
  const std::vector<double>& even_coefficients() const { return coeffs_; }
  int degree() const { return 2 * static_cast<int>(coeffs_.size() - 1); }

  double operator()(double u) const { return in_square(u * u); }
  /// V as a polynomial in w = u^2.
  double in_square(double w) const;

  double minimum() const { return min_value_; }
  /// Nonnegative point where the minimum is attained.
  double argmin() const { return argmin_; }

  Potential scaled(double c) const;

 private:
  std::vector<double> coeffs_;
  double min_value_ = 0.0;
  double argmin_ = 0.0;
};

/// -kinetic * d^2/du^2 + potential(u).
struct SchrodingerOp {
  double kinetic = 1.0;
  Potential potential;

  SchrodingerOp(double kinetic, Potential potential);
  /// c * op (c > 0).
  SchrodingerOp scaled(double c) const;
};

/// Engel symbol -d^2 + (lambda u^2 - mu/lambda)^2/4 + (lambda u)^2 + lambda^2 + lambda^-2.
SchrodingerOp build_symbol_engel(double lambda, double mu);

/// Cartan symbol -(1/rho) d^2 + (nu + rho^2 u^2)^2/(4 rho) + rho^2 u^2 + rho + lambda^-2 + mu^-2,
/// rho = lambda^2 + mu^2. The inverse-power terms need lambda, mu != 0.
SchrodingerOp build_symbol_cartan(double lambda, double mu, double nu, bool inverse_terms = true);

SchrodingerOp build_symbol(const DualPoint& pi);

/// Sign placed in front of X^{2n} in the generalized family: + iff n is odd.
int family_sign(int n);

/// Generalized non-Rockland family. Engel exponents (n2, n3, n4, n5) for
/// -(X1^2 + X2^{2n2} +- X3^{2n3} +- X4^{2n4} +- X4^{-2n5}); Cartan exponents
/// (n1, ..., n6) for -(X1^2 + X2^{2n1} +- X3^{2n2} +- X4^{2n3} +- X5^{2n4} +- X4^{-2n5} +- X5^{-2n6}).
/// Signs follow family_sign, so every term enters the potential with a plus.
/// Cartan requires n1 = 1: X2 carries d/du there and higher powers are not
/// Schrodinger operators.
SchrodingerOp build_symbol_generalized(const DualPoint& pi, std::span<const int> exponents);

struct TridiagSystem {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;
  double half_width = 0.0;
  double step = 0.0;

  std::size_t size() const { return diagonal.size(); }
};

/// Central second differences on u_k = -L + k h, h = 2L/(n-1), all n points
/// unknowns, zero Dirichlet data one step outside.
TridiagSystem discretize(const SchrodingerOp& op, double half_width, std::size_t n);

/// Number of eigenvalues strictly below s (LDL^T inertia with pivot safeguard).
std::size_t sturm_count(const TridiagSystem& t, double s);

/// Eigenvalues below s, each bracketed to width <= tol, ascending.
std::vector<double> eigenvalues_below(const TridiagSystem& t, double s, double tol);

/// Gershgorin interval containing the spectrum.
std::pair<double, double> gershgorin_bounds(const TridiagSystem& t);

struct SolverConfig {
  double kappa = 4.0;                  ///< domain margin: V(L) >= kappa * s
  double points_per_wavelength = 10.0;
  double tol = 1e-10;                  ///< eigenvalue bracket width
  std::size_t min_points = 64;
  std::size_t max_points = std::size_t{1} << 25;
};

struct DomainChoice {
  double half_width = 0.0;
  std::size_t points = 0;
  std::size_t count = 0;   ///< eigen-count at (half_width, points)
  bool empty = false;      ///< s <= min V: nothing below s
  bool converged = true;   ///< count(n) == count(2n-1) was reached within max_points
};

/// Choose L with V(L) = kappa s and a grid fine enough that the count below s
/// is unchanged when the step is halved.
DomainChoice auto_domain(const SchrodingerOp& op, double s, const SolverConfig& cfg = {});

/// N(s) at the automatically chosen discretization.
std::size_t counting_function(const SchrodingerOp& op, double s, const SolverConfig& cfg = {});

/// Eigenvalues below s at the automatically chosen discretization.
std::vector<double> spectrum_below(const SchrodingerOp& op, double s, const SolverConfig& cfg = {});

}  // namespace nilspec
