#include "nilspec/schrodinger.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace nilspec {

namespace {

// Polynomial helpers in w = u^2, coefficients by ascending power.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_pow(const Poly& a, int n) {
  Poly out{1.0};
  for (int k = 0; k < n; ++k) out = poly_mul(out, a);
  return out;
}

void poly_add(Poly& acc, const Poly& b) {
  if (acc.size() < b.size()) acc.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) acc[i] += b[i];
}

double horner(const Poly& c, double w) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * w + *it;
  return v;
}

void require_nonzero(double v, const char* name) {
  if (std::abs(v) < kDualEpsilon) {
    std::ostringstream os;
    os << "symbol requires |" << name << "| >= " << kDualEpsilon << " (" << name << " != 0), got " << name << "=" << v;
    throw SymbolError(os.str());
  }
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

Potential::Potential(std::vector<double> even_coeffs) : coeffs_(std::move(even_coeffs)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.size() < 2 || !(coeffs_.back() > 0.0))
    throw SymbolError("Potential must be coercive: a positive leading coefficient of degree >= 2");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw SymbolError("Potential has non-finite coefficients");

  // Minimize over w >= 0. Critical points of P lie below the Cauchy bound of P'.
  const std::size_t d = coeffs_.size() - 1;
  const double lead = static_cast<double>(d) * coeffs_[d];
  double bound = 0.0;
  for (std::size_t k = 1; k < d; ++k) bound = std::max(bound, std::abs(static_cast<double>(k) * coeffs_[k]) / lead);
  const double wmax = 1.0 + bound;
  constexpr int kSamples = 4096;
  double best_w = 0.0, best = in_square(0.0);
  for (int k = 1; k <= kSamples; ++k) {
    const double w = wmax * k / kSamples;
    const double v = in_square(w);
    if (v < best) {
      best = v;
      best_w = w;
    }
  }
  // golden-section refinement in the neighbouring cells
  double a = std::max(0.0, best_w - wmax / kSamples), b = std::min(wmax, best_w + wmax / kSamples);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = in_square(x1), f2 = in_square(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = in_square(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = in_square(x2);
    }
  }
  for (double w : {a, b, 0.5 * (a + b)}) {
    const double v = in_square(w);
    if (v < best) {
      best = v;
      best_w = w;
    }
  }
  min_value_ = best;
  argmin_ = std::sqrt(best_w);
}

double Potential::in_square(double w) const { return horner(coeffs_, w); }

Potential Potential::scaled(double c) const {
  std::vector<double> out = coeffs_;
  for (double& v : out) v *= c;
  return Potential(std::move(out));
}

SchrodingerOp::SchrodingerOp(double kinetic_, Potential potential_) : kinetic(kinetic_), potential(std::move(potential_)) {
  if (!(kinetic > 0.0) || !std::isfinite(kinetic)) throw SymbolError("kinetic coefficient must be positive");
}

SchrodingerOp SchrodingerOp::scaled(double c) const {
  if (!(c > 0.0)) throw SymbolError("scale factor must be positive");
  return SchrodingerOp(kinetic * c, potential.scaled(c));
}

SchrodingerOp build_symbol_engel(double lambda, double mu) {
  require_nonzero(lambda, "lambda");
  // (lambda w - mu/lambda)^2 / 4 + lambda^2 w + lambda^2 + lambda^-2
  const double l2 = lambda * lambda;
  const double q = mu / lambda;
  Poly v{0.25 * q * q + l2 + 1.0 / l2, -0.5 * lambda * q + l2, 0.25 * l2};
  return SchrodingerOp(1.0, Potential(std::move(v)));
}

SchrodingerOp build_symbol_cartan(double lambda, double mu, double nu, bool inverse_terms) {
  DualPoint{GroupId::Cartan, lambda, mu, nu}.validate();
  if (inverse_terms) {
    require_nonzero(lambda, "lambda");
    require_nonzero(mu, "mu");
  }
  const double r = lambda * lambda + mu * mu;
  // (nu + r^2 w)^2 / (4 r) + r^2 w + r + lambda^-2 + mu^-2
  Poly v{nu * nu / (4.0 * r) + r, nu * r / 2.0 + r * r, r * r * r / 4.0};
  if (inverse_terms) v[0] += 1.0 / (lambda * lambda) + 1.0 / (mu * mu);
  return SchrodingerOp(1.0 / r, Potential(std::move(v)));
}

SchrodingerOp build_symbol(const DualPoint& pi) {
  if (pi.group == GroupId::Engel) return build_symbol_engel(pi.lambda, pi.mu);
  return build_symbol_cartan(pi.lambda, pi.mu, pi.nu);
}

int family_sign(int n) { return (n % 2 != 0) ? 1 : -1; }

SchrodingerOp build_symbol_generalized(const DualPoint& pi, std::span<const int> n) {
  pi.validate();
  const std::size_t expected = pi.group == GroupId::Engel ? 4 : 6;
  if (n.size() != expected)
    throw SymbolError("generalized family expects " + std::to_string(expected) + " exponents for " +
                      std::string(group_name(pi.group)));
  for (int k : n)
    if (2 * k < 2) throw SymbolError("generalized family: every exponent 2n must be >= 2");

  // A term +-X^{2n} with pi(X) = i m(u) contributes -sign * (i m)^{2n} = -sign (-1)^n m^{2n}
  // to the symbol of -( ... ).
  auto coefficient = [](int k) {
    const double c = -family_sign(k) * ((k % 2 == 0) ? 1.0 : -1.0);
    if (c <= 0.0) throw SymbolError("generalized family: sign rule produced a negative potential term");
    return c;
  };

  const double l = pi.lambda, m = pi.mu;
  Poly v{0.0};
  if (pi.group == GroupId::Engel) {
    require_nonzero(l, "lambda");
    const Poly m2{-m / (2.0 * l), l / 2.0};  // lambda u^2/2 - mu/(2 lambda), in w
    Poly t2 = poly_pow(m2, 2 * n[0]);
    for (double& c : t2) c *= coefficient(n[0]);
    poly_add(v, t2);
    Poly t3(static_cast<std::size_t>(n[1]) + 1, 0.0);  // (lambda u)^{2 n3}
    t3.back() = coefficient(n[1]) * ipow(l, 2 * n[1]);
    poly_add(v, t3);
    v[0] += coefficient(n[2]) * ipow(l, 2 * n[2]) + coefficient(n[3]) * ipow(1.0 / l, 2 * n[3]);
    return SchrodingerOp(1.0, Potential(std::move(v)));
  }

  if (n[0] != 1) throw SymbolError("generalized Cartan family: X2 exponent must be 2 (n1 = 1) for a Schrodinger symbol");
  require_nonzero(l, "lambda");
  require_nonzero(m, "mu");
  const double r = pi.rho();
  const double nu = pi.nu;
  poly_add(v, {nu * nu / (4.0 * r), nu * r / 2.0, r * r * r / 4.0});
  Poly t3(static_cast<std::size_t>(n[1]) + 1, 0.0);  // (rho u)^{2 n2}
  t3.back() = coefficient(n[1]) * ipow(r, 2 * n[1]);
  poly_add(v, t3);
  v[0] += coefficient(n[2]) * ipow(l, 2 * n[2]) + coefficient(n[3]) * ipow(m, 2 * n[3]) +
          coefficient(n[4]) * ipow(1.0 / l, 2 * n[4]) + coefficient(n[5]) * ipow(1.0 / m, 2 * n[5]);
  return SchrodingerOp(1.0 / r, Potential(std::move(v)));
}

TridiagSystem discretize(const SchrodingerOp& op, double half_width, std::size_t n) {
  if (!(half_width > 0.0) || n < 3) throw std::invalid_argument("discretize: need L > 0 and n >= 3");
  TridiagSystem t;
  t.half_width = half_width;
  t.step = 2.0 * half_width / static_cast<double>(n - 1);
  const double k = op.kinetic / (t.step * t.step);
  t.diagonal.resize(n);
  t.off_diagonal.assign(n - 1, -k);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = -half_width + static_cast<double>(i) * t.step;
    t.diagonal[i] = 2.0 * k + op.potential(u);
  }
  return t;
}

std::size_t sturm_count(const TridiagSystem& t, double s) {
  const std::size_t n = t.size();
  if (n == 0) return 0;
  double emax = 0.0;
  for (double e : t.off_diagonal) emax = std::max(emax, e * e);
  const double pivmin = DBL_MIN * std::max(1.0, emax);
  std::size_t count = 0;
  double d = t.diagonal[0] - s;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    const double e = t.off_diagonal[i - 1];
    d = (t.diagonal[i] - s) - e * e / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin_bounds(const TridiagSystem& t) {
  double lo = INFINITY, hi = -INFINITY;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off_diagonal[i - 1]);
    if (i + 1 < n) r += std::abs(t.off_diagonal[i]);
    lo = std::min(lo, t.diagonal[i] - r);
    hi = std::max(hi, t.diagonal[i] + r);
  }
  return {lo, hi};
}

std::vector<double> eigenvalues_below(const TridiagSystem& t, double s, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigenvalues_below: tol must be positive");
  std::vector<double> out;
  const std::size_t total = sturm_count(t, s);
  if (total == 0) return out;
  out.reserve(total);
  const double lo = gershgorin_bounds(t).first - tol;

  // depth-first bisection of [a, b) carrying the counts at both ends
  struct Interval {
    double a, b;
    std::size_t ca, cb;
  };
  std::vector<Interval> stack{{lo, s, 0, total}};
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (iv.cb == iv.ca) continue;
    if (iv.b - iv.a <= tol) {
      for (std::size_t k = iv.ca; k < iv.cb; ++k) out.push_back(0.5 * (iv.a + iv.b));
      continue;
    }
    const double mid = 0.5 * (iv.a + iv.b);
    if (mid <= iv.a || mid >= iv.b) {  // interval below floating resolution
      for (std::size_t k = iv.ca; k < iv.cb; ++k) out.push_back(mid);
      continue;
    }
    const std::size_t cm = sturm_count(t, mid);
    // push the upper half first so the lower half is processed first
    stack.push_back({mid, iv.b, cm, iv.cb});
    stack.push_back({iv.a, mid, iv.ca, cm});
  }
  std::sort(out.begin(), out.end());
  return out;
}

DomainChoice auto_domain(const SchrodingerOp& op, double s, const SolverConfig& cfg) {
  DomainChoice dc;
  const Potential& v = op.potential;
  if (!(s > v.minimum())) {
    dc.empty = true;
    return dc;
  }
  // L: outermost solution of V(L) = kappa s
  const double target = cfg.kappa * s;
  double a = v.argmin(), b = std::max(1.0, 2.0 * a);
  while (v(b) < target) {
    a = b;
    b *= 2.0;
  }
  for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
    const double m = 0.5 * (a + b);
    (v(m) < target ? a : b) = m;
  }
  dc.half_width = b;

  const double wavelength = 2.0 * M_PI / std::sqrt(s / op.kinetic);
  const double hmax = wavelength / (2.0 * cfg.points_per_wavelength);
  std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * dc.half_width / hmax)) + 1;
  n = std::max(n, cfg.min_points);

  std::size_t c0 = sturm_count(discretize(op, dc.half_width, n), s);
  for (;;) {
    const std::size_t n2 = 2 * (n - 1) + 1;
    if (n2 > cfg.max_points) {
      dc.converged = false;
      break;
    }
    const std::size_t c1 = sturm_count(discretize(op, dc.half_width, n2), s);
    if (c1 == c0) break;
    n = n2;
    c0 = c1;
  }
  dc.points = n;
  dc.count = c0;
  return dc;
}

std::size_t counting_function(const SchrodingerOp& op, double s, const SolverConfig& cfg) {
  return auto_domain(op, s, cfg).count;
}

std::vector<double> spectrum_below(const SchrodingerOp& op, double s, const SolverConfig& cfg) {
  DomainChoice dc = auto_domain(op, s, cfg);
  if (dc.empty) return {};
  return eigenvalues_below(discretize(op, dc.half_width, dc.points), s, cfg.tol);
}

}  // namespace nilspec
