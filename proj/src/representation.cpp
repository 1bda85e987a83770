#include "nilspec/representation.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace nilspec {

DualPoint DualPoint::engel(double lambda, double mu) {
  DualPoint p{GroupId::Engel, lambda, mu, 0.0};
  p.validate();
  return p;
}

DualPoint DualPoint::cartan(double lambda, double mu, double nu) {
  DualPoint p{GroupId::Cartan, lambda, mu, nu};
  p.validate();
  return p;
}

double DualPoint::rho() const { return group == GroupId::Engel ? lambda * lambda : lambda * lambda + mu * mu; }

void DualPoint::validate(double eps) const {
  if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(nu))
    throw DualPointError("dual point has non-finite parameters");
  if (group == GroupId::Engel) {
    if (std::abs(lambda) < eps) {
      std::ostringstream os;
      os << "Engel dual point requires |lambda| >= " << eps << " (lambda != 0), got lambda=" << lambda;
      throw DualPointError(os.str());
    }
    return;
  }
  if (lambda * lambda + mu * mu < eps * eps) {
    std::ostringstream os;
    os << "Cartan dual point requires lambda^2 + mu^2 >= " << eps * eps << " (lambda^2+mu^2 != 0), got lambda=" << lambda
       << " mu=" << mu;
    throw DualPointError(os.str());
  }
}

GridFunction::GridFunction(double half_width, std::vector<Complex> values)
    : half_width_(half_width), values_(std::move(values)) {
  if (!(half_width_ > 0.0)) throw std::invalid_argument("GridFunction: half-width must be positive");
  if (values_.size() < 2) throw std::invalid_argument("GridFunction: need at least two points");
}

double GridFunction::norm() const {
  double s = 0.0;
  for (const Complex& v : values_) s += std::norm(v);
  s -= 0.5 * (std::norm(values_.front()) + std::norm(values_.back()));
  return std::sqrt(s * step());
}

void GridFunction::write_csv(std::ostream& os) const {
  os << "u,re,im\n" << std::setprecision(17);
  for (std::size_t k = 0; k < values_.size(); ++k)
    os << point(k) << ',' << values_[k].real() << ',' << values_[k].imag() << '\n';
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size() || a.half_width() != b.half_width())
    throw std::invalid_argument("GridFunction: grids differ");
  std::vector<Complex> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] - b[k];
  return GridFunction(a.half_width(), std::move(v));
}

GridFunction operator*(double s, const GridFunction& a) {
  std::vector<Complex> v(a.values());
  for (Complex& c : v) c *= s;
  return GridFunction(a.half_width(), std::move(v));
}

double translation(const DualPoint& pi, const GroupElement<double>& g) {
  if (g.group() != pi.group) throw GroupError("representation and group element belong to different groups");
  if (pi.group == GroupId::Engel) return g[0];
  return (pi.lambda * g[0] + pi.mu * g[1]) / pi.rho();
}

double phase(const DualPoint& pi, const GroupElement<double>& g, double u) {
  if (g.group() != pi.group) throw GroupError("representation and group element belong to different groups");
  const double l = pi.lambda, m = pi.mu, n = pi.nu;
  const auto& x = g.coords();
  if (pi.group == GroupId::Engel) return -m / (2.0 * l) * x[1] + l * x[3] - l * x[2] * u + 0.5 * l * x[1] * u * u;

  // Cartan: the unique phase that makes pi a homomorphism for the group law in
  // use while differentiating to the frame symbols (see symbol_direction).
  const double r = pi.rho();
  const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4];
  const double a = m * x1 - l * x2;
  const double cubic = l * l * x1 * x1 * x1 + 3.0 * l * m * x1 * x1 * x2 + 3.0 * m * m * x1 * x2 * x2 - l * m * x2 * x2 * x2;
  return -0.5 * n * a / r + l * x4 + m * x5 - m * cubic / (6.0 * r) -
         (r * x3 + m * m * x1 * x2 + 0.5 * l * m * (x1 * x1 - x2 * x2)) * u - 0.5 * r * a * u * u;
}

namespace {

GroupElement<double> aligned_suggestion(const DualPoint& pi, const GroupElement<double>& g, double step) {
  std::vector<double> c = g.coords();
  const double target = std::round(translation(pi, g) / step) * step;
  if (pi.group == GroupId::Engel) {
    c[0] = target;
  } else if (std::abs(pi.lambda) >= std::abs(pi.mu)) {
    c[0] = (target * pi.rho() - pi.mu * c[1]) / pi.lambda;
  } else {
    c[1] = (target * pi.rho() - pi.lambda * c[0]) / pi.mu;
  }
  return GroupElement<double>(g.group(), std::move(c));
}

}  // namespace

RepResult apply_rep(const DualPoint& pi, const GroupElement<double>& g, const GridFunction& h, const RepOptions& opts) {
  pi.validate();
  const double step = h.step();
  const double shift = translation(pi, g) / step;
  const double whole = std::round(shift);
  if (std::abs(shift - whole) > opts.alignment_tolerance) {
    GroupElement<double> sugg = aligned_suggestion(pi, g, step);
    std::ostringstream os;
    os << std::setprecision(17) << "translation of " << shift << " grid steps is not an integer; nearest aligned element: (";
    for (std::size_t k = 0; k < sugg.coords().size(); ++k) os << (k ? "," : "") << sugg[k];
    os << ")";
    throw AlignmentError(os.str(), std::move(sugg));
  }
  const auto m = static_cast<long long>(whole);
  const auto n = static_cast<long long>(h.size());
  std::vector<Complex> out(h.size(), Complex(0.0, 0.0));
  double kept = 0.0, total = 0.0;
  for (long long j = 0; j < n; ++j) total += std::norm(h[static_cast<std::size_t>(j)]);
  for (long long k = 0; k < n; ++k) {
    const long long src = k + m;
    if (src < 0 || src >= n) continue;
    const Complex v = h[static_cast<std::size_t>(src)];
    kept += std::norm(v);
    const double ph = phase(pi, g, h.point(static_cast<std::size_t>(k)));
    out[static_cast<std::size_t>(k)] = Complex(std::cos(ph), std::sin(ph)) * v;
  }
  RepResult res{GridFunction(h.half_width(), std::move(out)), 0.0, false};
  res.lost_mass = total > 0.0 ? std::sqrt(std::max(0.0, total - kept) / total) : 0.0;
  res.boundary_warning = res.lost_mass > opts.boundary_tolerance;
  return res;
}

FirstOrderSymbol<double> symbol_vector_field(const DualPoint& pi, int i) {
  pi.validate();
  return symbol_vector_field<double>(pi.group, pi.lambda, pi.mu, pi.nu, i);
}

std::vector<double> symbol_direction(GroupId g, int i) {
  if (i < 1 || i > dimension(g)) throw DualPointError("symbol_direction: index out of range");
  std::vector<double> v(static_cast<std::size_t>(dimension(g)), 0.0);
  v[static_cast<std::size_t>(i - 1)] = (g == GroupId::Cartan && i == 3) ? -1.0 : 1.0;
  return v;
}

GridFunction apply_symbol(const FirstOrderSymbol<double>& s, const GridFunction& h) {
  const std::size_t n = h.size();
  const double dx = h.step();
  std::vector<Complex> out(n);
  // sixth-order central differences, falling back to lower order near the ends
  static constexpr double w6[] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  static constexpr double w4[] = {2.0 / 3.0, -1.0 / 12.0};
  for (std::size_t k = 0; k < n; ++k) {
    Complex d(0.0, 0.0);
    if (s.derivative != 0.0) {
      const std::size_t room = std::min(k, n - 1 - k);
      if (room >= 3) {
        for (std::size_t j = 1; j <= 3; ++j) d += w6[j - 1] * (h[k + j] - h[k - j]);
      } else if (room == 2) {
        for (std::size_t j = 1; j <= 2; ++j) d += w4[j - 1] * (h[k + j] - h[k - j]);
      } else if (room == 1) {
        d = 0.5 * (h[k + 1] - h[k - 1]);
      } else {
        d = (k == 0) ? h[1] - h[0] : h[n - 1] - h[n - 2];
      }
      d /= dx;
    }
    const double u = h.point(k);
    Complex m(0.0, 0.0), up(1.0, 0.0);
    for (const auto& c : s.multiplier) {
      m += Complex(c.re, c.im) * up;
      up *= u;
    }
    out[k] = m * h[k] + s.derivative * d;
  }
  return GridFunction(h.half_width(), std::move(out));
}

double infinitesimal_check(const DualPoint& pi, int i, const GridFunction& h, double t, const RepOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("infinitesimal_check: step must be positive");
  std::vector<double> v = symbol_direction(pi.group, i);
  std::vector<double> plus(v), minus(v);
  for (std::size_t k = 0; k < v.size(); ++k) {
    plus[k] = t * v[k];
    minus[k] = -t * v[k];
  }
  const RepResult fp = apply_rep(pi, GroupElement<double>(pi.group, plus), h, opts);
  const RepResult fm = apply_rep(pi, GroupElement<double>(pi.group, minus), h, opts);
  const GridFunction fd = (0.5 / t) * (fp.value - fm.value);
  return (fd - apply_symbol(symbol_vector_field(pi, i), h)).norm();
}

}  // namespace nilspec
