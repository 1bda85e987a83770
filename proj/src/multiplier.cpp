#include "nilspec/multiplier.hpp"

#include <boost/math/tools/minima.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nilspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogLo = -8.0 * 2.302585092994046;  // log 1e-8
constexpr double kLogHi = 8.0 * 2.302585092994046;   // log 1e8

// x^x with 0^0 = 1
double self_power(double x) { return x == 0.0 ? 1.0 : std::pow(x, x); }

}  // namespace

ExponentPair::ExponentPair(double p, double q) : p_(p), q_(q) {
  if (!(p > 1.0) || !(p <= 2.0) || !(q >= 2.0) || !std::isfinite(q)) {
    std::ostringstream os;
    os << "exponents must satisfy 1 < p <= 2 <= q < infinity, got p=" << p << " q=" << q;
    throw MultiplierError(os.str());
  }
}

PhiFunction PhiFunction::power(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw MultiplierError("power phi needs exponent a - b >= 0");
  PhiFunction f;
  f.kind_ = Kind::Power;
  f.param_ = alpha;
  return f;
}

PhiFunction PhiFunction::heat(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw MultiplierError("heat phi needs t > 0");
  PhiFunction f;
  f.kind_ = Kind::Heat;
  f.param_ = t;
  return f;
}

PhiFunction PhiFunction::custom(std::vector<double> s, std::vector<double> phi) {
  if (s.size() != phi.size() || s.size() < 3) throw MultiplierError("custom phi needs at least 3 (s, phi) pairs");
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!(s[k] > 0.0) || !std::isfinite(s[k])) throw MultiplierError("custom phi: s values must be positive");
    if (!(phi[k] > 0.0) || phi[k] > 1.0) throw MultiplierError("custom phi: values must lie in (0, 1]");
    if (k > 0 && !(s[k] > s[k - 1])) throw MultiplierError("custom phi: s must be strictly increasing");
    if (k > 0 && phi[k] > phi[k - 1]) throw MultiplierError("custom phi: phi must be non-increasing");
  }
  const double ratio = std::log(s[1] / s[0]);
  for (std::size_t k = 2; k < s.size(); ++k)
    if (std::abs(std::log(s[k] / s[k - 1]) - ratio) > 1e-6 * std::abs(ratio))
      throw MultiplierError("custom phi: s must be a logarithmic grid");
  PhiFunction f;
  f.kind_ = Kind::Custom;
  for (std::size_t k = 0; k < s.size(); ++k) {
    f.log_s_.push_back(std::log(s[k]));
    f.log_phi_.push_back(std::log(phi[k]));
  }
  if (!(f.tail_slope() < 0.0)) throw MultiplierError("custom phi: table tail must decay (phi -> 0)");
  return f;
}

double PhiFunction::tail_slope() const {
  if (kind_ != Kind::Custom) throw MultiplierError("tail_slope is defined for tabulated phi only");
  const std::size_t n = log_s_.size();
  return (log_phi_[n - 1] - log_phi_[n - 2]) / (log_s_[n - 1] - log_s_[n - 2]);
}

double PhiFunction::log_value(double s) const {
  if (s < 0.0) throw MultiplierError("phi is defined for s >= 0");
  switch (kind_) {
    case Kind::Power:
      return -param_ * std::log1p(s);
    case Kind::Heat:
      return -param_ * s;
    case Kind::Custom:
      break;
  }
  if (s == 0.0) return 0.0;
  const double ls = std::log(s);
  if (ls <= log_s_.front()) {
    // linear in s between (0, 1) and the first node
    const double s0 = std::exp(log_s_.front());
    return std::log1p((std::exp(log_phi_.front()) - 1.0) * s / s0);
  }
  if (ls >= log_s_.back()) return log_phi_.back() + tail_slope() * (ls - log_s_.back());
  const auto it = std::upper_bound(log_s_.begin(), log_s_.end(), ls);
  const std::size_t k = static_cast<std::size_t>(it - log_s_.begin());
  const double w = (ls - log_s_[k - 1]) / (log_s_[k] - log_s_[k - 1]);
  return log_phi_[k - 1] + w * (log_phi_[k] - log_phi_[k - 1]);
}

double PhiFunction::operator()(double s) const { return std::exp(log_value(s)); }

std::string PhiFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Power:
      os << "power(" << param_ << ")";
      break;
    case Kind::Heat:
      os << "heat(" << param_ << ")";
      break;
    case Kind::Custom:
      os << "custom(" << log_s_.size() << " nodes)";
      break;
  }
  return os.str();
}

double trace_exponent(GroupId g) { return g == GroupId::Engel ? 3.0 : 4.5; }

double power_sup_closed_form(double alpha, double k) {
  if (k == 0.0) return 1.0;
  if (alpha < k) return kInf;
  if (alpha == k) return 1.0;
  return std::exp(k * std::log(k) + (alpha - k) * std::log(alpha - k) - alpha * std::log(alpha));
}

double heat_sup_closed_form(double t, double k) {
  if (k == 0.0) return 1.0;
  return std::exp(k * std::log(k / t) - k);
}

SupResult sup_power(const PhiFunction& phi, double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw MultiplierError("sup exponent must be finite and >= 0");
  auto logf = [&](double x) { return phi.log_value(std::exp(x)) + k * x; };

  // coarse scan at half-decade spacing, then Brent (golden section with
  // parabolic steps) around the best grid point
  const double step = 0.5 * 2.302585092994046;
  const int n = static_cast<int>(std::lround((kLogHi - kLogLo) / step));
  int best = 0;
  double best_val = -kInf;
  for (int i = 0; i <= n; ++i) {
    const double v = logf(kLogLo + i * step);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = kLogLo + std::max(0, best - 1) * step;
  const double b = kLogLo + std::min(n, best + 1) * step;
  auto neg = [&](double x) { return -logf(x); };
  const auto r = boost::math::tools::brent_find_minima(neg, a, b, std::numeric_limits<double>::digits);
  double xbest = kLogLo + best * step, vbest = best_val;
  if (-r.second > vbest) {
    xbest = r.first;
    vbest = -r.second;
  }

  SupResult res;
  res.numeric = std::exp(vbest);
  res.argmax = std::exp(xbest);
  switch (phi.kind()) {
    case PhiFunction::Kind::Power:
      res.has_closed_form = true;
      res.closed_form = power_sup_closed_form(phi.parameter(), k);
      res.finite = std::isfinite(res.closed_form);
      break;
    case PhiFunction::Kind::Heat:
      res.has_closed_form = true;
      res.closed_form = heat_sup_closed_form(phi.parameter(), k);
      break;
    case PhiFunction::Kind::Custom:
      res.finite = k == 0.0 || phi.tail_slope() <= -k;
      break;
  }
  if (res.has_closed_form && res.finite) res.rel_err = std::abs(res.numeric - res.closed_form) / res.closed_form;
  res.value = !res.finite ? kInf : res.has_closed_form ? res.closed_form : res.numeric;
  return res;
}

SupResult sup_bound(const PhiFunction& phi, GroupId g, const ExponentPair& pq) {
  return sup_power(phi, trace_exponent(g) * pq.inv_r());
}

SobolevResult sobolev_check(GroupId g, double a, double b, const ExponentPair& pq) {
  SobolevResult r;
  r.margin = a - b - trace_exponent(g) * pq.inv_r();
  r.pass = r.margin >= 0.0;
  return r;
}

HeatDecay heat_decay(GroupId g, const ExponentPair& pq, double t) {
  const double k = trace_exponent(g) * pq.inv_r();
  HeatDecay h;
  h.exponent = trace_exponent(g) * pq.inv_r();
  h.constant = self_power(k) * std::exp(-k);
  h.sup = sup_power(PhiFunction::heat(t), k).numeric;
  const double closed = h.constant * std::pow(t, -h.exponent);
  h.rel_err = std::abs(h.sup - closed) / closed;
  return h;
}

SupResult end_to_end_bound(const PhiFunction& phi, const ExponentPair& pq, const GrowthFit& fit) {
  if (fit.s_grid.empty()) throw MultiplierError("end_to_end_bound needs a completed growth fit");
  const double ir = pq.inv_r();
  SupResult r = sup_power(phi, fit.slope * ir);
  const double scale = std::exp(fit.intercept * ir);
  r.numeric *= scale;
  r.closed_form *= scale;
  if (r.finite) r.value *= scale;
  return r;
}

std::string sup_record_json(GroupId g, const ExponentPair& pq, const PhiFunction& phi, const SupResult& r) {
  nlohmann::json j;
  j["group"] = group_name(g);
  j["p"] = pq.p();
  j["q"] = pq.q();
  j["phi"] = phi.describe();
  j["sup"] = r.finite ? nlohmann::json(r.value) : nlohmann::json("inf");
  j["finite"] = r.finite;
  j["closed_form"] = r.has_closed_form ? (std::isfinite(r.closed_form) ? nlohmann::json(r.closed_form) : nlohmann::json("inf"))
                                       : nlohmann::json(nullptr);
  j["rel_err"] = r.has_closed_form && r.finite ? nlohmann::json(r.rel_err) : nlohmann::json(nullptr);
  j["note"] = "bound holds up to the unspecified constant of the multiplier theorem";
  return j.dump(2);
}

}  // namespace nilspec
