#pragma once

// Right-hand side of the L^p -> L^q multiplier bound
// sup_s phi(s) tau(E_(0,s))^(1/p - 1/q) for tau(s) ~ s^e, e = 3 (Engel) or 9/2 (Cartan).

#include "nilspec/dual_trace.hpp"
#include "nilspec/group.hpp"

#include <string>
#include <vector>

namespace nilspec {

class MultiplierError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 1 < p <= 2 <= q < infinity; 1/r = 1/p - 1/q.
class ExponentPair {
 public:
  ExponentPair(double p, double q);
  double p() const { return p_; }
  double q() const { return q_; }
  double inv_r() const { return 1.0 / p_ - 1.0 / q_; }

 private:
  double p_, q_;
};

/// phi with phi(0) = 1, non-increasing, phi -> 0.
class PhiFunction {
 public:
  enum class Kind { Power, Heat, Custom };

  /// (1 + s)^-alpha, alpha >= 0.
  static PhiFunction power(double alpha);
  /// exp(-t s), t > 0.
  static PhiFunction heat(double t);
  /// Table on a log grid (s strictly increasing, positive); interpolated
  /// linearly in (log s, log phi), phi = 1 at s = 0, power-law tail beyond.
  static PhiFunction custom(std::vector<double> s, std::vector<double> phi);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  double operator()(double s) const;
  /// log phi(s), finite wherever phi > 0.
  double log_value(double s) const;
  /// Log-log slope of the tabulated tail (custom only).
  double tail_slope() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Power;
  double param_ = 0.0;
  std::vector<double> log_s_, log_phi_;
};

/// 3 (Engel) or 9/2 (Cartan).
double trace_exponent(GroupId g);

struct SupResult {
  double value = 0.0;        ///< closed form when known, numeric otherwise; +inf if divergent
  bool finite = true;
  double numeric = 0.0;      ///< golden-section result on the truncated range
  double argmax = 0.0;       ///< s where the numeric maximum sits
  bool has_closed_form = false;
  double closed_form = 0.0;
  double rel_err = 0.0;      ///< |numeric - closed_form| / closed_form
};

/// sup_{s > 0} phi(s) s^k for k >= 0.
SupResult sup_power(const PhiFunction& phi, double k);

/// sup_{s > 0} phi(s) s^{e/r}.
SupResult sup_bound(const PhiFunction& phi, GroupId g, const ExponentPair& pq);

/// Closed form sup (1 + s)^-alpha s^k.
double power_sup_closed_form(double alpha, double k);
/// Closed form sup exp(-t s) s^k.
double heat_sup_closed_form(double t, double k);

struct SobolevResult {
  bool pass = false;
  double margin = 0.0;  ///< a - b - e/r
};
SobolevResult sobolev_check(GroupId g, double a, double b, const ExponentPair& pq);

struct HeatDecay {
  double constant = 1.0;  ///< (e/r)^(e/r) exp(-e/r)
  double exponent = 0.0;  ///< e (1/p - 1/q)
  double sup = 0.0;       ///< numeric sup of exp(-t s) s^{e/r}
  double rel_err = 0.0;   ///< against constant * t^-exponent
};
HeatDecay heat_decay(GroupId g, const ExponentPair& pq, double t);

/// sup_s phi(s) (exp(intercept) s^slope)^(1/r) with the fitted trace in place of s^e.
SupResult end_to_end_bound(const PhiFunction& phi, const ExponentPair& pq, const GrowthFit& fit);

/// JSON record {group, p, q, phi, sup, finite, closed_form, rel_err}.
std::string sup_record_json(GroupId g, const ExponentPair& pq, const PhiFunction& phi, const SupResult& r);

}  // namespace nilspec
