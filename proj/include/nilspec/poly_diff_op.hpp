#pragma once

// Polynomials and polynomial-coefficient differential operators in a fixed
// number of real variables, over an exact (or floating) coefficient field.
//
// Normal form of a PolyDiffOp: every term is  p(x) * d^alpha  with the
// derivatives to the right, terms keyed by alpha in lexicographic order, and
// no zero polynomial stored. Two operators are equal iff their term maps are.

#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nilspec {

using Exponents = std::vector<int>;

namespace detail {

template <class C>
bool is_zero(const C& c) {
  return c == C(0);
}

inline Exponents zero_exponents(int nvars) { return Exponents(static_cast<std::size_t>(nvars), 0); }

inline long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

template <class C>
class Polynomial {
 public:
  using Terms = std::map<Exponents, C>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}
  Polynomial(int nvars, const C& constant) : nvars_(nvars) { add_term(detail::zero_exponents(nvars), constant); }

  static Polynomial variable(int nvars, int index) {
    Exponents e = detail::zero_exponents(nvars);
    e.at(static_cast<std::size_t>(index)) = 1;
    Polynomial p(nvars);
    p.add_term(std::move(e), C(1));
    return p;
  }

  static Polynomial monomial(const Exponents& e, const C& c = C(1)) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Constant term (zero if absent).
  C constant() const {
    auto it = terms_.find(detail::zero_exponents(nvars_));
    return it == terms_.end() ? C(0) : it->second;
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponents& e, const C& c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("Polynomial: exponent length mismatch");
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second = it->second + c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial derivative(int var) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      int k = e[static_cast<std::size_t>(var)];
      if (k == 0) continue;
      Exponents f = e;
      f[static_cast<std::size_t>(var)] = k - 1;
      out.add_term(f, c * C(k));
    }
    return out;
  }

  /// Mixed partial derivative d^alpha.
  Polynomial derivative(const Exponents& alpha) const {
    Polynomial out = *this;
    for (int v = 0; v < nvars_; ++v)
      for (int k = 0; k < alpha[static_cast<std::size_t>(v)]; ++k) out = out.derivative(v);
    return out;
  }

  /// Substitute x_j -> images[j].
  Polynomial compose(const std::vector<Polynomial>& images) const {
    if (static_cast<int>(images.size()) != nvars_) throw std::invalid_argument("Polynomial::compose: arity mismatch");
    const int m = images.empty() ? 0 : images.front().nvars();
    Polynomial out(m);
    for (const auto& [e, c] : terms_) {
      Polynomial term(m, c);
      for (int v = 0; v < nvars_; ++v)
        for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) term = term * images[static_cast<std::size_t>(v)];
      out = out + term;
    }
    return out;
  }

  template <class X>
  X evaluate(const std::vector<X>& x) const {
    X acc = X(0);
    for (const auto& [e, c] : terms_) {
      X t = X(c);
      for (int v = 0; v < nvars_; ++v)
        for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) t = t * x[static_cast<std::size_t>(v)];
      acc = acc + t;
    }
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    Polynomial out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
  }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial out(a.nvars_);
    for (const auto& [e, c] : a.terms_) out.add_term(e, C(0) - c);
    return out;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    Polynomial out(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e = ea;
        for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  friend Polynomial operator*(const C& s, const Polynomial& a) {
    Polynomial out(a.nvars_);
    for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
    return out;
  }
  friend Polynomial operator/(const Polynomial& a, int d) {
    Polynomial out(a.nvars_);
    for (const auto& [e, c] : a.terms_) out.add_term(e, c / d);
    return out;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      bool unit = (c == C(1));
      if (!unit) os << c;
      bool any = false;
      for (int v = 0; v < nvars_; ++v) {
        int k = e[static_cast<std::size_t>(v)];
        if (k == 0) continue;
        if (!unit || any) os << "*";
        os << names[static_cast<std::size_t>(v)];
        if (k > 1) os << "^" << k;
        any = true;
      }
      if (unit && !any) os << c;
    }
    return os.str();
  }

 private:
  static void check_same(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("Polynomial: variable count mismatch");
  }

  int nvars_;
  Terms terms_;
};

template <class C>
class PolyDiffOp {
 public:
  using Terms = std::map<Exponents, Polynomial<C>>;

  explicit PolyDiffOp(int nvars = 0) : nvars_(nvars) {}

  /// The operator d/dx_index.
  static PolyDiffOp partial(int nvars, int index) {
    Exponents a = detail::zero_exponents(nvars);
    a.at(static_cast<std::size_t>(index)) = 1;
    PolyDiffOp op(nvars);
    op.add_term(a, Polynomial<C>(nvars, C(1)));
    return op;
  }

  /// Multiplication by a polynomial.
  static PolyDiffOp multiplication(const Polynomial<C>& p) {
    PolyDiffOp op(p.nvars());
    op.add_term(detail::zero_exponents(p.nvars()), p);
    return op;
  }

  static PolyDiffOp identity(int nvars) { return multiplication(Polynomial<C>(nvars, C(1))); }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Highest total derivative order present, -1 for the zero operator.
  int order() const {
    int d = -1;
    for (const auto& [a, p] : terms_) {
      int s = 0;
      for (int k : a) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponents& alpha, const Polynomial<C>& coeff) {
    if (static_cast<int>(alpha.size()) != nvars_ || coeff.nvars() != nvars_)
      throw std::invalid_argument("PolyDiffOp: arity mismatch");
    if (coeff.is_zero()) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
      terms_.emplace(alpha, coeff);
      return;
    }
    it->second = it->second + coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }

  /// Coefficient of d^alpha (zero polynomial if absent).
  Polynomial<C> coefficient(const Exponents& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Polynomial<C>(nvars_) : it->second;
  }

  Polynomial<C> apply(const Polynomial<C>& f) const {
    Polynomial<C> out(nvars_);
    for (const auto& [alpha, p] : terms_) out = out + p * f.derivative(alpha);
    return out;
  }

  friend PolyDiffOp operator+(const PolyDiffOp& a, const PolyDiffOp& b) {
    PolyDiffOp out = a;
    for (const auto& [alpha, p] : b.terms_) out.add_term(alpha, p);
    return out;
  }
  friend PolyDiffOp operator-(const PolyDiffOp& a) {
    PolyDiffOp out(a.nvars_);
    for (const auto& [alpha, p] : a.terms_) out.add_term(alpha, -p);
    return out;
  }
  friend PolyDiffOp operator-(const PolyDiffOp& a, const PolyDiffOp& b) { return a + (-b); }
  friend PolyDiffOp operator*(const C& s, const PolyDiffOp& a) {
    PolyDiffOp out(a.nvars_);
    for (const auto& [alpha, p] : a.terms_) out.add_term(alpha, s * p);
    return out;
  }

  /// Composition a*b, normalized by the Leibniz rule:
  ///   (p d^alpha)(q d^beta) = sum_{gamma <= alpha} C(alpha,gamma) p (d^gamma q) d^(alpha-gamma+beta).
  friend PolyDiffOp operator*(const PolyDiffOp& a, const PolyDiffOp& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("PolyDiffOp: arity mismatch");
    const int n = a.nvars_;
    PolyDiffOp out(n);
    for (const auto& [alpha, p] : a.terms_) {
      for (const auto& [beta, q] : b.terms_) {
        Exponents gamma = detail::zero_exponents(n);
        for (;;) {
          long long mult = 1;
          Exponents rest = beta;
          for (int v = 0; v < n; ++v) {
            auto k = static_cast<std::size_t>(v);
            mult *= detail::binomial(alpha[k], gamma[k]);
            rest[k] += alpha[k] - gamma[k];
          }
          Polynomial<C> dq = q.derivative(gamma);
          if (!dq.is_zero()) out.add_term(rest, C(static_cast<int>(mult)) * (p * dq));
          // next gamma <= alpha in odometer order
          int v = 0;
          for (; v < n; ++v) {
            auto k = static_cast<std::size_t>(v);
            if (gamma[k] < alpha[k]) {
              ++gamma[k];
              break;
            }
            gamma[k] = 0;
          }
          if (v == n) break;
        }
      }
    }
    return out;
  }

  friend bool operator==(const PolyDiffOp& a, const PolyDiffOp& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [alpha, p] = *it;
      if (!first) os << " + ";
      first = false;
      std::string d;
      for (int v = 0; v < nvars_; ++v) {
        int k = alpha[static_cast<std::size_t>(v)];
        if (k == 0) continue;
        d += "d/d" + names[static_cast<std::size_t>(v)];
        if (k > 1) d += "^" + std::to_string(k);
      }
      std::string ps = p.to_string(names);
      if (d.empty()) {
        os << ps;
      } else if (ps == "1") {
        os << d;
      } else {
        os << "(" << ps << ")*" << d;
      }
    }
    return os.str();
  }

 private:
  int nvars_;
  Terms terms_;
};

template <class C>
PolyDiffOp<C> commutator(const PolyDiffOp<C>& a, const PolyDiffOp<C>& b) {
  return a * b - b * a;
}

}  // namespace nilspec
