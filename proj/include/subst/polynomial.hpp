#ifndef SUBSTLIB_POLYNOMIAL_HPP_
#define SUBSTLIB_POLYNOMIAL_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "word.hpp"  // validation_error

namespace subst {

using Int = mpz_class;
using Rat = mpq_class;

//! Dense univariate polynomial with exact integer coefficients, stored low
//! to high with no trailing zeros. The zero polynomial has no coefficients.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

  static IntPoly constant(Int v) {
    return v == 0 ? IntPoly() : IntPoly(std::vector<Int>{std::move(v)});
  }
  static IntPoly x() { return IntPoly({Int(0), Int(1)}); }

  bool is_zero() const noexcept { return c_.empty(); }
  //! Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  Int const& leading() const { return c_.back(); }
  Int const& coeff(std::size_t i) const {
    static Int const zero(0);
    return i < c_.size() ? c_[i] : zero;
  }
  std::vector<Int> const& coeffs() const noexcept { return c_; }

  bool operator==(IntPoly const& o) const { return c_ == o.c_; }
  bool operator!=(IntPoly const& o) const { return !(*this == o); }

  IntPoly operator-() const {
    IntPoly r = *this;
    for (auto& x : r.c_) {
      x = -x;
    }
    return r;
  }

  friend IntPoly operator+(IntPoly const& a, IntPoly const& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      c[i] += a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
      c[i] += b.c_[i];
    }
    return IntPoly(std::move(c));
  }

  friend IntPoly operator-(IntPoly const& a, IntPoly const& b) {
    return a + (-b);
  }

  friend IntPoly operator*(IntPoly const& a, IntPoly const& b) {
    if (a.is_zero() || b.is_zero()) {
      return IntPoly();
    }
    std::vector<Int> c(a.c_.size() + b.c_.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        c[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return IntPoly(std::move(c));
  }

  friend IntPoly operator*(IntPoly const& a, Int const& s) {
    if (s == 0) {
      return IntPoly();
    }
    IntPoly r = a;
    for (auto& x : r.c_) {
      x *= s;
    }
    return r;
  }

  IntPoly derivative() const {
    if (c_.size() <= 1) {
      return IntPoly();
    }
    std::vector<Int> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) {
      d[i - 1] = c_[i] * Int(static_cast<unsigned long>(i));
    }
    return IntPoly(std::move(d));
  }

  Rat eval(Rat const& x) const {
    Rat acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc = acc * x + Rat(c_[i]);
    }
    return acc;
  }

  Int eval(Int const& x) const {
    Int acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc = acc * x + c_[i];
    }
    return acc;
  }

  int sign_at(Rat const& x) const { return sgn(eval(x)); }

  //! Greatest common divisor of the coefficients, non-negative.
  Int content() const {
    Int g(0);
    for (auto const& x : c_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    return g;
  }

  //! Content-free copy with positive leading coefficient.
  IntPoly primitive_part() const {
    if (is_zero()) {
      return IntPoly();
    }
    Int g = content();
    if (sgn(leading()) < 0) {
      g = -g;
    }
    IntPoly r = *this;
    for (auto& x : r.c_) {
      x /= g;
    }
    return r;
  }

  //! Divide by the positive content, preserving the overall sign.
  IntPoly reduced() const {
    if (is_zero()) {
      return IntPoly();
    }
    Int g = content();
    IntPoly r = *this;
    for (auto& x : r.c_) {
      x /= g;
    }
    return r;
  }

  //! Render as a human-readable polynomial in x, highest degree first.
  std::string str() const {
    if (is_zero()) {
      return "0";
    }
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      Int const& a = c_[i];
      if (a == 0) {
        continue;
      }
      bool neg = sgn(a) < 0;
      Int mag  = abs(a);
      if (out.empty()) {
        out += neg ? "-" : "";
      } else {
        out += neg ? " - " : " + ";
      }
      bool unit = (mag == 1) && i > 0;
      if (!unit) {
        out += mag.get_str();
      }
      if (i >= 1) {
        out += "x";
        if (i >= 2) {
          out += "^" + std::to_string(i);
        }
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) {
      c_.pop_back();
    }
  }
  std::vector<Int> c_;
};

namespace detail {

//! Remainder of f modulo g scaled by a positive integer factor: each
//! reduction step multiplies by |lc(g)|, so the result is rem(f, g) times a
//! positive constant and sign evaluations stay faithful.
inline IntPoly pseudo_rem(IntPoly f, IntPoly const& g) {
  if (g.is_zero()) {
    throw validation_error("pseudo-remainder by zero polynomial");
  }
  long const dg  = g.degree();
  Int const  lga = abs(g.leading());
  int const  lgs = sgn(g.leading());
  while (!f.is_zero() && f.degree() >= dg) {
    long const shift = f.degree() - dg;
    Int const  q     = f.leading() * lgs;
    std::vector<Int> scaled(f.coeffs());
    for (auto& x : scaled) {
      x *= lga;
    }
    IntPoly fs(std::move(scaled));
    std::vector<Int> sub(static_cast<std::size_t>(shift) + g.coeffs().size(),
                         Int(0));
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
      sub[i + shift] = g.coeffs()[i] * q;
    }
    f = fs - IntPoly(std::move(sub));
  }
  return f;
}

}  // namespace detail

//! Polynomial gcd over Q, returned primitive with positive leading
//! coefficient. Primitive pseudo-remainder sequence.
inline IntPoly poly_gcd(IntPoly a, IntPoly b) {
  a = a.primitive_part();
  b = b.primitive_part();
  if (a.is_zero()) {
    return b;
  }
  if (b.is_zero()) {
    return a;
  }
  if (a.degree() < b.degree()) {
    std::swap(a, b);
  }
  while (!b.is_zero()) {
    IntPoly r = detail::pseudo_rem(a, b).primitive_part();
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

//! Exact division over Q, primitivized; requires divisor | dividend in Q[x].
inline IntPoly poly_div_exact(IntPoly const& f, IntPoly const& g) {
  if (g.is_zero()) {
    throw validation_error("division by zero polynomial");
  }
  std::vector<Rat> rem(f.coeffs().size());
  for (std::size_t i = 0; i < rem.size(); ++i) {
    rem[i] = Rat(f.coeffs()[i]);
  }
  long const dg = g.degree();
  long dr = f.degree();
  std::vector<Rat> quo(dr >= dg ? dr - dg + 1 : 0, Rat(0));
  Rat const lg{g.leading()};
  while (dr >= dg) {
    Rat q = rem[dr] / lg;
    quo[dr - dg] = q;
    for (long i = 0; i <= dg; ++i) {
      rem[dr - dg + i] -= q * Rat(g.coeff(i));
    }
    while (dr >= 0 && rem[dr] == 0) {
      --dr;
    }
  }
  if (dr >= 0) {
    throw validation_error("polynomial division is not exact");
  }
  // clear denominators, then primitivize
  Int lcm(1);
  for (auto const& q : quo) {
    Int den = q.get_den();
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
  }
  std::vector<Int> ic(quo.size());
  for (std::size_t i = 0; i < quo.size(); ++i) {
    Rat scaled = quo[i] * Rat(lcm);
    ic[i] = scaled.get_num();
  }
  return IntPoly(std::move(ic)).primitive_part();
}

//! Square-free part f / gcd(f, f'), primitive with positive leading coeff.
inline IntPoly squarefree_part(IntPoly const& f) {
  if (f.is_zero() || f.degree() == 0) {
    return f.primitive_part();
  }
  IntPoly g = poly_gcd(f, f.derivative());
  if (g.degree() == 0) {
    return f.primitive_part();
  }
  return poly_div_exact(f, g);
}

//! Sturm chain over Q for real-root counting.
class SturmChain {
 public:
  explicit SturmChain(IntPoly const& squarefree) {
    if (squarefree.is_zero()) {
      throw validation_error("Sturm chain of the zero polynomial");
    }
    chain_.push_back(squarefree.primitive_part());
    IntPoly d = chain_.front().derivative();
    if (!d.is_zero()) {
      chain_.push_back(d.reduced());
      while (chain_.back().degree() > 0) {
        // pseudo_rem keeps the sign of the true remainder, so negating the
        // primitive part gives a valid Sturm chain member.
        IntPoly r = detail::pseudo_rem(chain_[chain_.size() - 2],
                                       chain_.back());
        if (r.is_zero()) {
          break;
        }
        chain_.push_back(-r.reduced());
      }
    }
  }

  //! Sign variations of the chain at x.
  int variations(Rat const& x) const {
    int v = 0, last = 0;
    for (auto const& p : chain_) {
      int s = p.sign_at(x);
      if (s != 0) {
        if (last != 0 && s != last) {
          ++v;
        }
        last = s;
      }
    }
    return v;
  }

  //! Number of distinct real roots in (a, b]; requires a <= b.
  int count(Rat const& a, Rat const& b) const {
    if (a > b) {
      return 0;
    }
    return variations(a) - variations(b);
  }

 private:
  std::vector<IntPoly> chain_;
};

//! An integer bound B with every real root of f inside (-B, B).
inline Int root_bound(IntPoly const& f) {
  if (f.is_zero()) {
    throw validation_error("root bound of zero polynomial");
  }
  Int const lead = abs(f.leading());
  Int maxc(0);
  for (auto const& c : f.coeffs()) {
    Int a = abs(c);
    if (a > maxc) {
      maxc = a;
    }
  }
  // Cauchy: |root| <= 1 + max|c_i| / |lead|
  Int b = 2 + maxc / lead;
  return b;
}

inline Rat rat_pow(Rat const& x, unsigned long k) {
  Rat r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(x.get_mpq_t()), k);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(x.get_mpq_t()), k);
  r.canonicalize();
  return r;
}

}  // namespace subst

#endif  // SUBSTLIB_POLYNOMIAL_HPP_
