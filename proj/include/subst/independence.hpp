#ifndef SUBSTLIB_INDEPENDENCE_HPP_
#define SUBSTLIB_INDEPENDENCE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebraic.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "word.hpp"

namespace subst {

//! Multiplicative (in)dependence verdict. Dependent verdicts carry the
//! minimal exponents with alpha^k = beta^l certified exactly. Independent
//! verdicts are exact for the integer path (bound = 0) and bounded
//! otherwise: no relation with max(k, l) <= bound exists.
struct IndependenceVerdict {
  bool          dependent = false;
  unsigned long k = 0;
  unsigned long l = 0;
  unsigned long bound = 0;  // 0 = exact unbounded decision
  unsigned      bits  = 0;  // interval precision used (0 = integer path)
  std::string   alpha_charpoly, beta_charpoly;
  std::string   note;

  bool exact() const noexcept { return dependent || bound == 0; }
};

namespace detail {

//! Prime factorization by trial division; refuses composites beyond reach.
inline std::vector<std::pair<Int, unsigned long>> factorize(Int n) {
  std::vector<std::pair<Int, unsigned long>> out;
  auto strip = [&](Int const& p) {
    unsigned long e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++e;
    }
    if (e > 0) {
      out.emplace_back(p, e);
    }
  };
  strip(Int(2));
  Int d(3);
  while (d * d <= n && d < 2000000) {
    strip(d);
    d += 2;
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) {
      throw validation_error("integer too large to factor: " + n.get_str());
    }
    out.emplace_back(n, 1);
  }
  return out;
}

}  // namespace detail

//! Exact, unbounded decision for integers p, q >= 2: multiplicatively
//! dependent iff both are powers of a common integer, detected by
//! proportional prime-exponent signatures. Dependent verdicts carry the
//! minimal exponents.
inline IndependenceVerdict integer_mult_indep(Int const& p, Int const& q) {
  if (p < 2 || q < 2) {
    throw validation_error("integers must be at least 2");
  }
  IndependenceVerdict v;
  auto fp = detail::factorize(p);
  auto fq = detail::factorize(q);
  if (fp.size() != fq.size()) {
    v.note = "different prime supports";
    return v;
  }
  for (std::size_t i = 0; i < fp.size(); ++i) {
    if (fp[i].first != fq[i].first) {
      v.note = "different prime supports";
      return v;
    }
  }
  unsigned long const e0 = fp[0].second, f0 = fq[0].second;
  for (std::size_t i = 0; i < fp.size(); ++i) {
    // exponent vectors proportional: e_i * f_0 == f_i * e_0
    if (fp[i].second * f0 != fq[i].second * e0) {
      v.note = "exponent vectors not proportional";
      return v;
    }
  }
  unsigned long const g = std::gcd(e0, f0);
  v.dependent = true;
  v.k         = f0 / g;
  v.l         = e0 / g;
  v.note      = "p^" + std::to_string(v.k) + " = q^" + std::to_string(v.l);
  return v;
}

namespace detail {

//! Companion matrix of a monic integer polynomial.
inline IntMatrix companion(IntPoly const& p) {
  if (p.degree() < 1 || p.leading() != 1) {
    throw validation_error("companion matrix needs a monic polynomial");
  }
  std::size_t const n = static_cast<std::size_t>(p.degree());
  IntMatrix c(n);
  for (std::size_t i = 1; i < n; ++i) {
    c.at(i, i - 1) = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    c.at(i, n - 1) = -p.coeff(i);
  }
  return c;
}

//! The algebraic number a^k as a PerronValue: defining polynomial from the
//! k-th power of the companion matrix of a's charpoly, isolating interval
//! from a's (refined until it isolates).
inline PerronValue algebraic_power(PerronValue& a, unsigned long k) {
  if (k == 1) {
    return a;
  }
  if (a.is_integer()) {
    Int v;
    mpz_pow_ui(v.get_mpz_t(), a.integer_value().get_mpz_t(), k);
    return PerronValue::integer(v);
  }
  IntPoly defining = companion(a.charpoly()).pow(k).charpoly();
  // a is the dominating root, so a^k dominates the powered spectrum.
  return PerronValue::largest_real_root(defining);
}

}  // namespace detail

//! Bounded decision for Perron values > 1: candidate exponent pairs are
//! screened by interval arithmetic (after a continued-fraction pass over
//! the log ratio for the likely relation), and every surviving candidate is
//! settled exactly through charpoly gcds on matrix powers. Integer inputs
//! delegate to the unbounded integer path.
inline IndependenceVerdict perron_mult_indep(PerronValue& alpha,
                                             PerronValue& beta,
                                             unsigned long K = 64,
                                             unsigned bits = kDefaultPrecisionBits) {
  if (K < 1) {
    throw validation_error("bound must be at least 1");
  }
  if (alpha.compare_int(Int(1)) <= 0 || beta.compare_int(Int(1)) <= 0) {
    throw validation_error("multiplicative independence needs values > 1");
  }
  if (alpha.is_integer() && beta.is_integer()) {
    auto v = integer_mult_indep(alpha.integer_value(), beta.integer_value());
    v.alpha_charpoly = alpha.charpoly().str();
    v.beta_charpoly  = beta.charpoly().str();
    v.note += " (exact integer path)";
    return v;
  }

  alpha.refine_bits(bits);
  beta.refine_bits(bits);

  auto settle = [&](unsigned long k, unsigned long l) -> bool {
    PerronValue ak = detail::algebraic_power(alpha, k);
    PerronValue bl = detail::algebraic_power(beta, l);
    return equals(ak, bl);
  };

  IndependenceVerdict v;
  v.bits           = bits;
  v.alpha_charpoly = alpha.charpoly().str();
  v.beta_charpoly  = beta.charpoly().str();

  // Continued-fraction convergents of log(alpha)/log(beta): if any relation
  // alpha^k = beta^l exists, l/k is a convergent, so this finds dependence
  // fast. Exactness comes from the settle() check, not the doubles.
  {
    double ratio = std::log(alpha.to_double()) / std::log(beta.to_double());
    double x = ratio;
    unsigned long h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // convergent state
    for (int it = 0; it < 48; ++it) {
      double fl = std::floor(x);
      if (fl < 0 || fl > 1e18) {
        break;
      }
      unsigned long ai = static_cast<unsigned long>(fl);
      unsigned long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
      h0 = h1; h1 = h2; k0 = k1; k1 = k2;
      if (k1 > K || h1 > K) {
        break;
      }
      if (k1 >= 1 && h1 >= 1 && settle(k1, h1)) {
        v.dependent = true;
        v.k = k1;
        v.l = h1;
        v.note = "certified shared root of the powered charpolys";
        return v;
      }
      double frac = x - fl;
      if (frac < 1e-15) {
        break;
      }
      x = 1.0 / frac;
    }
  }

  // Complete exact sweep of the grid, smallest relations first. Power
  // intervals are cached; disjointness is an exact exclusion.
  Rat const alo = std::max(alpha.lower(), Rat(0)), ahi = alpha.upper();
  Rat const blo = std::max(beta.lower(), Rat(0)), bhi = beta.upper();
  std::vector<std::pair<Rat, Rat>> apow(K + 1), bpow(K + 1);
  for (unsigned long i = 1; i <= K; ++i) {
    apow[i] = {rat_pow(alo, i), rat_pow(ahi, i)};
    bpow[i] = {rat_pow(blo, i), rat_pow(bhi, i)};
  }
  bool const a_exact = alpha.is_exact(), b_exact = beta.is_exact();
  for (unsigned long s = 2; s <= 2 * K; ++s) {
    for (unsigned long k = std::max<unsigned long>(1, s > K ? s - K : 1);
         k + 1 <= s && k <= K; ++k) {
      unsigned long l = s - k;
      bool overlap;
      if (a_exact && b_exact) {
        overlap = apow[k].first == bpow[l].first;
      } else {
        overlap = !(apow[k].second <= bpow[l].first
                    || bpow[l].second <= apow[k].first);
      }
      if (!overlap) {
        continue;  // exactly excluded by disjoint intervals
      }
      if (settle(k, l)) {
        v.dependent = true;
        v.k = k;
        v.l = l;
        v.note = "certified shared root of the powered charpolys";
        return v;
      }
    }
  }
  v.bound = K;
  v.note  = "no relation with max(k, l) <= " + std::to_string(K);
  return v;
}

}  // namespace subst

#endif  // SUBSTLIB_INDEPENDENCE_HPP_
