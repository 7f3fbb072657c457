#ifndef SUBSTLIB_ALGEBRAIC_HPP_
#define SUBSTLIB_ALGEBRAIC_HPP_

#include <cassert>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "polynomial.hpp"
#include "word.hpp"

namespace subst {

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kIsolationBits        = 128;

//! A real algebraic number: the unique root of a square-free integer
//! polynomial inside an open rational interval whose endpoints are not
//! roots. Built as the largest real root of a characteristic polynomial, so
//! for non-negative matrices it is the dominating (Perron) eigenvalue.
//!
//! Rational values collapse to an exact representation as soon as they are
//! detected. Interval refinement never changes the value; instances are not
//! safe to refine concurrently.
class PerronValue {
 public:
  PerronValue() = default;

  //! Largest real root of p. Throws when p has no real root.
  static PerronValue largest_real_root(IntPoly p) {
    PerronValue v;
    v.charpoly_ = std::move(p);
    v.isolator_ = squarefree_part(v.charpoly_);
    if (v.isolator_.degree() < 1) {
      throw validation_error("polynomial has no roots");
    }
    v.sturm_.emplace(v.isolator_);
    Int b = root_bound(v.isolator_);
    v.lo_ = Rat(-b);
    v.hi_ = Rat(b);
    if (v.sturm_->count(v.lo_, v.hi_) == 0) {
      throw validation_error("polynomial has no real roots");
    }
    // Shrink until exactly the largest root remains.
    while (!v.exact_ && v.sturm_->count(v.lo_, v.hi_) > 1) {
      v.bisect_once();
    }
    v.refine_width(Rat(1, 4));
    v.detect_integer();
    if (!v.exact_) {
      v.refine_bits(kIsolationBits);
    }
    return v;
  }

  static PerronValue integer(Int k) {
    PerronValue v;
    v.charpoly_ = IntPoly({-k, Int(1)});
    v.isolator_ = v.charpoly_;
    v.exact_    = Rat(k);
    v.lo_ = *v.exact_;
    v.hi_ = *v.exact_;
    return v;
  }

  //! Reconstruct from a serialized (charpoly, interval) pair. The interval
  //! must isolate one root of the square-free part, or be a degenerate
  //! rational root.
  static PerronValue from_charpoly_interval(IntPoly p, Rat lo, Rat hi) {
    PerronValue v;
    v.charpoly_ = std::move(p);
    v.isolator_ = squarefree_part(v.charpoly_);
    if (v.isolator_.degree() < 1) {
      throw validation_error("polynomial has no roots");
    }
    v.sturm_.emplace(v.isolator_);
    v.lo_ = std::move(lo);
    v.hi_ = std::move(hi);
    if (v.lo_ == v.hi_) {
      if (v.isolator_.eval(v.lo_) != 0) {
        throw validation_error("degenerate interval is not a root");
      }
      v.exact_ = v.lo_;
      return v;
    }
    if (v.lo_ > v.hi_ || v.isolator_.sign_at(v.lo_) == 0
        || v.isolator_.sign_at(v.hi_) == 0
        || v.sturm_->count(v.lo_, v.hi_) != 1) {
      throw validation_error("interval does not isolate a root");
    }
    return v;
  }

  IntPoly const& charpoly() const noexcept { return charpoly_; }
  IntPoly const& isolator() const noexcept { return isolator_; }

  bool is_exact() const noexcept { return exact_.has_value(); }
  bool is_integer() const noexcept {
    return exact_ && exact_->get_den() == 1;
  }
  Int integer_value() const {
    if (!is_integer()) {
      throw validation_error("value is not an exact integer");
    }
    return exact_->get_num();
  }
  std::optional<Rat> const& exact_rational() const noexcept { return exact_; }

  //! Current isolating interval (degenerate when exact).
  Rat const& lower() const noexcept { return lo_; }
  Rat const& upper() const noexcept { return hi_; }

  void refine_bits(unsigned bits) {
    Rat w(1);
    w /= Rat(Int(1) << std::min(bits, 16u * 1024u));
    refine_width(w);
  }

  void refine_width(Rat const& target) {
    while (!exact_ && hi_ - lo_ > target) {
      bisect_once();
    }
  }

  Rat midpoint() const {
    if (exact_) {
      return *exact_;
    }
    Rat m = lo_ + hi_;
    m /= 2;
    return m;
  }

  double to_double() const { return midpoint().get_d(); }

  //! Decimal rendering of the value to the requested digits (truncated).
  std::string decimal(unsigned digits = 15) {
    if (!exact_) {
      refine_bits(4 * digits + 8);  // 10^-digits > 2^-(4 digits + 8)
    }
    Rat m    = midpoint();
    bool neg = sgn(m) < 0;
    if (neg) {
      m = -m;
    }
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Rat scaled = m * Rat(scale);
    Int whole  = scaled.get_num() / scaled.get_den();
    std::string s = whole.get_str();
    if (s.size() <= digits) {
      s.insert(0, digits + 1 - s.size(), '0');
    }
    s.insert(s.size() - digits, ".");
    if (neg) {
      s.insert(0, "-");
    }
    return s;
  }

  //! Exact equality, decided in one shot: equal values share a root of
  //! gcd(isolators) inside the intersection of the isolating intervals.
  friend bool equals(PerronValue& a, PerronValue& b) {
    if (a.exact_ && b.exact_) {
      return *a.exact_ == *b.exact_;
    }
    if (a.exact_) {
      return b.contains_rational(*a.exact_);
    }
    if (b.exact_) {
      return a.contains_rational(*b.exact_);
    }
    Rat lo = std::max(a.lo_, b.lo_);
    Rat hi = std::min(a.hi_, b.hi_);
    if (lo >= hi) {
      return false;
    }
    IntPoly g = poly_gcd(a.isolator_, b.isolator_);
    if (g.degree() < 1) {
      return false;
    }
    // Interval endpoints are never roots of the isolators, hence not of g.
    return SturmChain(g).count(lo, hi) > 0;
  }

  //! Exact three-way comparison; refines both operands as needed.
  friend int compare(PerronValue& a, PerronValue& b) {
    if (equals(a, b)) {
      return 0;
    }
    for (int round = 0; round < 8192; ++round) {
      if (a.hi_ <= b.lo_) {
        return -1;
      }
      if (b.hi_ <= a.lo_) {
        return 1;
      }
      a.bisect_once();
      b.bisect_once();
    }
    throw validation_error("precision exhaustion comparing algebraic numbers");
  }

  //! Exact comparison with an integer.
  int compare_int(Int const& k) {
    Rat kk(k);
    if (exact_) {
      return cmp(*exact_, kk);
    }
    if (contains_rational(kk)) {
      return 0;
    }
    for (int round = 0; round < 8192; ++round) {
      if (hi_ <= kk) {
        return -1;
      }
      if (lo_ >= kk) {
        return 1;
      }
      bisect_once();
    }
    throw validation_error("precision exhaustion comparing with integer");
  }

  bool operator==(PerronValue const& o) const {
    return charpoly_ == o.charpoly_ && exact_ == o.exact_;
  }

 private:
  //! True iff the value equals r; collapses to exact when it does.
  bool contains_rational(Rat const& r) {
    if (exact_) {
      return *exact_ == r;
    }
    if (r <= lo_ || r >= hi_) {
      return false;
    }
    if (isolator_.eval(r) == 0) {
      exact_ = r;
      lo_ = hi_ = r;
      return true;
    }
    return false;
  }

  //! One bisection step preserving: open interval, endpoints non-roots,
  //! exactly the tracked root inside (or last root when still isolating).
  void bisect_once() {
    if (exact_) {
      return;
    }
    Rat mid = (lo_ + hi_) / 2;
    if (isolator_.sign_at(mid) != 0) {
      if (sturm_->count(mid, hi_) >= 1) {
        lo_ = mid;
      } else {
        hi_ = mid;
      }
      return;
    }
    // mid is itself a root.
    if (sturm_->count(mid, hi_) == 0) {
      exact_ = mid;
      lo_ = hi_ = mid;
      return;
    }
    // A smaller root sits exactly at mid; step just above it.
    Rat step = (hi_ - mid) / 2;
    for (int j = 0; j < 256; ++j) {
      Rat t = mid + step;
      if (isolator_.sign_at(t) != 0 && sturm_->count(t, hi_) >= 1) {
        lo_ = t;
        return;
      }
      step /= 2;
    }
    throw validation_error("root isolation failed to separate roots");
  }

  void detect_integer() {
    if (exact_ || hi_ - lo_ >= 1) {
      return;
    }
    Int lo_floor;
    mpz_fdiv_q(lo_floor.get_mpz_t(), lo_.get_num().get_mpz_t(),
               lo_.get_den().get_mpz_t());
    for (Int c = lo_floor; c <= lo_floor + 2; ++c) {
      if (contains_rational(Rat(c))) {
        return;
      }
    }
  }

  IntPoly                   charpoly_;
  IntPoly                   isolator_;
  std::optional<SturmChain> sturm_;
  Rat                       lo_{0};
  Rat                       hi_{0};
  std::optional<Rat>        exact_;
};

namespace detail {

//! Double-precision power iteration, used as a debug cross-check only.
//! Returns the estimate when the per-round growth factor stabilizes;
//! periodic or defective matrices may never converge and yield nullopt.
inline std::optional<double> power_iteration_estimate(IntMatrix const& m,
                                                      int max_rounds = 50000) {
  std::size_t const n = m.dim();
  std::vector<double> v(n, 1.0);
  double lambda = 0.0;
  int stable = 0;
  for (int r = 0; r < max_rounds; ++r) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        w[i] += m.at(i, j).get_d() * v[j];
      }
    }
    double norm = 0.0;
    for (double x : w) {
      norm = std::max(norm, std::abs(x));
    }
    if (norm == 0.0) {
      return 0.0;
    }
    if (std::abs(norm - lambda) <= 1e-13 * std::max(1.0, norm)) {
      if (++stable >= 10) {
        return norm;
      }
    } else {
      stable = 0;
    }
    lambda = norm;
    for (auto& x : w) {
      x /= norm;
    }
    v = std::move(w);
  }
  return std::nullopt;
}

}  // namespace detail

//! Dominating eigenvalue of a non-negative integer matrix: the largest real
//! root of the exact characteristic polynomial, which is the Perron root.
inline PerronValue dominant_eigenvalue(IntMatrix const& m) {
  if (m.is_zero()) {
    throw validation_error("dominant eigenvalue of the zero matrix");
  }
  if (!m.is_nonnegative()) {
    throw validation_error("dominant eigenvalue requires a non-negative matrix");
  }
  PerronValue v = PerronValue::largest_real_root(m.charpoly());
#ifndef NDEBUG
  if (m.dim() <= 16) {
    auto est = detail::power_iteration_estimate(m);
    if (est.has_value()) {
      double mine = v.to_double();
      assert(std::abs(*est - mine) <= 1e-9 * std::max(1.0, std::abs(mine)));
    }
  }
#endif
  return v;
}

//! Interval comparison of a^k versus b^l; nullopt while undecided at the
//! current precision. Values must be >= 0.
inline std::optional<int> compare_powers_interval(PerronValue const& a,
                                                  unsigned long k,
                                                  PerronValue const& b,
                                                  unsigned long l) {
  if (a.is_exact() && b.is_exact()) {
    Rat ak = rat_pow(*a.exact_rational(), k);
    Rat bl = rat_pow(*b.exact_rational(), l);
    return cmp(ak, bl);
  }
  Rat alo = std::max(a.lower(), Rat(0)), ahi = a.upper();
  Rat blo = std::max(b.lower(), Rat(0)), bhi = b.upper();
  Rat aklo = rat_pow(alo, k), akhi = rat_pow(ahi, k);
  Rat bllo = rat_pow(blo, l), blhi = rat_pow(bhi, l);
  if (akhi <= bllo) {
    return -1;
  }
  if (blhi <= aklo) {
    return 1;
  }
  return std::nullopt;
}

}  // namespace subst

#endif  // SUBSTLIB_ALGEBRAIC_HPP_
