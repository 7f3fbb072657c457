#ifndef SUBSTLIB_MATRIX_HPP_
#define SUBSTLIB_MATRIX_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "morphism.hpp"
#include "polynomial.hpp"
#include "word.hpp"

namespace subst {

inline constexpr std::size_t kMaxCharpolyDim = 64;

//! Square matrix of exact integers, row major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n) : n_(n), a_(n * n, Int(0)) {}
  IntMatrix(std::size_t n, std::vector<Int> entries)
      : n_(n), a_(std::move(entries)) {
    if (a_.size() != n_ * n_) {
      throw validation_error("matrix entry count does not match dimension");
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      m.at(i, i) = 1;
    }
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  Int&       at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  Int const& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  bool operator==(IntMatrix const& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(IntMatrix const& o) const { return !(*this == o); }

  bool is_zero() const {
    for (auto const& x : a_) {
      if (x != 0) {
        return false;
      }
    }
    return true;
  }

  bool is_nonnegative() const {
    for (auto const& x : a_) {
      if (sgn(x) < 0) {
        return false;
      }
    }
    return true;
  }

  friend IntMatrix operator*(IntMatrix const& a, IntMatrix const& b) {
    if (a.n_ != b.n_) {
      throw validation_error("matrix dimension mismatch");
    }
    IntMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      for (std::size_t k = 0; k < a.n_; ++k) {
        Int const& aik = a.at(i, k);
        if (aik == 0) {
          continue;
        }
        for (std::size_t j = 0; j < a.n_; ++j) {
          c.at(i, j) += aik * b.at(k, j);
        }
      }
    }
    return c;
  }

  friend IntMatrix operator+(IntMatrix const& a, IntMatrix const& b) {
    if (a.n_ != b.n_) {
      throw validation_error("matrix dimension mismatch");
    }
    IntMatrix c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) {
      c.a_[i] += b.a_[i];
    }
    return c;
  }

  IntMatrix pow(std::size_t k) const {
    IntMatrix result = identity(n_);
    IntMatrix base   = *this;
    while (k > 0) {
      if (k & 1) {
        result = result * base;
      }
      k >>= 1;
      if (k > 0) {
        base = base * base;
      }
    }
    return result;
  }

  Int trace() const {
    Int t(0);
    for (std::size_t i = 0; i < n_; ++i) {
      t += at(i, i);
    }
    return t;
  }

  Int column_sum(std::size_t j) const {
    Int s(0);
    for (std::size_t i = 0; i < n_; ++i) {
      s += at(i, j);
    }
    return s;
  }

  IntMatrix submatrix(std::vector<std::size_t> const& keep) const {
    IntMatrix m(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      for (std::size_t j = 0; j < keep.size(); ++j) {
        m.at(i, j) = at(keep[i], keep[j]);
      }
    }
    return m;
  }

  //! Characteristic polynomial det(xI - M), exact, via Faddeev-LeVerrier.
  //! Refused above kMaxCharpolyDim.
  IntPoly charpoly() const {
    if (n_ > kMaxCharpolyDim) {
      throw validation_error("characteristic polynomial limited to dimension "
                             + std::to_string(kMaxCharpolyDim));
    }
    std::vector<Int> c(n_ + 1, Int(0));
    c[n_] = 1;
    if (n_ == 0) {
      return IntPoly(std::move(c));
    }
    IntMatrix acc = *this;  // M * (previous aux)
    for (std::size_t k = 1; k <= n_; ++k) {
      Int ck = -acc.trace() / Int(static_cast<unsigned long>(k));
      c[n_ - k] = ck;
      if (k < n_) {
        IntMatrix aux = acc;
        for (std::size_t i = 0; i < n_; ++i) {
          aux.at(i, i) += ck;
        }
        acc = *this * aux;
      }
    }
    return IntPoly(std::move(c));
  }

 private:
  std::size_t      n_ = 0;
  std::vector<Int> a_;
};

//! M[i][j] = occurrences of letter i in sigma(j).
inline IntMatrix incidence_matrix(Morphism const& sigma) {
  if (!sigma.is_endomorphism()) {
    throw validation_error("incidence matrix requires an endomorphism");
  }
  std::size_t const n = sigma.domain().size();
  IntMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (Letter i : sigma.image(static_cast<Letter>(j))) {
      m.at(i, j) += 1;
    }
  }
  return m;
}

//! Primitivity via the Wielandt exponent: M is primitive iff
//! M^((n-1)^2 + 1) is entrywise positive. Boolean powers avoid bignum blowup.
inline bool is_primitive(IntMatrix const& m) {
  if (!m.is_nonnegative()) {
    throw validation_error("primitivity requires a non-negative matrix");
  }
  std::size_t const n = m.dim();
  if (n == 0) {
    return false;
  }
  using BoolMat = std::vector<std::vector<bool>>;
  auto mul = [n](BoolMat const& a, BoolMat const& b) {
    BoolMat c(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (a[i][k]) {
          for (std::size_t j = 0; j < n; ++j) {
            if (b[k][j]) {
              c[i][j] = true;
            }
          }
        }
      }
    }
    return c;
  };
  BoolMat base(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      base[i][j] = m.at(i, j) != 0;
    }
  }
  std::size_t e = (n - 1) * (n - 1) + 1;
  BoolMat result(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    result[i][i] = true;
  }
  while (e > 0) {
    if (e & 1) {
      result = mul(result, base);
    }
    e >>= 1;
    if (e > 0) {
      base = mul(base, base);
    }
  }
  for (auto const& row : result) {
    for (bool x : row) {
      if (!x) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace subst

#endif  // SUBSTLIB_MATRIX_HPP_
