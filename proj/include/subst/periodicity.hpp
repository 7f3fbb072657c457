#ifndef SUBSTLIB_PERIODICITY_HPP_
#define SUBSTLIB_PERIODICITY_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "language.hpp"
#include "system.hpp"
#include "word.hpp"

namespace subst {

//! u = v^k with v primitive (not a proper power). Via the border array:
//! the smallest period of u divides |u| exactly when u is a power.
inline std::pair<Word, std::size_t> primitive_root(Word const& u) {
  if (u.empty()) {
    throw validation_error("primitive root of the empty word");
  }
  auto border = detail::border_array(u);
  std::size_t period = u.size() - border.back();
  if (u.size() % period == 0) {
    return {Word(u.begin(), u.begin() + period), u.size() / period};
  }
  return {u, 1};
}

//! Bounded ultimate-periodicity verdict. NoPeriodFound is explicitly a
//! bounded statement about the searched window, never a proof.
struct PeriodicityCertificate {
  bool        periodic = false;
  std::size_t preperiod = 0;   // p, minimal overall
  std::size_t period = 0;      // q, minimal for that p
  std::size_t verified_to = 0; // prefix length used
  std::size_t max_preperiod = 0;
  std::size_t max_period = 0;
};

namespace detail {

//! Z-array: z[i] = length of the longest common prefix of w and w[i..).
inline std::vector<std::size_t> z_array(Word const& w) {
  std::size_t const n = w.size();
  std::vector<std::size_t> z(n, 0);
  if (n == 0) {
    return z;
  }
  z[0] = n;
  std::size_t l = 0, r = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (i < r) {
      z[i] = std::min(r - i, z[i - l]);
    }
    while (i + z[i] < n && w[z[i]] == w[i + z[i]]) {
      ++z[i];
    }
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
  }
  return z;
}

}  // namespace detail

//! Search for the lexicographically-minimal (p, q) — p first, then q —
//! with x[i] = x[i + q] for all p <= i < N - q, within the given caps.
//! One Z-pass over the reversed prefix yields, for every shift q, the
//! longest suffix match of x against x shifted by q, hence the minimal
//! preperiod for that q.
inline PeriodicityCertificate detect_ultimate_periodicity(
    Word const& x, std::size_t max_preperiod, std::size_t max_period) {
  PeriodicityCertificate cert;
  cert.verified_to   = x.size();
  cert.max_preperiod = max_preperiod;
  cert.max_period    = max_period;
  if (max_period < 1) {
    throw validation_error("max_period must be at least 1");
  }
  if (x.size() < max_preperiod + 2 * max_period) {
    throw validation_error("prefix too short for the requested caps");
  }
  Word rev(x.rbegin(), x.rend());
  auto z = detail::z_array(rev);
  std::size_t const N = x.size();

  std::optional<std::size_t> best_p, best_q;
  for (std::size_t q = 1; q <= max_period; ++q) {
    // longest common suffix of x[0..N) and x[0..N-q)
    std::size_t match = std::min(z[q], N - q);
    std::size_t p     = N - q - match;
    if (p > max_preperiod) {
      continue;
    }
    if (!best_p || p < *best_p) {
      best_p = p;
      best_q = q;
      if (p == 0) {
        break;  // no smaller preperiod exists; q is minimal for p = 0
      }
    }
  }
  if (best_p) {
    cert.periodic  = true;
    cert.preperiod = *best_p;
    cert.period    = *best_q;
  }
  return cert;
}

inline PeriodicityCertificate detect_ultimate_periodicity(
    SubstitutionSystem const& sys, std::size_t N, std::size_t max_preperiod,
    std::size_t max_period) {
  return detect_ultimate_periodicity(image_prefix(sys, N), max_preperiod,
                                     max_period);
}

//! Independent re-check of a claimed (p, q): streams the image sequence and
//! compares x[i] with x[i + q] directly, sharing no code with the detector.
inline bool verify_periodicity(SubstitutionSystem const& sys, std::size_t p,
                               std::size_t q, std::size_t N) {
  if (q < 1) {
    throw validation_error("period must be at least 1");
  }
  if (N < p + q) {
    return true;  // nothing to check in the window
  }
  if (sys.sigma_erasing() || sys.phi_erasing()) {
    Word x = image_prefix(sys, N);
    for (std::size_t i = p; i + q < N; ++i) {
      if (x[i] != x[i + q]) {
        return false;
      }
    }
    return true;
  }
  ImageStream stream{sys};
  for (std::size_t i = p; i + q < N; ++i) {
    if (stream.at(i) != stream.at(i + q)) {
      return false;
    }
  }
  return true;
}

}  // namespace subst

#endif  // SUBSTLIB_PERIODICITY_HPP_
