#ifndef SUBSTLIB_GROWTH_HPP_
#define SUBSTLIB_GROWTH_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebraic.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "morphism.hpp"
#include "word.hpp"

namespace subst {

//! Mortal letters: sigma^n(a) is eventually empty.
inline std::vector<Letter> mortal_letters(Morphism const& sigma) {
  auto info = mortality(sigma);
  std::vector<Letter> out;
  for (std::size_t a = 0; a < info.mortal.size(); ++a) {
    if (info.mortal[a]) {
      out.push_back(static_cast<Letter>(a));
    }
  }
  return out;
}

//! Growth type of a letter: |sigma^n(a)| ~ c(a) n^d theta^n. theta is the
//! Perron root of the strongest strongly connected component reachable from
//! the letter, and d counts exact theta-ties along the best chain of
//! components.
struct GrowthType {
  bool        mortal = false;
  std::size_t d      = 0;
  PerronValue theta;  // >= 1; meaningless when mortal

  //! Exact order: (d, theta) < (e, beta) iff theta < beta, or equal theta
  //! (decided on charpolys, never floats) and d < e.
  friend bool growth_less(GrowthType& a, GrowthType& b) {
    if (a.mortal != b.mortal) {
      return a.mortal;
    }
    if (a.mortal) {
      return false;
    }
    int c = compare(a.theta, b.theta);
    if (c != 0) {
      return c < 0;
    }
    return a.d < b.d;
  }

  friend bool growth_equal(GrowthType& a, GrowthType& b) {
    if (a.mortal || b.mortal) {
      return a.mortal == b.mortal;
    }
    return a.d == b.d && equals(a.theta, b.theta);
  }

  bool is_growing() {
    if (mortal) {
      return false;
    }
    return d >= 1 || theta.compare_int(1) > 0;
  }
};

struct GrowthSummary {
  PerronValue              Theta;
  std::size_t              D = 0;
  std::vector<Letter>      A_max;
  bool                     growing = false;
  std::vector<GrowthType>  per_letter;
  std::vector<std::string> diagnostics;  // violated internal theory checks
};

namespace detail {

//! Growth analysis of a non-erasing endomorphism: per-SCC Perron roots with
//! exact equality classes, then per-letter (d, theta) via longest-path DP on
//! the condensation counting components whose root ties the maximum.
class GrowthAnalysis {
 public:
  explicit GrowthAnalysis(Morphism const& sigma)
      : sigma_(&sigma), graph_(sigma) {
    if (!sigma.is_endomorphism()) {
      throw validation_error("growth analysis requires an endomorphism");
    }
    if (sigma.is_erasing()) {
      throw validation_error(
          "growth analysis requires a non-erasing substitution; "
          "eliminate erasure first");
    }
    IntMatrix const m = incidence_matrix(sigma);
    std::size_t const nscc = graph_.scc_count();

    // Perron root per cycle component.
    scc_root_.resize(nscc);
    for (std::size_t c = 0; c < nscc; ++c) {
      if (!graph_.has_cycle(c)) {
        continue;
      }
      std::vector<std::size_t> keep;
      for (Letter a : graph_.members(c)) {
        keep.push_back(a);
      }
      scc_root_[c] = dominant_eigenvalue(m.submatrix(keep));
    }

    // Exact equality classes of the roots, ordered ascending.
    class_of_scc_.assign(nscc, SIZE_MAX);
    for (std::size_t c = 0; c < nscc; ++c) {
      if (!graph_.has_cycle(c)) {
        continue;
      }
      std::size_t found = SIZE_MAX;
      for (std::size_t k = 0; k < class_reps_.size(); ++k) {
        if (equals(*scc_root_[c], class_root(k))) {
          found = k;
          break;
        }
      }
      if (found == SIZE_MAX) {
        found = class_reps_.size();
        class_reps_.push_back(c);
      }
      class_of_scc_[c] = found;
    }
    rank_of_class_.resize(class_reps_.size());
    std::vector<std::size_t> order(class_reps_.size());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [this](std::size_t x, std::size_t y) {
      return compare(class_root(x), class_root(y)) < 0;
    });
    for (std::size_t r = 0; r < order.size(); ++r) {
      rank_of_class_[order[r]] = r;
    }

    // Strongest class reachable from each component.
    best_rank_.assign(nscc, SIZE_MAX);
    for (std::size_t c = 0; c < nscc; ++c) {
      std::size_t r = class_of_scc_[c] == SIZE_MAX
                          ? SIZE_MAX
                          : rank_of_class_[class_of_scc_[c]];
      for (std::size_t d : graph_.scc_successors(c)) {
        if (best_rank_[d] != SIZE_MAX
            && (r == SIZE_MAX || best_rank_[d] > r)) {
          r = best_rank_[d];
        }
      }
      best_rank_[c] = r;
    }
    tie_count_.assign(order.size(), {});
  }

  GrowthType letter_growth(Letter a) {
    std::size_t const c = graph_.scc_of(a);
    std::size_t const r = best_rank_[c];
    if (r == SIZE_MAX) {
      throw validation_error("growth type of a mortal letter");
    }
    GrowthType out;
    out.theta = class_root_by_rank(r);
    out.d     = tie_dp(r)[c] - 1;
    return out;
  }

  std::size_t scc_of(Letter a) const { return graph_.scc_of(a); }
  detail::LetterGraph const& graph() const { return graph_; }

 private:
  PerronValue& class_root(std::size_t k) { return *scc_root_[class_reps_[k]]; }

  PerronValue& class_root_by_rank(std::size_t r) {
    for (std::size_t k = 0; k < rank_of_class_.size(); ++k) {
      if (rank_of_class_[k] == r) {
        return class_root(k);
      }
    }
    throw validation_error("internal: unknown growth class rank");
  }

  //! dp[c] = max number of rank-r components on a path starting at c.
  std::vector<std::size_t> const& tie_dp(std::size_t r) {
    auto& dp = tie_count_[r];
    if (!dp.empty()) {
      return dp;
    }
    std::size_t const nscc = graph_.scc_count();
    dp.assign(nscc, 0);
    for (std::size_t c = 0; c < nscc; ++c) {
      std::size_t best = 0;
      for (std::size_t d : graph_.scc_successors(c)) {
        best = std::max(best, dp[d]);
      }
      bool attains = class_of_scc_[c] != SIZE_MAX
                     && rank_of_class_[class_of_scc_[c]] == r;
      dp[c] = best + (attains ? 1 : 0);
    }
    return dp;
  }

  Morphism const*                         sigma_;
  detail::LetterGraph                     graph_;
  std::vector<std::optional<PerronValue>> scc_root_;
  std::vector<std::size_t>                class_of_scc_;   // SIZE_MAX: no cycle
  std::vector<std::size_t>                class_reps_;     // class -> scc
  std::vector<std::size_t>                rank_of_class_;  // ascending value
  std::vector<std::size_t>                best_rank_;      // per scc
  std::vector<std::vector<std::size_t>>   tie_count_;      // per rank
};

}  // namespace detail

inline GrowthType growth_type(Morphism const& sigma, Letter a) {
  detail::GrowthAnalysis analysis(sigma);
  return analysis.letter_growth(a);
}

//! System-level growth summary with the theory cross-checks of the growth
//! proposition recorded as diagnostics.
inline GrowthSummary substitution_growth(Morphism const& sigma) {
  detail::GrowthAnalysis analysis(sigma);
  std::size_t const n = sigma.domain().size();
  GrowthSummary s;
  s.per_letter.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    s.per_letter[a] = analysis.letter_growth(static_cast<Letter>(a));
  }
  std::size_t best = 0;
  for (std::size_t a = 1; a < n; ++a) {
    if (growth_less(s.per_letter[best], s.per_letter[a])) {
      best = a;
    }
  }
  s.Theta = s.per_letter[best].theta;
  s.D     = s.per_letter[best].d;
  for (std::size_t a = 0; a < n; ++a) {
    if (equals(s.per_letter[a].theta, s.Theta) && s.per_letter[a].d == s.D) {
      s.A_max.push_back(static_cast<Letter>(a));
    }
  }
  s.growing = true;
  for (auto& g : s.per_letter) {
    s.growing = s.growing && g.theta.compare_int(1) > 0;
  }

  // Cross-checks from the growth theory; failures indicate internal bugs.
  auto structural_growing = growing_letters(sigma);
  for (std::size_t a = 0; a < n; ++a) {
    if (s.per_letter[a].is_growing() != structural_growing[a]) {
      s.diagnostics.push_back("growth flag mismatch for letter "
                              + sigma.domain().token(static_cast<Letter>(a)));
    }
  }
  if (s.Theta.compare_int(1) == 0) {
    bool has_non_growing = false;
    for (auto& g : s.per_letter) {
      has_non_growing = has_non_growing || !g.is_growing();
    }
    if (!has_non_growing) {
      s.diagnostics.push_back(
          "Theta = 1 but every letter grows; contradicts growth theory");
    }
  }
  detail::LetterGraph const& graph = analysis.graph();
  for (std::size_t a = 0; a < n; ++a) {
    if (s.per_letter[a].d == 0) {
      continue;
    }
    auto reach = graph.reachable_from(static_cast<Letter>(a));
    for (std::size_t i = 0; i <= s.per_letter[a].d; ++i) {
      bool found = false;
      for (std::size_t b = 0; b < n && !found; ++b) {
        found = reach[b] && s.per_letter[b].d == i
                && equals(s.per_letter[b].theta, s.per_letter[a].theta);
      }
      if (!found) {
        s.diagnostics.push_back(
            "missing intermediate growth degree " + std::to_string(i)
            + " below letter " + sigma.domain().token(static_cast<Letter>(a)));
      }
    }
  }
  return s;
}

//! Exact lengths |sigma^n(a)| for n = 0..n_max.
inline std::vector<Int> growth_lengths(Morphism const& sigma, Letter a,
                                       std::size_t n_max) {
  std::size_t const n = sigma.domain().size();
  std::vector<Int> len(n, Int(1));
  std::vector<Int> out{Int(1)};
  for (std::size_t step = 1; step <= n_max; ++step) {
    std::vector<Int> next(n, Int(0));
    for (std::size_t b = 0; b < n; ++b) {
      for (Letter c : sigma.image(static_cast<Letter>(b))) {
        next[b] += len[c];
      }
    }
    len = std::move(next);
    out.push_back(len[a]);
  }
  return out;
}

struct GrowthFit {
  double      c_estimate            = 0.0;
  double      max_relative_residual = 0.0;
  bool        exact_polynomial      = false;  // theta = 1 path
  std::string note;
};

//! Empirical check of the growth law. For theta > 1 the constant is fitted
//! at the last sample and the worst relative deviation over the top half of
//! samples is reported. For theta = 1 the lengths are eventually polynomial
//! along the period of the cycle structure, so vanishing finite differences
//! give an exact match and the constant is the exact leading coefficient.
inline GrowthFit empirical_growth_fit(Morphism const& sigma, Letter a,
                                      std::size_t n_max = 30) {
  if (n_max < 10) {
    throw validation_error("empirical growth fit needs n_max >= 10");
  }
  auto info = mortality(sigma);
  if (info.mortal.at(a)) {
    throw validation_error("empirical growth fit of a mortal letter");
  }
  GrowthType g = growth_type(sigma, a);
  GrowthFit fit;

  // Lengths are eventually quasi-polynomial with this period: the lcm of
  // the imprimitivity indices of the reachable components. Fits are taken
  // along one residue class so the growth law has a single constant.
  detail::LetterGraph graph(sigma);
  auto reach = graph.reachable_from(a);
  std::size_t period = 1;
  for (std::size_t c = 0; c < graph.scc_count(); ++c) {
    bool c_reachable = false;
    for (Letter m : graph.members(c)) {
      c_reachable = c_reachable || reach[m];
    }
    if (c_reachable && graph.has_cycle(c)) {
      period = std::lcm(period, graph.period(c));
    }
  }

  if (g.theta.compare_int(1) == 0) {
    std::size_t const need = g.d + 4;  // samples for vanishing differences
    std::size_t const n0   = sigma.domain().size();
    std::size_t horizon    = std::max(n_max, n0 + (need + 1) * period);
    auto lengths = growth_lengths(sigma, a, horizon);
    std::vector<Rat> samples;
    for (std::size_t i = horizon - (need - 1) * period; i <= horizon;
         i += period) {
      samples.emplace_back(lengths[i]);
    }
    std::vector<Rat> diff = samples;
    for (std::size_t order = 0; order + 1 < samples.size(); ++order) {
      for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
        diff[i] = diff[i + 1] - diff[i];
      }
      diff.pop_back();
      if (order + 1 == g.d) {
        // leading coefficient of the subsampled polynomial, degree d
        Rat lead = diff[0];
        Rat fact(1);
        for (std::size_t f = 2; f <= g.d; ++f) {
          fact *= Rat(static_cast<unsigned long>(f));
        }
        Rat cp = lead / fact;  // coefficient in m^d for step-period samples
        Rat pd = rat_pow(Rat(static_cast<unsigned long>(period)),
                         static_cast<unsigned long>(g.d));
        fit.c_estimate = Rat(cp / pd).get_d();
      }
    }
    bool vanished = true;
    for (auto const& x : diff) {
      vanished = vanished && x == 0;
    }
    if (g.d == 0) {
      fit.c_estimate = Rat(samples.back()).get_d();
    }
    fit.exact_polynomial = vanished;
    if (!vanished) {
      fit.max_relative_residual = 1.0;
      fit.note = "finite differences did not vanish";
    }
    return fit;
  }

  // theta > 1: the lengths are theta^n times an eventually degree-d
  // polynomial (along a residue class), so fit that full polynomial to
  // L(n) / theta^n over the top half of the window by least squares. The
  // leading coefficient is the growth constant; sub-leading terms are
  // modeled instead of polluting the residual. A wrong theta diverges
  // exponentially, a too-small d leaves an unfittable n^d trend.
  std::size_t horizon = std::max(n_max, 3 * period);
  std::size_t const want = 2 * (g.d + 1) + 2;  // samples for the fit
  while (horizon / (2 * period) + 1 < want) {
    horizon += period;
  }
  auto lengths = growth_lengths(sigma, a, horizon);
  g.theta.refine_bits(160);
  Rat th = g.theta.midpoint();

  std::vector<double> ns, ys;
  {
    Rat scale = rat_pow(th, static_cast<unsigned long>(horizon));
    for (std::size_t n = horizon; n > horizon / 2; n -= period) {
      Rat y = Rat(lengths[n]) / scale;
      ns.push_back(double(n) / double(horizon));
      ys.push_back(y.get_d());
      if (n < period) {
        break;
      }
      scale /= rat_pow(th, static_cast<unsigned long>(period));
    }
  }
  std::size_t const terms = g.d + 1;
  // normal equations for p(t) = sum a_j t^j on t = n / horizon
  std::vector<long double> ata(terms * terms, 0.0L), aty(terms, 0.0L);
  for (std::size_t s = 0; s < ns.size(); ++s) {
    long double pw_i = 1.0L;
    std::vector<long double> basis(terms);
    for (std::size_t j = 0; j < terms; ++j) {
      basis[j] = pw_i;
      pw_i *= ns[s];
    }
    for (std::size_t i = 0; i < terms; ++i) {
      for (std::size_t j = 0; j < terms; ++j) {
        ata[i * terms + j] += basis[i] * basis[j];
      }
      aty[i] += basis[i] * ys[s];
    }
  }
  // Gaussian elimination with partial pivoting
  std::vector<long double> coef(terms, 0.0L);
  {
    std::vector<long double> m = ata, rhs = aty;
    for (std::size_t col = 0; col < terms; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < terms; ++r) {
        if (std::abs((double)m[r * terms + col])
            > std::abs((double)m[piv * terms + col])) {
          piv = r;
        }
      }
      for (std::size_t j = 0; j < terms; ++j) {
        std::swap(m[col * terms + j], m[piv * terms + j]);
      }
      std::swap(rhs[col], rhs[piv]);
      for (std::size_t r = 0; r < terms; ++r) {
        if (r == col || m[r * terms + col] == 0.0L) {
          continue;
        }
        long double f = m[r * terms + col] / m[col * terms + col];
        for (std::size_t j = 0; j < terms; ++j) {
          m[r * terms + j] -= f * m[col * terms + j];
        }
        rhs[r] -= f * rhs[col];
      }
    }
    for (std::size_t j = 0; j < terms; ++j) {
      coef[j] = rhs[j] / m[j * terms + j];
    }
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < ns.size(); ++s) {
    long double p = 0.0L, pw = 1.0L;
    for (std::size_t j = 0; j < terms; ++j) {
      p += coef[j] * pw;
      pw *= ns[s];
    }
    if (p <= 0.0L) {
      worst = 1.0;
      fit.note = "fitted polynomial not positive on the window";
      break;
    }
    worst = std::max(worst, std::abs(ys[s] / (double)p - 1.0));
  }
  // leading coefficient in n: a_d / horizon^d
  fit.c_estimate = (double)coef[terms - 1]
                   / std::pow(double(horizon), double(g.d));
  fit.max_relative_residual = worst;
  if (period > 1) {
    fit.note += (fit.note.empty() ? "" : "; ");
    fit.note += "fit along residue class mod " + std::to_string(period);
  }
  return fit;
}

}  // namespace subst

#endif  // SUBSTLIB_GROWTH_HPP_
