#ifndef SUBSTLIB_NORMALIZE_HPP_
#define SUBSTLIB_NORMALIZE_HPP_

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "morphism.hpp"
#include "polynomial.hpp"
#include "system.hpp"
#include "word.hpp"

namespace subst {

//! Result of rewriting a system as a coding of a non-erasing fixed point:
//! phi(sigma^omega(a)) = psi(tau^omega(b)), with tau = normalized.sigma()
//! non-erasing and psi = normalized.phi() a coding.
//!
//! When the pipeline admits it, gamma carries the intertwiner:
//!     gamma . sigma^k = tau . gamma   and   psi . gamma = phi . sigma^j
//! with j = phi_power. The acceptance contract is behavioral either way:
//! prefix agreement up to verified_depth.
struct NormalizedSystem {
  SubstitutionSystem       original;
  SubstitutionSystem       normalized;
  std::optional<Morphism>  gamma;
  unsigned long            k         = 1;
  unsigned long            phi_power = 0;
  std::size_t              verified_depth = 0;
  std::vector<std::string> trace;
};

namespace detail {

inline constexpr std::size_t kNormalizeImageBudget = std::size_t(4) << 20;

//! power() with a guard on the total image length.
inline Morphism power_with_budget(Morphism const& sigma, unsigned long k,
                                  std::size_t budget = kNormalizeImageBudget) {
  Morphism acc = sigma;
  for (unsigned long i = 1; i < k; ++i) {
    acc = compose(acc, sigma);
    std::size_t total = 0;
    for (auto const& w : acc.images()) {
      total += w.size();
    }
    if (total > budget) {
      throw validation_error("normalization power exceeds image budget");
    }
  }
  return acc;
}

struct PipelineState {
  Morphism                 sigma;  // endomorphism on the working alphabet
  Letter                   start = 0;
  Morphism                 g;      // working image morphism into C*
  std::optional<Morphism>  gamma;  // original alphabet -> working alphabet
  unsigned long            K = 1;  // gamma . sigma0^K = sigma . gamma
  unsigned long            J = 0;  // g . gamma = phi0 . sigma0^J
  std::vector<std::string> trace;
};

struct SubsetMap {
  Alphabet                 alphabet;
  std::vector<std::size_t> remap;  // old id -> new id or SIZE_MAX
  Morphism                 projection;  // old -> new, removed letters -> eps
};

inline SubsetMap make_subset(Alphabet const& from, std::vector<bool> const& keep) {
  SubsetMap out;
  std::vector<std::string> tokens;
  out.remap.assign(from.size(), SIZE_MAX);
  for (std::size_t a = 0; a < from.size(); ++a) {
    if (keep[a]) {
      out.remap[a] = tokens.size();
      tokens.push_back(from.token(static_cast<Letter>(a)));
    }
  }
  if (tokens.empty()) {
    throw validation_error("normalization removed every letter");
  }
  out.alphabet = Alphabet(std::move(tokens));
  std::vector<Word> proj(from.size());
  for (std::size_t a = 0; a < from.size(); ++a) {
    if (keep[a]) {
      proj[a] = Word{static_cast<Letter>(out.remap[a])};
    }
  }
  out.projection = Morphism(from, out.alphabet, std::move(proj));
  return out;
}

inline Word strip_and_remap(Word const& w, std::vector<std::size_t> const& remap) {
  Word out;
  for (Letter b : w) {
    if (remap[b] != SIZE_MAX) {
      out.push_back(static_cast<Letter>(remap[b]));
    }
  }
  return out;
}

inline void compose_gamma(PipelineState& st, Morphism const& step) {
  if (st.gamma) {
    st.gamma = compose(*st.gamma, step);
  }
}

//! Restrict the state to the letters reachable from the start letter.
inline void prune_reachable(PipelineState& st) {
  LetterGraph graph(st.sigma);
  auto mask = graph.reachable_from(st.start);
  bool all = true;
  for (bool m : mask) {
    all = all && m;
  }
  if (all) {
    return;
  }
  SubsetMap sub = make_subset(st.sigma.domain(), mask);
  std::vector<Word> sig, gim;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (!mask[a]) {
      continue;
    }
    // reachable letters have reachable images, so nothing is stripped
    sig.push_back(strip_and_remap(st.sigma.image(static_cast<Letter>(a)),
                                  sub.remap));
    gim.push_back(st.g.image(static_cast<Letter>(a)));
  }
  st.sigma = Morphism(sub.alphabet, sub.alphabet, std::move(sig));
  st.g     = Morphism(sub.alphabet, st.g.codomain(), std::move(gim));
  st.start = static_cast<Letter>(sub.remap[st.start]);
  if (st.gamma) {
    // invalid when a gamma image mentions a pruned letter
    bool ok = true;
    for (auto const& w : st.gamma->images()) {
      for (Letter b : w) {
        ok = ok && sub.remap[b] != SIZE_MAX;
      }
    }
    if (ok) {
      compose_gamma(st, sub.projection);
    } else {
      st.gamma.reset();
      st.trace.push_back("gamma dropped: pruned letters appear in its images");
    }
  }
  st.trace.push_back("pruned to " + std::to_string(sub.alphabet.size())
                     + " reachable letters");
}

//! Mortality removal. With rho = sigma^k1 (k1 = deepest death time) every
//! mortal letter maps directly to the empty word, so the fixed point
//! satisfies x = rho(pi(x)) and the image content of dying letters folds
//! into g . rho before they are deleted.
inline void mortal_fold(PipelineState& st) {
  auto info = mortality(st.sigma);
  if (info.mortal[st.start]) {
    throw validation_error("start letter is mortal");
  }
  unsigned long k1 = std::max<std::size_t>(info.max_death, 1);
  Morphism rho = power_with_budget(st.sigma, k1);
  std::vector<bool> keep(info.mortal.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    keep[a] = !info.mortal[a];
  }
  SubsetMap sub = make_subset(st.sigma.domain(), keep);
  std::vector<Word> sig, gim;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    if (!keep[a]) {
      continue;
    }
    Word const& r = rho.image(static_cast<Letter>(a));
    sig.push_back(strip_and_remap(r, sub.remap));
    gim.push_back(st.g(r));
  }
  st.sigma = Morphism(sub.alphabet, sub.alphabet, std::move(sig));
  st.g     = Morphism(sub.alphabet, st.g.codomain(), std::move(gim));
  st.start = static_cast<Letter>(sub.remap[st.start]);
  compose_gamma(st, sub.projection);
  st.J += st.K * k1;
  st.K *= k1;
  st.trace.push_back("mortality removed at power " + std::to_string(k1));
}

//! Letters whose entire descendant closure is g-erased contribute nothing
//! to the image at any level; deleting them commutes with sigma.
inline bool vanishing_removal(PipelineState& st) {
  std::size_t const n = st.sigma.domain().size();
  std::vector<bool> visible(n);
  for (std::size_t a = 0; a < n; ++a) {
    visible[a] = !st.g.image(static_cast<Letter>(a)).empty();
  }
  // non-vanishing = reaches a visible letter (possibly itself)
  std::vector<std::vector<Letter>> radj(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (Letter b : st.sigma.image(static_cast<Letter>(a))) {
      radj[b].push_back(static_cast<Letter>(a));
    }
  }
  std::vector<bool> keep(n, false);
  std::vector<Letter> stack;
  for (std::size_t a = 0; a < n; ++a) {
    if (visible[a]) {
      keep[a] = true;
      stack.push_back(static_cast<Letter>(a));
    }
  }
  while (!stack.empty()) {
    Letter b = stack.back();
    stack.pop_back();
    for (Letter p : radj[b]) {
      if (!keep[p]) {
        keep[p] = true;
        stack.push_back(p);
      }
    }
  }
  if (!keep[st.start]) {
    throw validation_error("image sequence is finite");
  }
  bool any = false;
  for (bool k : keep) {
    any = any || !k;
  }
  if (!any) {
    return false;
  }
  SubsetMap sub = make_subset(st.sigma.domain(), keep);
  std::vector<Word> sig, gim;
  for (std::size_t a = 0; a < n; ++a) {
    if (!keep[a]) {
      continue;
    }
    sig.push_back(strip_and_remap(st.sigma.image(static_cast<Letter>(a)),
                                  sub.remap));
    gim.push_back(st.g.image(static_cast<Letter>(a)));
  }
  std::size_t removed = n - sub.alphabet.size();
  st.sigma = Morphism(sub.alphabet, sub.alphabet, std::move(sig));
  st.g     = Morphism(sub.alphabet, st.g.codomain(), std::move(gim));
  st.start = static_cast<Letter>(sub.remap[st.start]);
  compose_gamma(st, sub.projection);
  st.trace.push_back("removed " + std::to_string(removed)
                     + (removed == 1 ? " vanishing letter" : " vanishing letters"));
  return true;
}

inline bool has_invisible(PipelineState const& st) {
  for (auto const& w : st.g.images()) {
    if (w.empty()) {
      return true;
    }
  }
  return false;
}

//! Delayed letters are invisible but some descendant is visible. The sets
//! letters(sigma^j(b)) are eventually periodic in j; choosing j* as a large
//! multiple of the common period and replacing (sigma, g) by
//! (sigma^{j*}, g . sigma^{j*}) leaves the image sequence unchanged while
//! every letter becomes visible or outright vanishing.
inline void delayed_pushdown(PipelineState& st) {
  std::size_t const n = st.sigma.domain().size();
  std::vector<std::vector<Letter>> adj(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> seen(n, false);
    for (Letter b : st.sigma.image(static_cast<Letter>(a))) {
      if (!seen[b]) {
        seen[b] = true;
        adj[a].push_back(b);
      }
    }
  }
  auto step = [&](std::vector<bool> const& s) {
    std::vector<bool> t(n, false);
    for (std::size_t a = 0; a < n; ++a) {
      if (s[a]) {
        for (Letter b : adj[a]) {
          t[b] = true;
        }
      }
    }
    return t;
  };
  unsigned long period = 1, preperiod = 0;
  for (std::size_t a = 0; a < n; ++a) {
    std::map<std::vector<bool>, unsigned long> seen_at;
    std::vector<bool> s(n, false);
    s[a] = true;
    unsigned long j = 0;
    while (true) {
      auto it = seen_at.find(s);
      if (it != seen_at.end()) {
        preperiod = std::max(preperiod, it->second);
        period    = std::lcm(period, j - it->second);
        break;
      }
      if (j > 4096) {
        throw validation_error("letter-set orbit did not close");
      }
      seen_at.emplace(s, j);
      s = step(s);
      ++j;
    }
    if (period > 4096) {
      throw validation_error("letter-set orbit period too large");
    }
  }
  unsigned long jstar = period;
  while (jstar < std::max<unsigned long>(preperiod, 1)) {
    jstar += period;
  }
  Morphism spow = power_with_budget(st.sigma, jstar);
  st.g     = compose(spow, st.g);
  st.sigma = spow;
  st.J += st.K * jstar;
  st.K *= jstar;
  st.trace.push_back("pushed the image morphism down " + std::to_string(jstar)
                     + " levels");
}

//! Block construction: letters become (b, i) for i < |g(b)|, the coding
//! reads off single letters, and tau distributes the blocks of sigma^m(b)
//! over the blocks of b. The start block must keep at least two letters so
//! the result is prolongable; letters whose images cannot fill their blocks
//! get empty chunks and the resulting erasure is eliminated by the caller.
inline void block_coding(PipelineState& st) {
  std::size_t const n = st.sigma.domain().size();
  std::vector<std::size_t> need(n);
  std::size_t total_blocks = 0;
  for (std::size_t b = 0; b < n; ++b) {
    need[b] = st.g.image(static_cast<Letter>(b)).size();
    total_blocks += need[b];
  }
  if (total_blocks > kMaxAlphabetSize) {
    throw validation_error("block alphabet would exceed the letter limit");
  }

  // avail_m(b) = |g(sigma^m(b))|
  unsigned long const m_cap = 32;
  std::vector<Int> avail(n);
  for (std::size_t b = 0; b < n; ++b) {
    avail[b] = Int(static_cast<unsigned long>(need[b]));
  }
  unsigned long chosen = 0;
  std::size_t best_score = 0;
  unsigned long best_m = 0;
  for (unsigned long m = 1; m <= m_cap; ++m) {
    std::vector<Int> next(n, Int(0));
    for (std::size_t b = 0; b < n; ++b) {
      for (Letter c : st.sigma.image(static_cast<Letter>(b))) {
        next[b] += avail[c];
      }
    }
    avail = std::move(next);
    bool start_ok = avail[st.start] > Int(static_cast<unsigned long>(need[st.start]));
    std::size_t score = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (avail[b] >= Int(static_cast<unsigned long>(need[b]))) {
        ++score;
      }
    }
    if (start_ok && score > best_score) {
      best_score = score;
      best_m     = m;
    }
    if (start_ok && score == n) {
      chosen = m;
      break;
    }
  }
  if (chosen == 0) {
    if (best_m == 0) {
      throw validation_error(
          "block construction: start letter never expands enough");
    }
    chosen = best_m;  // stuck letters will receive empty chunks
  }

  // Block alphabet with collision-free tokens.
  std::vector<std::string> tokens;
  std::vector<std::vector<Letter>> block_of(n);
  {
    std::map<std::string, bool> used;
    for (auto const& t : st.sigma.domain().tokens()) {
      used[t] = true;
    }
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t i = 0; i < need[b]; ++i) {
        std::string t = st.sigma.domain().token(static_cast<Letter>(b)) + "."
                        + std::to_string(i);
        while (used.count(t)) {
          t += "'";
        }
        used[t] = true;
        block_of[b].push_back(static_cast<Letter>(tokens.size()));
        tokens.push_back(t);
      }
    }
  }
  Alphabet balpha(tokens);

  std::vector<Word> chi_images(n);
  for (std::size_t b = 0; b < n; ++b) {
    chi_images[b] = Word(block_of[b].begin(), block_of[b].end());
  }
  Morphism chi(st.sigma.domain(), balpha, chi_images);

  Morphism spow = power_with_budget(st.sigma, chosen);
  std::vector<Word> tau_images(tokens.size());
  bool erasing_result = false;
  for (std::size_t b = 0; b < n; ++b) {
    Word target = chi(spow.image(static_cast<Letter>(b)));
    std::size_t const k = need[b];
    std::size_t pos = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t take;
      if (target.size() >= k) {
        take = (i == 0) ? target.size() - k + 1 : 1;
      } else {
        take = (i < target.size()) ? 1 : 0;
      }
      if (take == 0) {
        erasing_result = true;
      }
      Word chunk(target.begin() + pos, target.begin() + pos + take);
      tau_images[block_of[b][i]] = std::move(chunk);
      pos += take;
    }
  }
  std::vector<Word> psi_images(tokens.size());
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < need[b]; ++i) {
      psi_images[block_of[b][i]] =
          Word{st.g.image(static_cast<Letter>(b))[i]};
    }
  }

  st.start = block_of[st.start][0];
  st.sigma = Morphism(balpha, balpha, std::move(tau_images));
  st.g     = Morphism(balpha, st.g.codomain(), std::move(psi_images));
  compose_gamma(st, chi);
  st.K *= chosen;
  st.trace.push_back("block coding at power " + std::to_string(chosen)
                     + (erasing_result ? " (with overflow blocks)" : ""));
}

//! Restrict the image codomain to the letters actually used, making g onto.
inline Morphism restrict_codomain(Morphism const& g) {
  std::vector<bool> used(g.codomain().size(), false);
  for (auto const& w : g.images()) {
    for (Letter c : w) {
      used[c] = true;
    }
  }
  bool all = true;
  for (bool u : used) {
    all = all && u;
  }
  if (all) {
    return g;
  }
  std::vector<std::string> tokens;
  std::vector<std::size_t> remap(used.size(), SIZE_MAX);
  for (std::size_t c = 0; c < used.size(); ++c) {
    if (used[c]) {
      remap[c] = tokens.size();
      tokens.push_back(g.codomain().token(static_cast<Letter>(c)));
    }
  }
  Alphabet cod(tokens);
  std::vector<Word> images;
  for (auto const& w : g.images()) {
    Word im;
    for (Letter c : w) {
      im.push_back(static_cast<Letter>(remap[c]));
    }
    images.push_back(std::move(im));
  }
  return Morphism(g.domain(), cod, std::move(images));
}

inline NormalizedSystem run_pipeline(SubstitutionSystem const& sys) {
  if (!image_is_infinite(sys)) {
    throw validation_error("image sequence is finite");
  }
  PipelineState st;
  st.sigma = sys.sigma();
  st.start = sys.start();
  st.g     = sys.phi();
  st.gamma = Morphism::identity(sys.alphabet());

  int const outer_cap = 64;
  for (int round = 0;; ++round) {
    if (round > outer_cap) {
      throw validation_error("normalization did not converge");
    }
    if (st.sigma.is_erasing()) {
      mortal_fold(st);
      prune_reachable(st);
      continue;
    }
    if (vanishing_removal(st)) {
      prune_reachable(st);
      continue;
    }
    if (has_invisible(st)) {
      delayed_pushdown(st);
      continue;
    }
    if (!st.g.is_letter_to_letter()) {
      block_coding(st);
      prune_reachable(st);
      continue;
    }
    break;
  }

  NormalizedSystem out;
  out.original   = sys;
  out.normalized = SubstitutionSystem(st.sigma, st.start,
                                      restrict_codomain(st.g), sys.label());
  out.gamma      = std::move(st.gamma);
  out.k          = st.K;
  out.phi_power  = st.J;
  out.trace      = std::move(st.trace);
  return out;
}

}  // namespace detail

//! Rewrite a system with erasing data (erasing sigma and/or an image
//! morphism that drops or expands letters) as a coding of a non-erasing
//! fixed point. The image sequence is preserved exactly; non-erasing
//! systems whose phi is already a coding are returned unchanged.
inline NormalizedSystem eliminate_erasure(SubstitutionSystem const& sys) {
  return detail::run_pipeline(sys);
}

//! The non-erasing special case: both sigma and phi non-erasing, phi
//! word-valued. Refuses erasing phi.
inline NormalizedSystem morphism_to_coding(SubstitutionSystem const& sys) {
  if (sys.sigma_erasing()) {
    throw validation_error(
        "sigma is erasing: use eliminate_erasure instead");
  }
  if (sys.phi_erasing()) {
    throw validation_error("phi is erasing: use eliminate_erasure instead");
  }
  return detail::run_pipeline(sys);
}

struct AgreementReport {
  bool                       agree = false;
  std::size_t                checked = 0;
  std::optional<std::size_t> mismatch;
};

//! Letter-by-letter comparison of the original image sequence against the
//! normalized one, up to N. A mismatch is a result, not an error.
inline AgreementReport verify_normalization(NormalizedSystem& norm,
                                            std::size_t N) {
  AgreementReport rep;
  rep.checked = N;
  if (N == 0) {
    rep.agree           = true;
    norm.verified_depth = std::max(norm.verified_depth, N);
    return rep;
  }
  Word original = norm.original.sigma_erasing()
                      ? detail::iterate_image_prefix(norm.original, N)
                      : fixed_point_prefix(norm.original, N);
  Word normalized = fixed_point_prefix(norm.normalized, N);

  // The normalized codomain is a sub-alphabet of the original image
  // alphabet; compare through tokens.
  Alphabet const& oc  = norm.original.image_alphabet();
  Alphabet const& nc  = norm.normalized.image_alphabet();
  std::vector<std::size_t> to_orig(nc.size(), SIZE_MAX);
  for (std::size_t c = 0; c < nc.size(); ++c) {
    if (oc.contains(nc.token(static_cast<Letter>(c)))) {
      to_orig[c] = oc.id(nc.token(static_cast<Letter>(c)));
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t mapped = to_orig[normalized[i]];
    if (mapped == SIZE_MAX || mapped != original[i]) {
      rep.mismatch = i;
      return rep;
    }
  }
  rep.agree           = true;
  norm.verified_depth = std::max(norm.verified_depth, N);
  return rep;
}

//! Symbolic check of the intertwining relations carried by gamma.
//! Returns nullopt when gamma is absent.
inline std::optional<bool> verify_intertwiner(NormalizedSystem const& norm) {
  if (!norm.gamma) {
    return std::nullopt;
  }
  Morphism const& gamma = *norm.gamma;
  Morphism sigma0_K = power(norm.original.sigma(),
                            static_cast<std::size_t>(norm.k));
  Morphism lhs = compose(sigma0_K, gamma);
  Morphism rhs = compose(gamma, norm.normalized.sigma());
  if (lhs.images() != rhs.images()) {
    return false;
  }
  Morphism left = compose(gamma, norm.normalized.phi());
  Morphism right = norm.phi_power == 0
                       ? norm.original.phi()
                       : compose(power(norm.original.sigma(),
                                       static_cast<std::size_t>(norm.phi_power)),
                                 norm.original.phi());
  // codomains may differ by unused letters; compare rendered tokens
  if (left.domain() != right.domain()) {
    return false;
  }
  for (std::size_t a = 0; a < left.domain().size(); ++a) {
    Word const& lw = left.image(static_cast<Letter>(a));
    Word const& rw = right.image(static_cast<Letter>(a));
    if (lw.size() != rw.size()) {
      return false;
    }
    for (std::size_t i = 0; i < lw.size(); ++i) {
      if (left.codomain().token(lw[i]) != right.codomain().token(rw[i])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace subst

#endif  // SUBSTLIB_NORMALIZE_HPP_
