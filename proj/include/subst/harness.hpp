#ifndef SUBSTLIB_HARNESS_HPP_
#define SUBSTLIB_HARNESS_HPP_

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "algebraic.hpp"
#include "independence.hpp"
#include "language.hpp"
#include "matrix.hpp"
#include "normalize.hpp"
#include "periodicity.hpp"
#include "system.hpp"
#include "word.hpp"

namespace subst {

struct PrefixAgreementResult {
  bool                       agree = false;
  std::size_t                depth = 0;
  std::optional<std::size_t> mismatch;
};

//! Compare the image sequences of two systems letter by letter (through
//! display tokens, since the image alphabets may be distinct objects).
inline PrefixAgreementResult prefix_agreement(SubstitutionSystem const& a,
                                              SubstitutionSystem const& b,
                                              std::size_t N) {
  PrefixAgreementResult res;
  res.depth = N;
  Word xa = image_prefix(a, N);
  Word xb = image_prefix(b, N);
  Alphabet const& ca = a.image_alphabet();
  Alphabet const& cb = b.image_alphabet();
  std::vector<std::size_t> map_b(cb.size(), SIZE_MAX);
  for (std::size_t c = 0; c < cb.size(); ++c) {
    if (ca.contains(cb.token(static_cast<Letter>(c)))) {
      map_b[c] = ca.id(cb.token(static_cast<Letter>(c)));
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (map_b[xb[i]] == SIZE_MAX || map_b[xb[i]] != xa[i]) {
      res.mismatch = i;
      return res;
    }
  }
  res.agree = true;
  return res;
}

enum class CobhamConclusion {
  ConsistentPeriodic,
  ConsistentDependent,
  TheoremTension,
  Inconclusive,
};

inline std::string to_string(CobhamConclusion c) {
  switch (c) {
    case CobhamConclusion::ConsistentPeriodic: return "ConsistentPeriodic";
    case CobhamConclusion::ConsistentDependent: return "ConsistentDependent";
    case CobhamConclusion::TheoremTension: return "TheoremTension";
    case CobhamConclusion::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct GapEvidence {
  std::string                                      factor;
  std::vector<std::pair<std::size_t, std::size_t>> profile;  // (N, max gap)
  bool                                             plateau = false;
};

struct CobhamOptions {
  std::size_t                N = 100000;
  unsigned long              indep_bound = 64;
  std::optional<std::size_t> max_preperiod;  // default N / 4
  std::optional<std::size_t> max_period;     // default N / 4
  unsigned                   bits = kDefaultPrecisionBits;
  std::size_t                gap_factor_max_len = 2;
};

//! Everything the check observed, with every verdict carrying its bounds.
struct CobhamReport {
  std::string label_a, label_b;

  PrefixAgreementResult agreement;

  PerronValue   alpha_presented, beta_presented;
  PerronValue   alpha, beta;  // of the normalized presentations
  unsigned long norm_power_a = 1, norm_power_b = 1;
  bool          normalized_a = false, normalized_b = false;

  IndependenceVerdict                   independence;
  std::optional<PeriodicityCertificate> periodicity;
  bool                                  periodicity_verified = false;
  std::vector<GapEvidence>              bounded_gaps;

  CobhamConclusion conclusion = CobhamConclusion::Inconclusive;
  std::string      detail;
  std::vector<std::string> notes;

  std::size_t   N = 0;
  unsigned long indep_bound = 0;

  int exit_code() const {
    switch (conclusion) {
      case CobhamConclusion::ConsistentPeriodic:
      case CobhamConclusion::ConsistentDependent: return 0;
      case CobhamConclusion::TheoremTension: return 4;
      case CobhamConclusion::Inconclusive: return 5;
    }
    return 5;
  }
};

//! Confront two substitutive presentations of one sequence with the
//! dichotomy: dependent eigenvalues, or a periodic sequence. Both systems
//! are normalized as needed; all sub-verdicts are bounded and reported
//! with their bounds, so TheoremTension signals a bug or insufficient
//! depth rather than a refutation.
inline CobhamReport cobham_check(SubstitutionSystem const& sys_a,
                                 SubstitutionSystem const& sys_b,
                                 CobhamOptions const& opts = {}) {
  CobhamReport rep;
  rep.label_a     = sys_a.label();
  rep.label_b     = sys_b.label();
  rep.N           = opts.N;
  rep.indep_bound = opts.indep_bound;

  rep.alpha_presented = dominant_eigenvalue(incidence_matrix(sys_a.sigma()));
  rep.beta_presented  = dominant_eigenvalue(incidence_matrix(sys_b.sigma()));

  // The comparison is between coded images; note when the stricter
  // shared-fixed-point setting also applies.
  if (sys_a.alphabet() == sys_b.alphabet() && sys_a.start() == sys_b.start()
      && sys_a.phi_identity() && sys_b.phi_identity()) {
    rep.notes.push_back(
        "both substitutions are prolongable on the same letter of the same "
        "alphabet with identity codings (pure fixed-point setting)");
  }

  NormalizedSystem na = eliminate_erasure(sys_a);
  NormalizedSystem nb = eliminate_erasure(sys_b);
  rep.normalized_a = !(na.normalized == sys_a);
  rep.normalized_b = !(nb.normalized == sys_b);
  rep.norm_power_a = na.k;
  rep.norm_power_b = nb.k;
  if (rep.normalized_a) {
    verify_normalization(na, opts.N);
  }
  if (rep.normalized_b) {
    verify_normalization(nb, opts.N);
  }
  rep.alpha = rep.normalized_a
                  ? dominant_eigenvalue(incidence_matrix(na.normalized.sigma()))
                  : rep.alpha_presented;
  rep.beta  = rep.normalized_b
                  ? dominant_eigenvalue(incidence_matrix(nb.normalized.sigma()))
                  : rep.beta_presented;

  rep.agreement = prefix_agreement(na.normalized, nb.normalized, opts.N);
  rep.independence =
      perron_mult_indep(rep.alpha, rep.beta, opts.indep_bound, opts.bits);

  if (!rep.agreement.agree) {
    rep.conclusion = CobhamConclusion::Inconclusive;
    rep.detail     = "not the same sequence: first mismatch at index "
                     + std::to_string(*rep.agreement.mismatch);
    return rep;
  }
  if (rep.independence.dependent) {
    rep.conclusion = CobhamConclusion::ConsistentDependent;
    rep.detail     = "eigenvalues multiplicatively dependent: alpha^"
                     + std::to_string(rep.independence.k) + " = beta^"
                     + std::to_string(rep.independence.l);
    return rep;
  }

  // Agreeing and (boundedly) independent: the theorem forces periodicity.
  std::size_t cap_p = opts.max_preperiod.value_or(opts.N / 4);
  std::size_t cap_q = std::max<std::size_t>(opts.max_period.value_or(opts.N / 4), 1);
  Word x = image_prefix(na.normalized, opts.N);
  rep.periodicity = detect_ultimate_periodicity(x, cap_p, cap_q);

  for (std::size_t len = 1; len <= opts.gap_factor_max_len; ++len) {
    for (auto const& f : recurrent_factors(na.normalized, len, opts.N)) {
      GapEvidence ev;
      ev.factor = na.normalized.image_alphabet().render(f);
      ev.profile = max_gap_profile(na.normalized, f,
                                   {opts.N / 4, opts.N / 2, opts.N});
      ev.plateau = ev.profile.size() >= 2
                   && ev.profile[ev.profile.size() - 2].second
                          == ev.profile.back().second;
      rep.bounded_gaps.push_back(std::move(ev));
    }
  }

  if (rep.periodicity->periodic) {
    rep.periodicity_verified = verify_periodicity(
        na.normalized, rep.periodicity->preperiod, rep.periodicity->period,
        opts.N);
    rep.conclusion = CobhamConclusion::ConsistentPeriodic;
    rep.detail     = "ultimately periodic with preperiod "
                     + std::to_string(rep.periodicity->preperiod) + " and period "
                     + std::to_string(rep.periodicity->period);
  } else {
    rep.conclusion = CobhamConclusion::TheoremTension;
    rep.detail =
        "prefixes agree to " + std::to_string(opts.N)
        + ", independence holds up to " + std::to_string(opts.indep_bound)
        + ", and no period was found within caps ("
        + std::to_string(cap_p) + ", " + std::to_string(cap_q)
        + "); the theorem forbids this asymptotically, so deepen the bounds";
  }
  return rep;
}

//! Fuzz fixture: two uniform substitutions with given widths presenting the
//! same ultimately periodic word u v^omega, built on letters that track
//! position classes. The eigenvalues are exactly the widths.
inline std::pair<SubstitutionSystem, SubstitutionSystem>
make_agreeing_periodic_pair(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> vlen(1, 4), ulen(0, 3);
  std::uniform_int_distribution<int> sym(0, 2);
  std::size_t const m = vlen(rng);
  std::size_t const r = ulen(rng);
  std::string u, v;
  for (std::size_t i = 0; i < r; ++i) {
    u += static_cast<char>('a' + sym(rng));
  }
  for (std::size_t i = 0; i < m; ++i) {
    v += static_cast<char>('a' + sym(rng));
  }
  static std::vector<std::pair<unsigned long, unsigned long>> const pool{
      {2, 3}, {2, 5}, {3, 5}, {2, 7}, {3, 7}, {6, 10}, {4, 6}, {5, 6}};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  auto [p, q] = pool[pick(rng)];

  auto build = [&](unsigned long width) {
    std::size_t const n = r + m;
    std::vector<std::string> tokens;
    for (std::size_t j = 0; j < r; ++j) {
      tokens.push_back("u" + std::to_string(j));
    }
    for (std::size_t i = 0; i < m; ++i) {
      tokens.push_back("p" + std::to_string(i));
    }
    Alphabet alpha(tokens);
    auto class_of = [&](std::size_t pos) {
      return static_cast<Letter>(pos < r ? pos : r + (pos - r) % m);
    };
    std::vector<Word> images(n);
    for (std::size_t c = 0; c < n; ++c) {
      // representative position of this class
      std::size_t pos = c < r ? c : (r + (c - r));
      Word im;
      for (unsigned long t = 0; t < width; ++t) {
        im.push_back(class_of(pos * width + t));
      }
      images[c] = std::move(im);
    }
    Morphism sigma(alpha, alpha, std::move(images));
    // coding onto the used symbols
    std::string uv = u + v;
    std::vector<std::string> cod_tokens;
    auto cod_id = [&](char ch) {
      std::string t(1, ch);
      for (std::size_t i = 0; i < cod_tokens.size(); ++i) {
        if (cod_tokens[i] == t) {
          return static_cast<Letter>(i);
        }
      }
      cod_tokens.push_back(t);
      return static_cast<Letter>(cod_tokens.size() - 1);
    };
    std::vector<Letter> raw;
    for (char ch : uv) {
      raw.push_back(cod_id(ch));
    }
    Alphabet cod(cod_tokens);
    std::vector<Word> phi_images(n);
    for (std::size_t c = 0; c < n; ++c) {
      phi_images[c] = Word{raw[c]};
    }
    Morphism phi(alpha, cod, std::move(phi_images));
    return SubstitutionSystem(sigma, 0, phi,
                              "uniform" + std::to_string(width));
  };
  return {build(p), build(q)};
}

}  // namespace subst

#endif  // SUBSTLIB_HARNESS_HPP_
