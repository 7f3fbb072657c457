#ifndef SUBSTLIB_GRAPH_HPP_
#define SUBSTLIB_GRAPH_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "morphism.hpp"
#include "word.hpp"

namespace subst {

//! Per-letter mortality: a is mortal iff sigma^n(a) is eventually empty.
//! Computed as the fixpoint of "image consists only of mortal letters",
//! which converges within |A| rounds. death_time[a] is the least n with
//! sigma^n(a) empty (0 for no letters; meaningful only when mortal[a]).
struct MortalityInfo {
  std::vector<bool>        mortal;
  std::vector<std::size_t> death_time;
  std::size_t              max_death = 0;
  bool any() const {
    for (bool m : mortal) {
      if (m) {
        return true;
      }
    }
    return false;
  }
};

inline MortalityInfo mortality(Morphism const& sigma) {
  if (!sigma.is_endomorphism()) {
    throw validation_error("mortality analysis requires an endomorphism");
  }
  std::size_t const n = sigma.domain().size();
  MortalityInfo info;
  info.mortal.assign(n, false);
  info.death_time.assign(n, 0);
  bool changed = true;
  std::size_t round = 0;
  while (changed && round <= n) {
    changed = false;
    ++round;
    for (std::size_t a = 0; a < n; ++a) {
      if (info.mortal[a]) {
        continue;
      }
      bool all_dead = true;
      std::size_t deepest = 0;
      for (Letter b : sigma.image(static_cast<Letter>(a))) {
        if (!info.mortal[b]) {
          all_dead = false;
          break;
        }
        deepest = std::max(deepest, info.death_time[b]);
      }
      if (all_dead) {
        info.mortal[a]     = true;
        info.death_time[a] = deepest + 1;
        info.max_death     = std::max(info.max_death, deepest + 1);
        changed            = true;
      }
    }
  }
  return info;
}

namespace detail {

//! The letter digraph of an endomorphism: edge a -> b iff b occurs in
//! sigma(a). SCC ids are assigned in completion order, so every edge of the
//! condensation goes from a higher id to a lower (or equal) id.
struct LetterGraph {
  explicit LetterGraph(Morphism const& sigma) : sigma_(&sigma) {
    n_ = sigma.domain().size();
    adj_.assign(n_, {});
    for (std::size_t a = 0; a < n_; ++a) {
      std::vector<bool> seen(n_, false);
      for (Letter b : sigma.image(static_cast<Letter>(a))) {
        if (!seen[b]) {
          seen[b] = true;
          adj_[a].push_back(b);
        }
      }
    }
    tarjan();
    scc_members_.assign(scc_count_, {});
    for (std::size_t a = 0; a < n_; ++a) {
      scc_members_[scc_of_[a]].push_back(static_cast<Letter>(a));
    }
    scc_has_cycle_.assign(scc_count_, false);
    for (std::size_t c = 0; c < scc_count_; ++c) {
      if (scc_members_[c].size() > 1) {
        scc_has_cycle_[c] = true;
      } else {
        Letter a = scc_members_[c][0];
        for (Letter b : sigma.image(a)) {
          if (b == a) {
            scc_has_cycle_[c] = true;
            break;
          }
        }
      }
    }
    scc_adj_.assign(scc_count_, {});
    for (std::size_t a = 0; a < n_; ++a) {
      for (Letter b : adj_[a]) {
        std::size_t ca = scc_of_[a], cb = scc_of_[b];
        if (ca != cb) {
          scc_adj_[ca].push_back(cb);
        }
      }
    }
    for (auto& v : scc_adj_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  std::size_t size() const { return n_; }
  std::size_t scc_count() const { return scc_count_; }
  std::size_t scc_of(Letter a) const { return scc_of_[a]; }
  std::vector<Letter> const& members(std::size_t c) const { return scc_members_[c]; }
  bool has_cycle(std::size_t c) const { return scc_has_cycle_[c]; }
  std::vector<std::size_t> const& scc_successors(std::size_t c) const {
    return scc_adj_[c];
  }
  std::vector<Letter> const& successors(Letter a) const { return adj_[a]; }

  //! True when the SCC is a single simple cycle: every member carries exactly
  //! one in-SCC letter in its image (counted with multiplicity). The Perron
  //! root of the restricted matrix is 1 exactly in this case.
  bool is_simple_cycle(std::size_t c) const {
    if (!scc_has_cycle_[c]) {
      return false;
    }
    for (Letter a : scc_members_[c]) {
      std::size_t in_scc = 0;
      for (Letter b : sigma_->image(a)) {
        if (scc_of_[b] == c) {
          ++in_scc;
        }
      }
      if (in_scc != 1) {
        return false;
      }
    }
    return true;
  }

  std::vector<bool> reachable_from(Letter start) const {
    std::vector<bool> seen(n_, false);
    std::vector<Letter> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      Letter a = stack.back();
      stack.pop_back();
      for (Letter b : adj_[a]) {
        if (!seen[b]) {
          seen[b] = true;
          stack.push_back(b);
        }
      }
    }
    return seen;
  }

  //! Imprimitivity index of a component: gcd of its cycle lengths, via
  //! BFS levels (gcd over in-component edges of level(u) + 1 - level(v)).
  //! Returns 0 for components without a cycle.
  std::size_t period(std::size_t c) const {
    if (!scc_has_cycle_[c]) {
      return 0;
    }
    std::vector<long> level(n_, -1);
    std::vector<Letter> queue{scc_members_[c][0]};
    level[scc_members_[c][0]] = 0;
    long g = 0;
    std::size_t head = 0;
    while (head < queue.size()) {
      Letter u = queue[head++];
      for (Letter v : adj_[u]) {
        if (scc_of_[v] != c) {
          continue;
        }
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        } else {
          long diff = level[u] + 1 - level[v];
          g = std::gcd(g, diff < 0 ? -diff : diff);
        }
      }
    }
    return g == 0 ? 0 : static_cast<std::size_t>(g);
  }

  //! Closure of {a} under "letters occurring in images"; includes a.
  std::vector<Letter> closure(Letter a) const {
    auto mask = reachable_from(a);
    std::vector<Letter> out;
    for (std::size_t b = 0; b < n_; ++b) {
      if (mask[b]) {
        out.push_back(static_cast<Letter>(b));
      }
    }
    return out;
  }

 private:
  void tarjan() {
    scc_of_.assign(n_, SIZE_MAX);
    std::vector<std::size_t> index(n_, SIZE_MAX), low(n_, 0);
    std::vector<bool> on_stack(n_, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    scc_count_ = 0;

    // Iterative Tarjan; frames carry (node, edge position).
    struct Frame {
      std::size_t node;
      std::size_t edge;
    };
    for (std::size_t root = 0; root < n_; ++root) {
      if (index[root] != SIZE_MAX) {
        continue;
      }
      std::vector<Frame> frames{{root, 0}};
      index[root] = low[root] = next_index++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!frames.empty()) {
        auto& [v, ei] = frames.back();
        if (ei < adj_[v].size()) {
          std::size_t w = adj_[v][ei++];
          if (index[w] == SIZE_MAX) {
            index[w] = low[w] = next_index++;
            stack.push_back(w);
            on_stack[w] = true;
            frames.push_back({w, 0});
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
        } else {
          if (low[v] == index[v]) {
            while (true) {
              std::size_t w = stack.back();
              stack.pop_back();
              on_stack[w] = false;
              scc_of_[w]  = scc_count_;
              if (w == v) {
                break;
              }
            }
            ++scc_count_;
          }
          std::size_t done = v;
          frames.pop_back();
          if (!frames.empty()) {
            low[frames.back().node] = std::min(low[frames.back().node], low[done]);
          }
        }
      }
    }
  }

  Morphism const*                       sigma_;
  std::size_t                           n_ = 0;
  std::size_t                           scc_count_ = 0;
  std::vector<std::vector<Letter>>      adj_;
  std::vector<std::size_t>              scc_of_;
  std::vector<std::vector<Letter>>      scc_members_;
  std::vector<bool>                     scc_has_cycle_;
  std::vector<std::vector<std::size_t>> scc_adj_;
};

//! Strip mortal letters: restrict pi . sigma to the non-mortal letters,
//! where pi deletes mortal letters. Growth (boundedness of |sigma^n(a)|) is
//! unchanged, since mortal letters die within |A| steps. Returns the
//! restriction together with the letter remap (old id -> new id, or npos).
struct StrippedMorphism {
  Morphism                 restricted;
  std::vector<std::size_t> remap;  // SIZE_MAX for removed letters
  bool                     stripped_any = false;
};

inline StrippedMorphism strip_mortals(Morphism const& sigma) {
  auto const info = mortality(sigma);
  StrippedMorphism out;
  std::size_t const n = sigma.domain().size();
  out.remap.assign(n, SIZE_MAX);
  if (!info.any()) {
    out.restricted = sigma;
    for (std::size_t a = 0; a < n; ++a) {
      out.remap[a] = a;
    }
    return out;
  }
  out.stripped_any = true;
  std::vector<std::string> tokens;
  for (std::size_t a = 0; a < n; ++a) {
    if (!info.mortal[a]) {
      out.remap[a] = tokens.size();
      tokens.push_back(sigma.domain().token(static_cast<Letter>(a)));
    }
  }
  if (tokens.empty()) {
    throw validation_error("all letters are mortal");
  }
  Alphabet alpha(std::move(tokens));
  std::vector<Word> images;
  for (std::size_t a = 0; a < n; ++a) {
    if (info.mortal[a]) {
      continue;
    }
    Word im;
    for (Letter b : sigma.image(static_cast<Letter>(a))) {
      if (!info.mortal[b]) {
        im.push_back(static_cast<Letter>(out.remap[b]));
      }
    }
    images.push_back(std::move(im));
  }
  out.restricted = Morphism(alpha, alpha, std::move(images));
  return out;
}

//! Cycle weight of an SCC: 0 without a cycle, 1 for a simple cycle
//! (Perron root exactly 1), 2 otherwise (Perron root > 1). A letter's
//! |sigma^n(a)| is unbounded iff some path from it accumulates weight >= 2.
inline std::vector<std::size_t> scc_cycle_weights(LetterGraph const& g) {
  std::vector<std::size_t> w(g.scc_count(), 0);
  for (std::size_t c = 0; c < g.scc_count(); ++c) {
    if (g.has_cycle(c)) {
      w[c] = g.is_simple_cycle(c) ? 1 : 2;
    }
  }
  return w;
}

//! Max accumulated cycle weight over paths starting at each SCC.
inline std::vector<std::size_t> best_path_weight(LetterGraph const& g) {
  auto const weights = scc_cycle_weights(g);
  std::vector<std::size_t> best(g.scc_count(), 0);
  // SCC ids are in completion order: successors have lower or equal ids.
  for (std::size_t c = 0; c < g.scc_count(); ++c) {
    std::size_t m = 0;
    for (std::size_t d : g.scc_successors(c)) {
      m = std::max(m, best[d]);
    }
    best[c] = weights[c] + m;
  }
  return best;
}

}  // namespace detail

//! Letters with unbounded |sigma^n(a)|; sigma may be erasing.
inline std::vector<bool> growing_letters(Morphism const& sigma) {
  auto const stripped = detail::strip_mortals(sigma);
  detail::LetterGraph g(stripped.restricted);
  auto const best = detail::best_path_weight(g);
  std::size_t const n = sigma.domain().size();
  std::vector<bool> growing(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    if (stripped.remap[a] != SIZE_MAX) {
      Letter na = static_cast<Letter>(stripped.remap[a]);
      growing[a] = best[g.scc_of(na)] >= 2;
    }
  }
  return growing;
}

//! Letters occurring infinitely often in the fixed point of sigma from
//! start. A letter recurs iff its count in sigma^n(start) is unbounded,
//! which happens iff some walk from start to it passes two cycles (or one
//! branching cycle).
inline std::vector<bool> recurrent_letters(Morphism const& sigma, Letter start) {
  detail::LetterGraph g(sigma);
  auto const weights = detail::scc_cycle_weights(g);
  std::size_t const nscc = g.scc_count();
  // forward[c]: max weight accumulated on a path from start's SCC up to and
  // including c; SIZE_MAX marks unreachable.
  std::vector<std::size_t> forward(nscc, SIZE_MAX);
  std::size_t const s = g.scc_of(start);
  forward[s] = weights[s];
  for (std::size_t c = nscc; c-- > 0;) {  // decreasing id = topological order
    if (forward[c] == SIZE_MAX) {
      continue;
    }
    for (std::size_t d : g.scc_successors(c)) {
      std::size_t cand = forward[c] + weights[d];
      if (forward[d] == SIZE_MAX || cand > forward[d]) {
        forward[d] = cand;
      }
    }
  }
  std::vector<bool> rec(sigma.domain().size(), false);
  for (std::size_t a = 0; a < rec.size(); ++a) {
    std::size_t c = g.scc_of(static_cast<Letter>(a));
    rec[a] = forward[c] != SIZE_MAX && forward[c] >= 2;
  }
  return rec;
}

}  // namespace subst

#endif  // SUBSTLIB_GRAPH_HPP_
