#pragma once

#include <cmath>

#include "lbg/rewriting.hpp"

namespace lbg {

struct DegreeProfile {
  std::vector<std::size_t> out;  // max out-degree per distance
  std::vector<std::size_t> in;   // max in-degree per distance
  std::vector<bool> unreliable;  // a frontier vertex sits at that distance
};

inline DegreeProfile degree_profile(const GraphFragment& f, const std::string& root) {
  auto r = f.find(root);
  if (!r) throw UnknownRoot("no vertex named '" + root + "'");
  std::vector<std::optional<std::size_t>> dist(f.size());
  std::deque<std::size_t> queue{*r};
  dist[*r] = 0;
  std::size_t depth = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    depth = std::max(depth, *dist[v]);
    for (auto& e : f.out_edges(v))
      if (!dist[e.target]) {
        dist[e.target] = *dist[v] + 1;
        queue.push_back(e.target);
      }
  }
  DegreeProfile p;
  p.out.assign(depth + 1, 0);
  p.in.assign(depth + 1, 0);
  p.unreliable.assign(depth + 1, false);
  std::set<std::size_t> frontier(f.frontier().begin(), f.frontier().end());
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (!dist[v]) continue;
    auto d = *dist[v];
    p.out[d] = std::max(p.out[d], f.out_degree(v));
    p.in[d] = std::max(p.in[d], f.in_degree(v));
    if (frontier.count(v)) p.unreliable[d] = true;
  }
  return p;
}

// Smallest c with out[n] <= c^n for every reliable n >= 1; nullopt when no
// c <= cap works or no reliable layer exists.
inline std::optional<std::size_t> fit_outdegree_bound(const DegreeProfile& p, std::size_t cap = 64) {
  bool any = false;
  for (std::size_t n = 1; n < p.out.size(); ++n) any = any || !p.unreliable[n];
  if (!any) return std::nullopt;
  for (std::size_t c = 1; c <= cap; ++c) {
    bool ok = true;
    for (std::size_t n = 1; n < p.out.size() && ok; ++n) {
      if (p.unreliable[n]) continue;
      double bound = std::pow(static_cast<double>(c), static_cast<double>(n));
      ok = static_cast<double>(p.out[n]) <= bound;
    }
    if (ok) return c;
  }
  return std::nullopt;
}

template <class V>
Generator<V> restrict_generator(const Generator<V>& g, std::function<bool(const V&)> keep) {
  Generator<V> out = g;
  out.edges = [g, keep](const V& v) {
    auto es = g.edges(v);
    std::erase_if(es, [&](auto& e) { return !keep(e.second); });
    return es;
  };
  return out;
}

using LanguagePredicate = std::function<bool(const Word&)>;

// ---------------------------------------------------------------------------
// Gadget graphs

// #u -x-> #ux, #u#^n -#-> #u#^(n+1) while n < 2^|u|, and #u#^(2^|u|) -#-> u
// for u in L.
inline Generator<Word> fig3_gadget(LanguagePredicate L, Alphabet letters = {Symbol("a"), Symbol("b")}) {
  const Symbol sharp("#");
  Generator<Word> g;
  g.edges = [L, letters, sharp](const Word& w) {
    std::vector<std::pair<Symbol, Word>> out;
    if (w.empty() || w.front() != sharp) return out;
    std::size_t n = 0;
    while (n + 1 < w.size() && w[w.size() - 1 - n] == sharp) ++n;
    Word u(w.begin() + 1, w.end() - n);
    if (n == 0)
      for (auto x : letters) {
        Word v = w;
        v.push_back(x);
        out.emplace_back(x, v);
      }
    auto limit = u.size() >= 63 ? ~std::size_t{0} : (std::size_t{1} << u.size());
    if (n < limit) {
      Word v = w;
      v.push_back(sharp);
      out.emplace_back(sharp, v);
    } else if (n == limit && L(u)) {
      out.emplace_back(sharp, u);
    }
    return out;
  };
  g.name = word_name;
  return g;
}

// Two binary trees. The vertex of path p in the first one is 0p and carries
// a chain of 2^|p| #-edges; for p in L the chain ends with a #-edge to the
// vertex 0'p' of p in the second (barred) tree.
inline Generator<Word> bitree_gadget(LanguagePredicate L) {
  const Symbol zero("0"), one("1"), sharp("#"), zbar("0̄"), obar("1̄");
  Generator<Word> g;
  g.edges = [=](const Word& w) {
    std::vector<std::pair<Symbol, Word>> out;
    if (w.empty()) return out;
    if (w.front() == zbar) {
      for (auto [x, xb] : {std::pair{zero, zbar}, std::pair{one, obar}}) {
        Word v = w;
        v.push_back(xb);
        out.emplace_back(x, v);
      }
      return out;
    }
    if (w.front() != zero) return out;
    std::size_t n = 0;
    while (n + 1 < w.size() && w[w.size() - 1 - n] == sharp) ++n;
    Word p(w.begin() + 1, w.end() - n);
    if (n == 0)
      for (auto x : {zero, one}) {
        Word v = w;
        v.push_back(x);
        out.emplace_back(x, v);
      }
    auto limit = p.size() >= 63 ? ~std::size_t{0} : (std::size_t{1} << p.size());
    if (n < limit) {
      Word v = w;
      v.push_back(sharp);
      out.emplace_back(sharp, v);
    } else if (n == limit && L(p)) {
      Word v{zbar};
      for (auto x : p) v.push_back(x == zero ? zbar : obar);
      out.emplace_back(sharp, v);
    }
    return out;
  };
  g.name = word_name;
  return g;
}

// Vertices 0^n 1^m: 0^n -> 0^(n+1); a branch 0^n 1 ... 0^n 1^(f(n)-1) whose
// vertices all have an edge back to 0^n. The in-degree of 0^n (n > 0) is f(n).
// `max_n` bounds the spine so that balls stay finite.
inline Generator<Word> lemma_id_gadget(std::function<std::size_t(std::size_t)> f,
                                       std::size_t max_n = ~std::size_t{0}) {
  const Symbol zero("0"), one("1"), label("t");
  Generator<Word> g;
  g.edges = [=](const Word& w) {
    std::vector<std::pair<Symbol, Word>> out;
    std::size_t n = 0;
    while (n < w.size() && w[n] == zero) ++n;
    std::size_t m = w.size() - n;
    for (std::size_t i = n; i < w.size(); ++i)
      if (w[i] != one) return out;
    auto fn = f(n);
    if (m == 0) {
      if (n < max_n) out.emplace_back(label, Word(n + 1, zero));
      if (fn >= 2) {
        Word v = w;
        v.push_back(one);
        out.emplace_back(label, v);
      }
      return out;
    }
    if (m + 1 < fn) {
      Word v = w;
      v.push_back(one);
      out.emplace_back(label, v);
    }
    if (m < fn) out.emplace_back(label, Word(n, zero));
    return out;
  };
  g.name = word_name;
  return g;
}

// The complete deterministic tree over sigma; the vertex of w is named Aw when
// w is in L and Rw otherwise.
inline GraphFragment language_tree(const LanguagePredicate& L, const Alphabet& sigma,
                                   std::size_t radius, std::size_t cap = default_vertex_cap) {
  Generator<Word> g;
  g.edges = [sigma](const Word& w) {
    std::vector<std::pair<Symbol, Word>> out;
    for (auto a : sigma) {
      Word v = w;
      v.push_back(a);
      out.emplace_back(a, v);
    }
    return out;
  };
  g.name = [L](const Word& w) { return (L(w) ? "A" : "R") + str(w); };
  return ball(g, {Word{}}, radius, cap);
}

}  // namespace lbg
