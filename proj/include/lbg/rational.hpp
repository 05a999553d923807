#pragma once

#include "lbg/transduction.hpp"

namespace lbg {

struct Transition {
  Symbol from;
  Symbol in;   // empty: epsilon
  Symbol out;  // empty: epsilon
  Symbol to;
  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition& a, const Transition& b) {
    return std::tie(a.from, a.in, a.out, a.to) <=> std::tie(b.from, b.in, b.out, b.to);
  }
};

struct FiniteTransducer {
  Alphabet alphabet;
  std::vector<Symbol> states;
  Symbol initial;
  std::vector<Symbol> finals;
  std::vector<Transition> transitions;

  bool is_final(Symbol q) const { return std::find(finals.begin(), finals.end(), q) != finals.end(); }
};

inline std::vector<std::string> validate(const FiniteTransducer& t) {
  std::vector<std::string> diag;
  std::set<Symbol> q(t.states.begin(), t.states.end()), g(t.alphabet.begin(), t.alphabet.end());
  if (!q.count(t.initial)) diag.push_back("initial state '" + t.initial.name() + "' is not declared");
  for (auto f : t.finals)
    if (!q.count(f)) diag.push_back("final state '" + f.name() + "' is not declared");
  for (auto& tr : t.transitions) {
    auto where = "transition " + tr.from.name() + " " + label_str(tr.in) + "/" + label_str(tr.out) +
                 " " + tr.to.name() + ": ";
    if (!q.count(tr.from) || !q.count(tr.to)) diag.push_back(where + "undeclared state");
    for (auto s : {tr.in, tr.out})
      if (!s.empty() && !g.count(s)) diag.push_back(where + "unknown symbol '" + s.name() + "'");
  }
  return diag;
}

struct ApplyResult {
  std::set<Word> words;
  bool truncated = false;
};

// All v with (u, v) accepted and |v| <= output_cap.
inline ApplyResult apply(const FiniteTransducer& t, const Word& u, std::size_t output_cap) {
  ApplyResult res;
  using Node = std::tuple<Symbol, std::size_t, Word>;
  std::set<Node> seen{{t.initial, 0, Word{}}};
  std::vector<Node> stack{{t.initial, 0, Word{}}};
  std::multimap<Symbol, const Transition*> out;
  for (auto& tr : t.transitions) out.emplace(tr.from, &tr);
  while (!stack.empty()) {
    auto [q, i, w] = std::move(stack.back());
    stack.pop_back();
    if (i == u.size() && t.is_final(q)) res.words.insert(w);
    auto [lo, hi] = out.equal_range(q);
    for (auto it = lo; it != hi; ++it) {
      auto& tr = *it->second;
      std::size_t j = i;
      if (!tr.in.empty()) {
        if (i == u.size() || u[i] != tr.in) continue;
        j = i + 1;
      }
      Word w2 = w;
      if (!tr.out.empty()) {
        if (w.size() >= output_cap) {
          res.truncated = true;
          continue;
        }
        w2.push_back(tr.out);
      }
      Node n{tr.to, j, std::move(w2)};
      if (seen.insert(n).second) stack.push_back(n);
    }
  }
  return res;
}

// Membership of a single pair.
inline bool contains_pair(const FiniteTransducer& t, const Word& u, const Word& v) {
  using Node = std::tuple<Symbol, std::size_t, std::size_t>;
  std::set<Node> seen{{t.initial, 0, 0}};
  std::vector<Node> stack{{t.initial, 0, 0}};
  while (!stack.empty()) {
    auto [q, i, j] = stack.back();
    stack.pop_back();
    if (i == u.size() && j == v.size() && t.is_final(q)) return true;
    for (auto& tr : t.transitions) {
      if (tr.from != q) continue;
      auto i2 = i, j2 = j;
      if (!tr.in.empty()) {
        if (i == u.size() || u[i] != tr.in) continue;
        ++i2;
      }
      if (!tr.out.empty()) {
        if (j == v.size() || v[j] != tr.out) continue;
        ++j2;
      }
      if (seen.insert({tr.to, i2, j2}).second) stack.emplace_back(tr.to, i2, j2);
    }
  }
  return false;
}

inline FiniteTransducer compose(const FiniteTransducer& t1, const FiniteTransducer& t2) {
  FiniteTransducer t;
  t.alphabet = t1.alphabet;
  for (auto a : t2.alphabet)
    if (std::find(t.alphabet.begin(), t.alphabet.end(), a) == t.alphabet.end()) t.alphabet.push_back(a);
  auto name = [](Symbol p, Symbol q) { return Symbol(p.name() + "|" + q.name()); };
  std::deque<std::pair<Symbol, Symbol>> queue{{t1.initial, t2.initial}};
  std::set<std::pair<Symbol, Symbol>> seen{{t1.initial, t2.initial}};
  t.initial = name(t1.initial, t2.initial);
  std::set<Transition> trans;
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    auto pq = name(p, q);
    t.states.push_back(pq);
    if (t1.is_final(p) && t2.is_final(q)) t.finals.push_back(pq);
    auto add = [&](Symbol in, Symbol out, Symbol p2, Symbol q2) {
      trans.insert({pq, in, out, name(p2, q2)});
      if (seen.insert({p2, q2}).second) queue.emplace_back(p2, q2);
    };
    for (auto& a : t1.transitions) {
      if (a.from != p) continue;
      if (a.out.empty()) {
        add(a.in, epsilon, a.to, q);
        continue;
      }
      for (auto& b : t2.transitions)
        if (b.from == q && b.in == a.out) add(a.in, b.out, a.to, b.to);
    }
    for (auto& b : t2.transitions)
      if (b.from == q && b.in.empty()) add(epsilon, b.out, p, b.to);
  }
  t.transitions.assign(trans.begin(), trans.end());
  return t;
}

namespace detail {

// States both reachable from the initial state and co-reachable to a final one.
inline std::set<Symbol> useful_states(const FiniteTransducer& t) {
  std::set<Symbol> fwd{t.initial}, bwd(t.finals.begin(), t.finals.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& tr : t.transitions) {
      if (fwd.count(tr.from) && fwd.insert(tr.to).second) changed = true;
      if (bwd.count(tr.to) && bwd.insert(tr.from).second) changed = true;
    }
  }
  std::set<Symbol> out;
  for (auto q : fwd)
    if (bwd.count(q)) out.insert(q);
  return out;
}

}  // namespace detail

// Every accepting path is letter/letter pairs followed by a one-sided tail
// (only x/eps or only eps/y). eps/eps moves are ignored.
inline bool is_left_synchronized(const FiniteTransducer& t) {
  enum Mode { both, in_only, out_only };
  auto useful = detail::useful_states(t);
  if (!useful.count(t.initial)) return true;
  std::set<std::pair<Symbol, int>> seen{{t.initial, both}};
  std::vector<std::pair<Symbol, int>> stack{{t.initial, both}};
  while (!stack.empty()) {
    auto [q, mode] = stack.back();
    stack.pop_back();
    for (auto& tr : t.transitions) {
      if (tr.from != q || !useful.count(tr.to)) continue;
      int next = mode;
      bool in = !tr.in.empty(), out = !tr.out.empty();
      if (in && out) {
        if (mode != both) return false;
      } else if (in) {
        if (mode == out_only) return false;
        next = in_only;
      } else if (out) {
        if (mode == in_only) return false;
        next = out_only;
      }
      if (seen.insert({tr.to, next}).second) stack.emplace_back(tr.to, next);
    }
  }
  return true;
}

// Largest number of letters emitted along a run of eps-input transitions
// between useful states; NotFiniteImage when such a run can loop while
// emitting.
inline std::size_t epsilon_output_bound(const FiniteTransducer& t) {
  auto useful = detail::useful_states(t);
  std::vector<const Transition*> eps;
  for (auto& tr : t.transitions)
    if (tr.in.empty() && useful.count(tr.from) && useful.count(tr.to)) eps.push_back(&tr);
  // Longest path by Bellman-Ford style relaxation; an improvement after |Q|
  // rounds means an emitting cycle.
  std::map<Symbol, std::size_t> best;
  for (auto q : useful) best[q] = 0;
  for (std::size_t round = 0; round <= useful.size(); ++round) {
    bool changed = false;
    for (auto* tr : eps) {
      auto w = best[tr->from] + (tr->out.empty() ? 0 : 1);
      if (w > best[tr->to]) {
        best[tr->to] = w;
        changed = true;
      }
    }
    if (!changed) {
      std::size_t k = 0;
      for (auto& [_, w] : best) k = std::max(k, w);
      return k;
    }
  }
  throw NotFiniteImage("a loop of epsilon-input transitions emits letters");
}

inline IncrementalTransduction from_synchronized(const FiniteTransducer& t) {
  if (!is_left_synchronized(t)) throw NotSynchronized("transducer is not left-synchronized");
  auto k = epsilon_output_bound(t);
  IncrementalTransduction T;
  T.alphabet = t.alphabet;
  T.k = k;
  T.provenance = Provenance::semantic;
  T.decider = [t](const Word& u, const Word& v) { return contains_pair(t, u, v); };
  return T;
}

// An unlabeled LBM accepting u sep v exactly when (u, v) is accepted by t.
// It guesses a run of t; each transition marks the leftmost unmarked letter
// of u and/or of v, and the run ends in a final state with all marked.
inline MachineDescription transducer_acceptor(const FiniteTransducer& t, Symbol sep) {
  MachineDescription m;
  m.flavor = Flavor::lbm;
  std::set<Symbol> taken(t.alphabet.begin(), t.alphabet.end());
  taken.insert(sep);
  std::map<Symbol, Symbol> mark;
  for (auto a : t.alphabet) {
    mark[a] = fresh_symbol(a.name() + "'", taken);
    taken.insert(mark[a]);
  }
  m.input = t.alphabet;
  m.input.push_back(sep);
  m.tape = m.input;
  for (auto a : t.alphabet) m.tape.push_back(mark[a]);

  std::set<Symbol> names;
  auto state = [&](const std::string& s) {
    Symbol q(s);
    if (names.insert(q).second) m.states.push_back(q);
    return q;
  };
  auto back = [&](Symbol p) { return state("back." + p.name()); };
  auto home = [&](Symbol p) { return state("home." + p.name()); };
  for (auto p : t.states) {
    back(p);
    home(p);
  }
  auto c1 = state("check.u"), c2 = state("check.v"), acc = state("accept");
  m.initial = back(t.initial);
  m.finals = {acc};
  auto& R = m.rules;
  for (auto p : t.states) {
    for (auto a : m.tape) R.push_back(Rule::move(back(p), a, epsilon, back(p), a, -1));
    R.push_back(Rule::marker(back(p), right_marker, epsilon, back(p)));
    R.push_back(Rule::stay(back(p), left_marker, epsilon, home(p), left_marker));
    if (t.is_final(p)) R.push_back(Rule::marker(home(p), left_marker, epsilon, c1));
  }
  for (std::size_t i = 0; i < t.transitions.size(); ++i) {
    auto& tr = t.transitions[i];
    auto id = std::to_string(i);
    if (tr.in.empty() && tr.out.empty()) {
      R.push_back(Rule::stay(home(tr.from), left_marker, epsilon, home(tr.to), left_marker));
      continue;
    }
    auto U = state("u." + id), V = state("v." + id), W = state("w." + id);
    R.push_back(Rule::marker(home(tr.from), left_marker, epsilon, tr.in.empty() ? V : U));
    if (!tr.in.empty()) {
      for (auto a : t.alphabet) R.push_back(Rule::move(U, mark[a], epsilon, U, mark[a], +1));
      if (tr.out.empty()) R.push_back(Rule::move(U, tr.in, epsilon, back(tr.to), mark[tr.in], -1));
      else R.push_back(Rule::move(U, tr.in, epsilon, V, mark[tr.in], +1));
    }
    if (!tr.out.empty()) {
      for (auto a : t.alphabet) {
        R.push_back(Rule::move(V, a, epsilon, V, a, +1));
        R.push_back(Rule::move(V, mark[a], epsilon, V, mark[a], +1));
        R.push_back(Rule::move(W, mark[a], epsilon, W, mark[a], +1));
      }
      R.push_back(Rule::move(V, sep, epsilon, W, sep, +1));
      R.push_back(Rule::move(W, tr.out, epsilon, back(tr.to), mark[tr.out], -1));
    }
  }
  for (auto a : t.alphabet) {
    R.push_back(Rule::move(c1, mark[a], epsilon, c1, mark[a], +1));
    R.push_back(Rule::move(c2, mark[a], epsilon, c2, mark[a], +1));
  }
  R.push_back(Rule::move(c1, sep, epsilon, c2, sep, +1));
  R.push_back(Rule::stay(c2, right_marker, epsilon, acc, right_marker));
  return m;
}

// ---------------------------------------------------------------------------
// Rational graphs

using TransducerFamily = std::map<Symbol, FiniteTransducer>;

inline Generator<Word> rational_generator(const TransducerFamily& family, std::size_t output_cap) {
  Generator<Word> g;
  g.edges = [family, output_cap](const Word& u) {
    std::vector<std::pair<Symbol, Word>> out;
    for (auto& [a, t] : family)
      for (auto& v : apply(t, u, output_cap).words) out.emplace_back(a, v);
    return out;
  };
  g.truncated = [family, output_cap](const Word& u) {
    for (auto& [_, t] : family)
      if (apply(t, u, output_cap).truncated) return true;
    return false;
  };
  g.name = word_name;
  return g;
}

inline GraphFragment rational_ball(const TransducerFamily& family, const Word& root,
                                   std::size_t radius, std::size_t output_cap = 64,
                                   std::size_t cap = default_vertex_cap) {
  return ball(rational_generator(family, output_cap), {root}, radius, cap);
}

inline FiniteTransducer identity_transducer(const Alphabet& gamma) {
  FiniteTransducer t;
  t.alphabet = gamma;
  Symbol s("s");
  t.states = {s};
  t.initial = s;
  t.finals = {s};
  for (auto a : gamma) t.transitions.push_back({s, a, a, s});
  return t;
}

// {(u, ux)}.
inline FiniteTransducer append_transducer(const Alphabet& gamma, Symbol x) {
  auto t = identity_transducer(gamma);
  Symbol f("f");
  t.states.push_back(f);
  t.finals = {f};
  t.transitions.push_back({t.initial, epsilon, x, f});
  return t;
}

// {(xu, u)}.
inline FiniteTransducer strip_transducer(const Alphabet& gamma, Symbol x) {
  FiniteTransducer t;
  t.alphabet = gamma;
  Symbol s0("s0"), s1("s1");
  t.states = {s0, s1};
  t.initial = s0;
  t.finals = {s1};
  t.transitions.push_back({s0, x, epsilon, s1});
  for (auto a : gamma) t.transitions.push_back({s1, a, a, s1});
  return t;
}

inline Symbol bar_label(Symbol x) { return Symbol(x.name() + "̄"); }
inline Symbol tilde_label(Symbol x) { return Symbol(x.name() + "̃"); }

// Adds an x-bar edge u -> ux and an x-tilde edge xu -> u for every x.
inline TransducerFamily vertex_access(const TransducerFamily& family, const Alphabet& gamma) {
  TransducerFamily out = family;
  for (auto x : gamma) {
    out[bar_label(x)] = append_transducer(gamma, x);
    out[tilde_label(x)] = strip_transducer(gamma, x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical renaming of a bounded-degree rational graph. Each label is a
// union of named rational functions; a vertex x is renamed to the least pair
// (m, r) with F_r(m) = x, pairs ordered by |m| + |r|, then m, then r
// (length-lexicographic).

struct NamedFunction {
  Symbol name;  // an element of X
  Symbol label;  // the graph label it contributes to
  FiniteTransducer f;
};

struct CanonicalPair {
  Word m;
  Word r;
  std::size_t weight() const { return m.size() + r.size(); }
  std::string str() const { return "(" + word_name(m) + "," + word_name(r) + ")"; }
  friend bool operator==(const CanonicalPair&, const CanonicalPair&) = default;
};

struct WeberResult {
  GraphFragment original;
  GraphFragment renamed;
  std::vector<Word> vertices;               // indexed like both fragments
  std::vector<CanonicalPair> names;         // canonical pair per vertex
};

namespace detail {

inline std::optional<Word> apply_function(const NamedFunction& f, const Word& u, std::size_t cap) {
  auto res = apply(f.f, u, cap);
  if (res.words.size() > 1) throw NotFunctional(f.name.name() + " has several images of '" + str(u) + "'");
  if (res.words.empty()) {
    if (res.truncated) throw SizeExceeded("function image exceeds output cap");
    return std::nullopt;
  }
  return *res.words.begin();
}

}  // namespace detail

// F_r(m), applying r's letters left to right.
inline std::optional<Word> replay_pair(const std::vector<NamedFunction>& fs, const CanonicalPair& p,
                                       std::size_t cap) {
  std::optional<Word> x = p.m;
  for (auto s : p.r) {
    auto it = std::find_if(fs.begin(), fs.end(), [&](auto& f) { return f.name == s; });
    if (it == fs.end()) throw InvalidInput("unknown function '" + s.name() + "'");
    x = detail::apply_function(*it, *x, cap);
    if (!x) return std::nullopt;
  }
  return x;
}

// `keep` restricts exploration (e.g. to words of bounded length); `gamma`
// fixes the order on vertex letters, the order of `functions` the one on X.
inline WeberResult weber_rename(const std::vector<NamedFunction>& functions, const Alphabet& gamma,
                                const Word& root, std::size_t radius,
                                std::function<bool(const Word&)> keep = nullptr,
                                std::size_t output_cap = 4096,
                                std::size_t cap = default_vertex_cap) {
  Generator<Word> g;
  g.edges = [&](const Word& u) {
    std::set<std::pair<Symbol, Word>> acc;
    for (auto& f : functions)
      if (auto v = detail::apply_function(f, u, output_cap); v && (!keep || keep(*v)))
        acc.emplace(f.label, *v);
    return std::vector<std::pair<Symbol, Word>>(acc.begin(), acc.end());
  };
  g.name = word_name;
  auto x = explore(g, {root}, radius, cap);

  // Upper bound on the weight of each vertex: a BFS path from root.
  std::size_t max_weight = 0;
  for (auto d : x.distance) max_weight = std::max(max_weight, root.size() + d);
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < x.vertices.size(); ++i) index[x.vertices[i]] = i;

  WeberResult res;
  res.original = x.fragment;
  res.vertices = x.vertices;
  res.names.resize(x.vertices.size());
  std::vector<bool> named(x.vertices.size(), false);
  std::size_t remaining = x.vertices.size();

  // Enumerate pairs by weight; within a weight, m then r length-lexicographic
  // (a depth-first walk over r). Intermediate values longer than output_cap
  // are abandoned.
  auto step = [&](const NamedFunction& f, const Word& u) -> std::optional<Word> {
    auto res = apply(f.f, u, output_cap);
    if (res.words.size() > 1) throw NotFunctional(f.name.name() + " has several images of '" + str(u) + "'");
    if (res.words.empty()) return std::nullopt;
    return *res.words.begin();
  };
  std::function<void(const Word&, Word&, const Word&, std::size_t)> walk =
      [&](const Word& m, Word& r, const Word& v, std::size_t left) {
        if (left == 0) {
          auto it = index.find(v);
          if (it != index.end() && !named[it->second]) {
            named[it->second] = true;
            res.names[it->second] = {m, r};
            --remaining;
          }
          return;
        }
        for (auto& f : functions) {
          auto next = step(f, v);
          if (!next) continue;
          r.push_back(f.name);
          walk(m, r, *next, left - 1);
          r.pop_back();
        }
      };
  for (std::size_t w = 0; w <= max_weight && remaining > 0; ++w)
    for (std::size_t lm = 0; lm <= w && remaining > 0; ++lm)
      for (auto& m : words_of_length(gamma, lm)) {
        Word r;
        walk(m, r, m, w - lm);
      }
  if (remaining > 0) throw PreconditionFailed("some vertex has no pair within its path weight");
  for (std::size_t i = 0; i < x.vertices.size(); ++i) res.renamed.add_vertex(res.names[i].str());
  for (auto r : x.fragment.roots()) res.renamed.add_root(r);
  for (auto f : x.fragment.frontier()) res.renamed.add_frontier(f);
  for (auto& e : x.fragment.edges()) res.renamed.add_edge(e.source, e.label, e.target);
  return res;
}

}  // namespace lbg
