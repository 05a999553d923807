#pragma once

#include <sstream>

#include "lbg/tgraph.hpp"
#include "lbg/transduction.hpp"

namespace lbg {

// ---------------------------------------------------------------------------
// Labeled machine to rewriting system. A configuration is encoded as the word
// of its tape cells, markers included, with the state fused onto the scanned
// cell.

struct FusedSystem {
  RewritingSystem system;
  Word root;
  std::map<Symbol, Symbol> cell;   // cell symbol of the system -> tape symbol or marker
  std::map<Symbol, std::pair<Symbol, Symbol>> fused;  // fused symbol -> (tape symbol, state)

  std::optional<Configuration> decode(const Word& w) const {
    Configuration c;
    bool seen = false;
    for (auto x : w) {
      if (auto it = cell.find(x); it != cell.end()) {
        c.tape.push_back(it->second);
      } else if (auto f = fused.find(x); f != fused.end()) {
        if (seen) return std::nullopt;
        seen = true;
        c.head = c.tape.size();
        c.state = f->second.second;
        c.tape.push_back(f->second.first);
      } else {
        return std::nullopt;
      }
    }
    if (!seen || c.tape.size() < 2 || c.tape.front() != left_marker || c.tape.back() != right_marker)
      return std::nullopt;
    for (std::size_t i = 1; i + 1 < c.tape.size(); ++i)
      if (is_marker(c.tape[i])) return std::nullopt;
    return c;
  }

  Word encode(const Configuration& c) const {
    Word out;
    for (std::size_t i = 0; i < c.tape.size(); ++i) {
      if (i == c.head) {
        for (auto& [s, p] : fused)
          if (p == std::pair{c.tape[i], c.state}) out.push_back(s);
      } else {
        for (auto& [s, t] : cell)
          if (t == c.tape[i]) out.push_back(s);
      }
    }
    if (out.size() != c.tape.size()) throw InvalidInput("configuration uses unknown symbols");
    return out;
  }
};

inline std::set<Symbol> internal_states(const MachineDescription& m) {
  std::set<Symbol> out;
  for (auto& r : m.rules)
    if (r.label.empty()) out.insert(r.from);
  return out;
}

inline FusedSystem llbm_to_rewriting(const MachineDescription& m) {
  if (!m.labeled() || !is_normalized(m)) throw NotNormalized("machine is not a normalized labeled machine");
  auto q_eps = internal_states(m);
  std::vector<Symbol> q_sigma;
  for (auto q : m.states)
    if (!q_eps.count(q)) q_sigma.push_back(q);

  FusedSystem out;
  auto& R = out.system;
  std::set<Symbol> taken(m.input.begin(), m.input.end());
  taken.insert(left_marker);
  taken.insert(right_marker);
  auto fresh = [&](const std::string& base) {
    auto s = fresh_symbol(base, taken);
    taken.insert(s);
    return s;
  };

  std::map<Symbol, Symbol> cell_of;  // tape symbol or marker -> cell symbol
  Alphabet gamma_cells;
  for (auto a : m.tape) {
    auto s = m.in_input(a) ? fresh(a.name() + "'") : (taken.count(a) ? fresh(a.name() + "'") : a);
    taken.insert(s);
    cell_of[a] = s;
    gamma_cells.push_back(s);
  }
  cell_of[left_marker] = left_marker;
  cell_of[right_marker] = right_marker;
  Alphabet cells = gamma_cells;
  cells.insert(cells.begin(), left_marker);
  cells.push_back(right_marker);
  Alphabet tape_and_markers = m.tape;
  tape_and_markers.insert(tape_and_markers.begin(), left_marker);
  tape_and_markers.push_back(right_marker);

  std::map<std::pair<Symbol, Symbol>, Symbol> fused_of;
  Alphabet fused_syms;
  for (auto x : tape_and_markers)
    for (auto q : m.states) {
      auto s = fresh(cell_of[x].name() + "_" + q.name());
      fused_of[{x, q}] = s;
      out.fused[s] = {x, q};
      fused_syms.push_back(s);
    }
  for (auto x : tape_and_markers) out.cell[cell_of[x]] = x;

  std::map<Symbol, Symbol> v_of, vp_of, s_of;
  Alphabet s_syms;
  for (auto a : m.input) {
    v_of[a] = fresh("v_" + a.name());
    vp_of[a] = fresh("v'_" + a.name());
    s_of[a] = fresh("s_" + a.name());
    s_syms.insert(s_syms.end(), {v_of[a], vp_of[a], s_of[a]});
  }

  R.labels = m.input;
  R.alphabet = m.input;
  for (auto& part : {cells, fused_syms, s_syms}) R.alphabet.insert(R.alphabet.end(), part.begin(), part.end());

  std::set<RewriteRule> emitted;
  auto emit = [&](Word l, Word r) {
    RewriteRule rule{std::move(l), std::move(r)};
    if (emitted.insert(rule).second) R.rules.push_back(std::move(rule));
  };
  auto cell = [&](Symbol x) { return cell_of.at(x); };
  auto fz = [&](Symbol x, Symbol q) { return fused_of.at({x, q}); };
  const Symbol L = left_marker, Rm = right_marker;

  // Normal-form policing.
  Alphabet left_bullets{L}, right_bullets{Rm};
  for (auto q : q_sigma) {
    left_bullets.push_back(fz(L, q));
    right_bullets.push_back(fz(Rm, q));
  }
  for (auto x : R.alphabet)
    for (auto l : left_bullets) emit({x, l}, {l});
  for (auto r : right_bullets)
    for (auto y : R.alphabet)
      if (!m.in_input(y)) emit({r, y}, {r});
  Alphabet blocked = m.input;
  blocked.insert(blocked.end(), s_syms.begin(), s_syms.end());
  for (auto x : tape_and_markers)
    for (auto q : q_eps) blocked.push_back(fz(x, q));
  for (auto s : blocked) emit({s}, {s});

  // Legality scan.
  for (auto a : m.input) {
    auto va = v_of[a], vpa = vp_of[a], sa = s_of[a];
    emit({Rm, a}, {va, Rm});
    for (auto q : q_sigma) emit({fz(Rm, q), a}, {vpa, fz(Rm, q)});
    for (auto A : m.tape) {
      emit({cell(A), va}, {va, cell(A)});
      for (auto q : q_sigma) emit({fz(A, q), va}, {vpa, fz(A, q)});
      emit({cell(A), vpa}, {vpa, cell(A)});
    }
    for (auto q : q_sigma) emit({fz(L, q), va}, {L, sa});
    emit({L, vpa}, {L, sa});
  }

  // Letter moves, then epsilon moves.
  Alphabet right_of = gamma_cells, left_of = gamma_cells;
  right_of.push_back(Rm);
  left_of.insert(left_of.begin(), L);
  auto raw = [&](Symbol c) { return out.cell.at(c); };
  for (auto a : m.input)
    for (auto A : m.tape) emit({s_of[a], cell(A)}, {cell(A), s_of[a]});
  for (auto& r : m.rules) {
    auto p = r.from, q = r.to;
    if (!r.label.empty()) {
      auto sa = s_of.at(r.label), va = v_of.at(r.label);
      switch (r.shape) {
        case Shape::insert: emit({sa, fz(r.read, p)}, {fz(r.write, q), cell(r.read)}); break;
        case Shape::move:
          if (r.dir > 0)
            for (auto C : right_of) emit({sa, fz(r.read, p), C}, {cell(r.write), fz(raw(C), q)});
          else
            for (auto C : left_of) emit({C, sa, fz(r.read, p)}, {fz(raw(C), q), cell(r.write)});
          break;
        case Shape::stay:
          if (r.read == L) emit({fz(L, p), va}, {fz(L, q)});
          else emit({sa, fz(r.read, p)}, {fz(r.write, q)});
          break;
        case Shape::erase:
          for (auto C : right_of) emit({sa, fz(r.read, p), C}, {fz(raw(C), q)});
          break;
        case Shape::marker:
          if (r.read == L)
            for (auto C : right_of) emit({fz(L, p), va, C}, {L, fz(raw(C), q)});
          else
            for (auto C : left_of) emit({C, sa, fz(Rm, p)}, {fz(raw(C), q), Rm});
          break;
      }
      continue;
    }
    switch (r.shape) {
      case Shape::move:
        if (r.dir > 0)
          for (auto C : right_of) emit({fz(r.read, p), C}, {cell(r.write), fz(raw(C), q)});
        else
          for (auto C : left_of) emit({C, fz(r.read, p)}, {fz(raw(C), q), cell(r.write)});
        break;
      case Shape::stay: emit({fz(r.read, p)}, {fz(r.write, q)}); break;
      case Shape::erase:
        for (auto C : right_of) emit({fz(r.read, p), C}, {fz(raw(C), q)});
        break;
      case Shape::marker:
        if (r.read == L)
          for (auto C : right_of) emit({fz(L, p), C}, {L, fz(raw(C), q)});
        else
          for (auto C : left_of) emit({C, fz(Rm, p)}, {fz(raw(C), q), Rm});
        break;
      case Shape::insert: throw PreconditionFailed("epsilon insertion in '" + to_string(r) + "'");
    }
  }

  auto c0 = initial_configuration(m);
  if (q_eps.count(c0.state)) throw PreconditionFailed("initial configuration is internal");
  out.root = out.encode(c0);
  return out;
}

// ---------------------------------------------------------------------------
// Rewriting system to transductions: T_a = {(ua, v) : u, v in NF(R), ua R* v}.

inline Family rewriting_to_transductions(const RewritingSystem& R, std::optional<Alphabet> labels = {}) {
  auto rw = std::make_shared<const detail::Rewriter>(R);
  Family out;
  for (auto a : labels ? *labels : R.labels) {
    IncrementalTransduction t;
    t.alphabet = R.alphabet;
    t.k = 0;
    t.provenance = Provenance::semantic;
    t.appends_label = true;
    t.rewriting = std::make_shared<const RewritingBacking>(RewritingBacking{R, a});
    t.enumerate = [rw, a](const Word& w) {
      std::vector<Word> forms;
      if (w.empty() || w.back() != a) return forms;
      auto ids = detail::ids(w);
      if (!rw->normal(ids.substr(0, ids.size() - 1))) return forms;
      auto nf = rw->normal_forms(ids, false, 5000000).forms;
      return std::vector<Word>(nf.begin(), nf.end());
    };
    t.decider = [e = t.enumerate](const Word& w, const Word& v) {
      auto forms = e(w);
      return std::find(forms.begin(), forms.end(), v) != forms.end();
    };
    out.emplace(a, std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transductions to a labeled machine. The machine waits in its single
// external state q with the head on the right marker; the vertex u is the
// configuration [u q].

struct TransductionMachine {
  MachineDescription machine;
  Symbol state;
  std::map<Symbol, Symbol> rename;  // family symbol -> tape symbol

  Configuration configuration(const Word& u) const {
    Configuration c;
    c.tape.push_back(left_marker);
    for (auto x : u) {
      auto it = rename.find(x);
      if (it == rename.end()) throw InvalidInput("'" + x.name() + "' is not in the family alphabet");
      c.tape.push_back(it->second);
    }
    c.tape.push_back(right_marker);
    c.state = state;
    c.head = c.tape.size() - 1;
    return c;
  }
};

namespace detail {

class MachineBuilder {
 public:
  MachineDescription m;
  std::set<Symbol> taken;
  std::set<Symbol> internal;

  Symbol fresh(const std::string& base) {
    auto s = fresh_symbol(base, taken);
    taken.insert(s);
    return s;
  }
  Symbol state(const std::string& name) {
    auto it = states_.find(name);
    if (it != states_.end()) return it->second;
    auto s = fresh(name);
    states_.emplace(name, s);
    m.states.push_back(s);
    internal.insert(s);
    return s;
  }
  void tape(Symbol s) {
    if (tape_set_.insert(s).second) m.tape.push_back(s);
  }
  void rule(const Rule& r) {
    if (rules_.insert(r).second) m.rules.push_back(r);
  }
  // Internal states stuck on some symbol loop there forever.
  void complete() {
    std::set<std::pair<Symbol, Symbol>> has;
    for (auto& r : m.rules) has.emplace(r.from, r.read);
    Alphabet all = m.tape;
    all.push_back(left_marker);
    all.push_back(right_marker);
    for (auto s : m.states) {
      if (!internal.count(s)) continue;
      for (auto x : all)
        if (!has.count({s, x})) m.rules.push_back(Rule::stay(s, x, epsilon, s, x));
    }
  }

 private:
  std::map<std::string, Symbol> states_;
  std::set<Symbol> tape_set_;
  std::set<Rule> rules_;
};

// Simulates the acceptor of T_a on a three-track copy of u sep v: track one
// holds u sep, track two the simulated v, track three an intact copy of v.
// Cells of v are guessed when the simulation first reaches them.
inline void acceptor_component(MachineBuilder& b, Symbol q, Symbol a, const IncrementalTransduction& T,
                               const std::map<Symbol, Symbol>& rename) {
  if (T.k > 1) throw PreconditionFailed("k > 1: re-encode the family with normalize_increment first");
  if (T.appends_label) throw PreconditionFailed("acceptor-backed members must not append their label");
  const auto& M = T.acceptor->machine;
  const Symbol sep = T.acceptor->separator;
  const std::string pre = a.name() + ".";

  enum Kind { sym, unknown, unknown_last, end };
  struct Slot {
    Kind kind;
    Symbol s;
    auto operator<=>(const Slot&) const = default;
    std::string name() const {
      switch (kind) {
        case sym: return s.name();
        case unknown: return "?";
        case unknown_last: return "?!";
        case end: return "$";
      }
      return "";
    }
  };

  std::map<Symbol, std::set<Symbol>> writes;
  for (auto& r : M.rules)
    if ((r.shape == Shape::move || r.shape == Shape::stay) && !is_marker(r.read)) writes[r.read].insert(r.write);
  auto reach = [&](Symbol x) {
    std::set<Symbol> seen{x};
    std::vector<Symbol> stack{x};
    while (!stack.empty()) {
      auto y = stack.back();
      stack.pop_back();
      for (auto z : writes[y])
        if (seen.insert(z).second) stack.push_back(z);
    }
    return seen;
  };

  std::vector<std::pair<Slot, Slot>> bc;
  bc.push_back({{unknown, {}}, {unknown, {}}});
  bc.push_back({{unknown_last, {}}, {unknown_last, {}}});
  bc.push_back({{end, {}}, {end, {}}});
  for (auto x : T.alphabet)
    for (auto y : reach(x)) bc.push_back({{sym, y}, {sym, x}});

  std::map<std::tuple<Symbol, Slot, Slot>, Symbol> tuples;
  auto tup = [&](Symbol A, Slot B, Slot C) {
    auto key = std::make_tuple(A, B, C);
    auto it = tuples.find(key);
    if (it != tuples.end()) return it->second;
    auto s = b.fresh("<" + A.name() + "," + B.name() + "," + C.name() + ">");
    tuples.emplace(key, s);
    b.tape(s);
    return s;
  };
  for (auto A : M.tape)
    for (auto& [B, C] : bc) tup(A, B, C);

  auto st = [&](const std::string& mode, Symbol p) { return b.state(pre + mode + ":" + p.name()); };
  const Symbol init = b.state(pre + "init"), rl = b.state(pre + "restore<"), rw = b.state(pre + "restore"),
               rdel = b.state(pre + "drop");
  auto target = [&](Symbol p, const char* mode) { return M.is_final(p) ? rl : st(mode, p); };
  const Slot last{T.k >= 1 ? unknown : unknown_last, {}};

  const Symbol fresh_cell = tup(sep, last, last);
  b.rule(Rule::insert(q, right_marker, a, init, fresh_cell));
  b.rule(Rule::move(init, fresh_cell, epsilon, init, fresh_cell, -1));
  for (auto& [x, t] : rename) b.rule(Rule::move(init, t, epsilon, init, tup(x, {unknown, {}}, {unknown, {}}), -1));
  b.rule(Rule::marker(init, left_marker, epsilon, target(M.initial, "A")));

  for (auto& r : M.rules) {
    if (M.is_final(r.from)) continue;
    auto pa = st("A", r.from), pb = st("B", r.from);
    auto qa = target(r.to, "A"), qb = target(r.to, "B");
    switch (r.shape) {
      case Shape::move:
      case Shape::stay: {
        if (r.read == left_marker) {
          b.rule(Rule::stay(pa, left_marker, epsilon, qa, left_marker));
          break;
        }
        if (r.read == right_marker) {
          b.rule(Rule::stay(pb, right_marker, epsilon, qb, right_marker));
          for (auto A : M.tape) {
            auto e = tup(A, {end, {}}, {end, {}});
            b.rule(Rule::stay(pb, e, epsilon, qb, e));
          }
          break;
        }
        auto make = [&](Symbol p, Symbol x, Symbol to, Symbol y) {
          return r.shape == Shape::move ? Rule::move(p, x, epsilon, to, y, r.dir) : Rule::stay(p, x, epsilon, to, y);
        };
        for (auto& [B, C] : bc) b.rule(make(pa, tup(r.read, B, C), qa, tup(r.write, B, C)));
        for (auto& [B, C] : bc) {
          if (B.kind != sym || B.s != r.read) continue;
          for (auto A : M.tape) b.rule(make(pb, tup(A, B, C), qb, tup(A, {sym, r.write}, C)));
        }
        break;
      }
      case Shape::marker:
        if (r.read == left_marker) {
          b.rule(Rule::marker(pa, left_marker, epsilon, qa));
        } else {
          b.rule(Rule::marker(pb, right_marker, epsilon, qb));
          for (auto A : M.tape) {
            auto e = tup(A, {end, {}}, {end, {}});
            b.rule(Rule::move(pb, e, epsilon, qb, e, -1));
          }
        }
        break;
      case Shape::insert:
      case Shape::erase: throw PreconditionFailed("acceptor machines cannot insert or delete cells");
    }
  }

  auto all_tuples = tuples;
  for (auto p : M.states) {
    if (M.is_final(p)) continue;
    auto pa = st("A", p), pb = st("B", p), to_a = st("toA", p), to_b = st("toB", p);
    b.rule(Rule::marker(pa, right_marker, epsilon, to_b));
    b.rule(Rule::marker(to_b, left_marker, epsilon, pb));
    b.rule(Rule::marker(pb, left_marker, epsilon, to_a));
    b.rule(Rule::marker(to_a, right_marker, epsilon, pa));
    for (auto& [key, s] : all_tuples) {
      b.rule(Rule::move(to_b, s, epsilon, to_b, s, -1));
      b.rule(Rule::move(to_a, s, epsilon, to_a, s, +1));
      auto& [A, B, C] = key;
      if (B.kind == unknown) {
        for (auto x : T.alphabet) b.rule(Rule::stay(pb, s, epsilon, pb, tup(A, {sym, x}, {sym, x})));
      }
      if (B.kind == unknown || B.kind == unknown_last)
        b.rule(Rule::stay(pb, s, epsilon, pb, tup(A, {end, {}}, {end, {}})));
    }
  }

  b.rule(Rule::marker(rl, right_marker, epsilon, rl));
  b.rule(Rule::marker(rl, left_marker, epsilon, rw));
  b.rule(Rule::stay(rw, right_marker, epsilon, q, right_marker));
  b.rule(Rule::stay(rdel, right_marker, epsilon, q, right_marker));
  for (auto& [key, s] : all_tuples) {
    auto& C = std::get<2>(key);
    b.rule(Rule::move(rl, s, epsilon, rl, s, -1));
    b.rule(Rule::erase(rdel, s, epsilon, rdel));
    if (C.kind == sym) {
      b.rule(Rule::move(rw, s, epsilon, rw, rename.at(C.s), +1));
    } else {
      if (C.kind == unknown)
        for (auto x : T.alphabet) b.rule(Rule::move(rw, s, epsilon, rw, rename.at(x), +1));
      b.rule(Rule::erase(rw, s, epsilon, rdel));
    }
  }
}

// Aho-Corasick automaton over the left-hand sides of a rewriting system.
struct LhsAutomaton {
  std::vector<Word> node;
  std::map<Word, std::size_t> index;
  std::vector<bool> match;
  std::vector<std::map<Symbol, std::size_t>> next;

  LhsAutomaton(const RewritingSystem& R) {
    std::set<Word> lhs;
    for (auto& r : R.rules) lhs.insert(r.lhs);
    auto add = [&](const Word& w) {
      if (index.count(w)) return;
      index.emplace(w, node.size());
      node.push_back(w);
    };
    add({});
    for (auto& l : lhs)
      for (std::size_t i = 1; i <= l.size(); ++i) add(Word(l.begin(), l.begin() + i));
    for (auto& w : node) {
      bool hit = false;
      for (std::size_t i = 0; i < w.size() && !hit; ++i) hit = lhs.count(Word(w.begin() + i, w.end())) > 0;
      match.push_back(hit);
    }
    next.resize(node.size());
    for (std::size_t s = 0; s < node.size(); ++s)
      for (auto x : R.alphabet) {
        Word w = node[s];
        w.push_back(x);
        for (std::size_t i = 0; i <= w.size(); ++i)
          if (auto it = index.find(Word(w.begin() + i, w.end())); it != index.end()) {
            next[s][x] = it->second;
            break;
          }
      }
  }
};

// Appends a, checks that u is a normal form, rewrites ua nondeterministically
// one rule at a time and returns to q once the tape holds a normal form.
inline void derivation_component(MachineBuilder& b, Symbol q, Symbol a, const RewritingBacking& backing,
                                 const std::map<Symbol, Symbol>& rename) {
  const auto& R = backing.system;
  const std::string pre = a.name() + ".";
  LhsAutomaton ac(R);
  auto t = [&](Symbol x) { return rename.at(x); };
  auto back = b.state(pre + "back"), last = b.state(pre + "last"), rw = b.state(pre + "rewind"),
       seek = b.state(pre + "seek");
  auto nf = [&](std::size_t s) { return b.state(pre + "nf" + std::to_string(s)); };
  auto fin = [&](std::size_t s) { return b.state(pre + "fin" + std::to_string(s)); };

  b.rule(Rule::insert(q, right_marker, a, back, t(a)));
  for (auto x : R.alphabet) {
    b.rule(Rule::move(back, t(x), epsilon, back, t(x), -1));
    b.rule(Rule::move(rw, t(x), epsilon, rw, t(x), -1));
    b.rule(Rule::move(seek, t(x), epsilon, seek, t(x), +1));
  }
  b.rule(Rule::marker(back, left_marker, epsilon, nf(0)));
  b.rule(Rule::marker(last, right_marker, epsilon, rw));
  b.rule(Rule::marker(rw, right_marker, epsilon, rw));
  b.rule(Rule::marker(rw, left_marker, epsilon, seek));
  b.rule(Rule::marker(rw, left_marker, epsilon, fin(0)));

  for (std::size_t s = 0; s < ac.node.size(); ++s) {
    if (ac.match[s]) continue;
    b.rule(Rule::marker(nf(s), right_marker, epsilon, rw));
    b.rule(Rule::stay(fin(s), right_marker, epsilon, q, right_marker));
    for (auto& [x, n] : ac.next[s]) {
      b.rule(Rule::move(nf(s), t(x), epsilon, ac.match[n] ? last : nf(n), t(x), +1));
      if (!ac.match[n]) b.rule(Rule::move(fin(s), t(x), epsilon, fin(n), t(x), +1));
    }
  }

  for (std::size_t i = 0; i < R.rules.size(); ++i) {
    auto& l = R.rules[i].lhs;
    auto& r = R.rules[i].rhs;
    auto id = pre + "r" + std::to_string(i) + ".";
    auto m = [&](std::size_t j) { return b.state(id + "m" + std::to_string(j)); };
    auto w = [&](std::size_t k) { return k == l.size() ? rw : b.state(id + "w" + std::to_string(k)); };
    auto bk = [&](std::size_t j) { return j == 0 ? w(0) : b.state(id + "b" + std::to_string(j)); };
    b.rule(Rule::stay(seek, t(l[0]), epsilon, m(0), t(l[0])));
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (j + 1 < l.size()) b.rule(Rule::move(m(j), t(l[j]), epsilon, m(j + 1), t(l[j]), +1));
      else b.rule(Rule::stay(m(j), t(l[j]), epsilon, bk(j), t(l[j])));
      if (j > 0) b.rule(Rule::move(bk(j), t(l[j]), epsilon, bk(j - 1), t(l[j]), -1));
    }
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (k < r.size()) b.rule(Rule::move(w(k), t(l[k]), epsilon, w(k + 1), t(r[k]), +1));
      else b.rule(Rule::erase(w(k), t(l[k]), epsilon, w(k + 1)));
    }
  }
}

}  // namespace detail

inline TransductionMachine transductions_to_llbm(const Family& family, Alphabet alphabet = {}) {
  for (auto& [a, T] : family) {
    if (alphabet.empty()) alphabet = T.alphabet;
    if (symbol_set(alphabet) != symbol_set(T.alphabet))
      throw AlphabetMismatch("members of the family use different alphabets");
    if (!T.acceptor && !T.rewriting)
      throw NeedsAcceptor("transduction '" + a.name() + "' is not backed by a machine");
  }
  TransductionMachine out;
  detail::MachineBuilder b;
  b.m.flavor = Flavor::llbm;
  b.taken = symbol_set(alphabet);
  for (auto& [a, _] : family) b.taken.insert(a);
  b.taken.insert(left_marker);
  b.taken.insert(right_marker);
  for (auto x : alphabet) {
    auto s = is_marker(x) ? b.fresh(x.name() + "'") : x;
    out.rename[x] = s;
    b.tape(s);
  }
  for (auto& [a, _] : family) {
    auto s = out.rename.count(a) ? out.rename[a] : a;
    b.tape(s);
    b.m.input.push_back(s);
    out.rename.emplace(a, s);
  }
  out.state = b.fresh("q");
  b.m.states.push_back(out.state);
  b.m.initial = out.state;
  b.m.finals = {out.state};
  for (auto& [a, T] : family) {
    auto label = out.rename.at(a);
    if (T.acceptor) {
      detail::acceptor_component(b, out.state, label, T, out.rename);
    } else {
      if (T.k > 0) throw PreconditionFailed("rewriting-backed members must be 0-incremental");
      detail::derivation_component(b, out.state, label, *T.rewriting, out.rename);
    }
  }
  b.complete();
  out.machine = std::move(b.m);
  return out;
}

// ---------------------------------------------------------------------------
// Conversion reports

struct ConversionReport {
  std::string source;
  std::string target;
  std::vector<std::size_t> radii;
  std::map<std::size_t, std::vector<std::size_t>> witnesses;  // radius -> vertex bijection
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> sizes;  // radius -> (vertices, edges)

  bool success() const {
    if (radii.empty()) return false;
    for (auto r : radii)
      if (!witnesses.count(r)) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    os << "source: " << source << "\ntarget: " << target << "\n";
    for (auto r : radii) {
      os << "radius " << r << ": ";
      if (auto it = sizes.find(r); it != sizes.end())
        os << it->second.first << " vertices, " << it->second.second << " edges, ";
      os << (witnesses.count(r) ? "isomorphic" : "not isomorphic") << "\n";
    }
    os << (success() ? "result: equivalent" : "result: mismatch") << "\n";
    return os.str();
  }
};

using BallFunction = std::function<GraphFragment(std::size_t)>;

inline ConversionReport compare_balls(std::string source, std::string target, const BallFunction& a,
                                      const BallFunction& b, std::vector<std::size_t> radii) {
  ConversionReport rep{std::move(source), std::move(target), std::move(radii), {}, {}};
  for (auto r : rep.radii) {
    auto x = a(r), y = b(r);
    rep.sizes[r] = {x.size(), x.edges().size()};
    if (auto w = isomorphic(x, y)) rep.witnesses[r] = std::move(*w);
  }
  return rep;
}

}  // namespace lbg
