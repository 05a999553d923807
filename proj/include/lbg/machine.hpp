#pragma once

#include <deque>
#include <limits>
#include <memory>
#include <unordered_set>

#include "lbg/core.hpp"

namespace lbg {

inline const Symbol left_marker{"["};
inline const Symbol right_marker{"]"};

inline bool is_marker(Symbol s) { return s == left_marker || s == right_marker; }

// pA -x-> qB+/-, p[ -x-> q[+, p] -x-> q]-, pA -x-> qB, pA -x-> qBA (also
// p] -x-> qA]) and pA -x-> q.
enum class Shape { move, marker, stay, insert, erase };

inline const char* shape_tag(Shape s) {
  switch (s) {
    case Shape::move: return "move";
    case Shape::marker: return "marker";
    case Shape::stay: return "stay";
    case Shape::insert: return "insert";
    case Shape::erase: return "delete";
  }
  return "?";
}

struct Rule {
  Symbol from;
  Symbol read;
  Symbol label;  // empty: epsilon, or no label on unlabeled machines
  Symbol to;
  Symbol write;  // written symbol; inserted symbol for inserts; unused for deletes
  Shape shape = Shape::move;
  int dir = 0;  // +1 or -1 for moves and marker moves

  friend bool operator==(const Rule&, const Rule&) = default;
  friend auto operator<=>(const Rule& a, const Rule& b) {
    return std::tie(a.from, a.read, a.label, a.to, a.write, a.shape, a.dir) <=>
           std::tie(b.from, b.read, b.label, b.to, b.write, b.shape, b.dir);
  }

  static Rule move(Symbol p, Symbol a, Symbol x, Symbol q, Symbol b, int dir) {
    return {p, a, x, q, b, Shape::move, dir};
  }
  static Rule marker(Symbol p, Symbol m, Symbol x, Symbol q) {
    return {p, m, x, q, m, Shape::marker, m == left_marker ? +1 : -1};
  }
  static Rule stay(Symbol p, Symbol a, Symbol x, Symbol q, Symbol b) {
    return {p, a, x, q, b, Shape::stay, 0};
  }
  static Rule insert(Symbol p, Symbol a, Symbol x, Symbol q, Symbol b) {
    return {p, a, x, q, b, Shape::insert, 0};
  }
  static Rule erase(Symbol p, Symbol a, Symbol x, Symbol q) {
    return {p, a, x, q, Symbol{}, Shape::erase, 0};
  }
};

inline std::string to_string(const Rule& r) {
  std::string arrow = r.label.empty() ? "->" : "-" + r.label.name() + "->";
  std::string out = r.from.name() + " " + r.read.name() + " " + arrow + " " + r.to.name();
  switch (r.shape) {
    case Shape::move:
    case Shape::marker:
      out += " " + r.write.name() + (r.dir > 0 ? " +" : " -");
      break;
    case Shape::stay: out += " " + r.write.name(); break;
    case Shape::insert: out += " " + r.write.name() + " " + r.read.name(); break;
    case Shape::erase: break;
  }
  return out;
}

enum class Flavor { lbm, llbm };

struct MachineDescription {
  Flavor flavor = Flavor::llbm;
  Alphabet tape;   // Gamma, markers excluded
  Alphabet input;  // Sigma, a subset of Gamma
  std::vector<Symbol> states;
  Symbol initial;
  std::vector<Symbol> finals;
  std::vector<Rule> rules;

  bool labeled() const { return flavor == Flavor::llbm; }
  bool is_final(Symbol q) const { return std::find(finals.begin(), finals.end(), q) != finals.end(); }
  bool has_state(Symbol q) const { return std::find(states.begin(), states.end(), q) != states.end(); }
  bool in_tape(Symbol a) const { return std::find(tape.begin(), tape.end(), a) != tape.end(); }
  bool in_input(Symbol a) const { return std::find(input.begin(), input.end(), a) != input.end(); }
};

// A tape [w] (markers included), a state and a head index into the tape.
struct Configuration {
  Word tape;
  Symbol state;
  std::size_t head = 0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration& a, const Configuration& b) {
    return std::tie(a.tape, a.state, a.head) <=> std::tie(b.tape, b.state, b.head);
  }

  // "[bq1a]": the state is written just before the scanned cell.
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < tape.size(); ++i) {
      if (i == head) out += state.name();
      out += tape[i].name();
    }
    return out;
  }

  // The same as a token sequence.
  Word tokens() const {
    Word out;
    for (std::size_t i = 0; i < tape.size(); ++i) {
      if (i == head) out.push_back(state);
      out.push_back(tape[i]);
    }
    return out;
  }
};

inline std::vector<Symbol> vocabulary(const MachineDescription& m) {
  std::vector<Symbol> v = m.tape;
  v.insert(v.end(), m.states.begin(), m.states.end());
  v.push_back(left_marker);
  v.push_back(right_marker);
  return v;
}

inline Configuration initial_configuration(const MachineDescription& m, const Word& w = {}) {
  Configuration c;
  c.tape.push_back(left_marker);
  if (!m.labeled()) c.tape.insert(c.tape.end(), w.begin(), w.end());
  c.tape.push_back(right_marker);
  c.state = m.initial;
  c.head = 1;
  return c;
}

// Parses "[bq1a]" style text: tape symbols with exactly one state inserted.
inline Configuration parse_configuration(const MachineDescription& m, std::string_view text) {
  auto tokens = tokenize(text, vocabulary(m));
  if (!tokens) throw InvalidConfiguration("cannot read '" + std::string(text) + "'");
  Configuration c;
  bool have_state = false;
  for (auto s : *tokens) {
    if (m.has_state(s) && !m.in_tape(s) && !is_marker(s)) {
      if (have_state) throw InvalidConfiguration("two states in '" + std::string(text) + "'");
      c.state = s;
      c.head = c.tape.size();
      have_state = true;
    } else {
      c.tape.push_back(s);
    }
  }
  if (!have_state) throw InvalidConfiguration("no state in '" + std::string(text) + "'");
  return c;
}

inline void check_configuration(const MachineDescription& m, const Configuration& c) {
  auto bad = [&](const std::string& why) { throw InvalidConfiguration(c.str() + ": " + why); };
  if (c.tape.size() < 2 || c.tape.front() != left_marker || c.tape.back() != right_marker)
    bad("tape must have the form [w]");
  for (std::size_t i = 1; i + 1 < c.tape.size(); ++i)
    if (!m.in_tape(c.tape[i])) bad("symbol '" + c.tape[i].name() + "' is not a tape symbol");
  if (c.head >= c.tape.size()) bad("head past the right marker");
  if (!m.has_state(c.state)) bad("unknown state '" + c.state.name() + "'");
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate(const MachineDescription& m) {
  std::vector<std::string> diag;
  auto sym_ok = [&](Symbol s) { return m.in_tape(s); };
  for (auto a : m.input)
    if (!m.in_tape(a)) diag.push_back("input symbol '" + a.name() + "' is not a tape symbol");
  for (auto a : m.tape) {
    if (is_marker(a)) diag.push_back("marker '" + a.name() + "' listed as a tape symbol");
    if (a.empty()) diag.push_back("empty tape symbol");
  }
  if (!m.has_state(m.initial)) diag.push_back("initial state '" + m.initial.name() + "' is not declared");
  for (auto f : m.finals)
    if (!m.has_state(f)) diag.push_back("final state '" + f.name() + "' is not declared");
  for (auto& r : m.rules) {
    auto where = "rule '" + to_string(r) + "': ";
    auto say = [&](const std::string& s) { diag.push_back(where + s); };
    if (!m.has_state(r.from)) say("undeclared state '" + r.from.name() + "'");
    if (!m.has_state(r.to)) say("undeclared state '" + r.to.name() + "'");
    if (!r.label.empty()) {
      if (!m.labeled()) say("unlabeled machines carry no labels");
      else if (!m.in_input(r.label)) say("label '" + r.label.name() + "' is not an input symbol");
    }
    switch (r.shape) {
      case Shape::move:
        if (is_marker(r.read) || is_marker(r.write)) say("rewrite rules must not touch markers");
        else if (!sym_ok(r.read) || !sym_ok(r.write)) say("unknown tape symbol");
        if (r.dir != 1 && r.dir != -1) say("direction must be + or -");
        break;
      case Shape::marker:
        if (!((r.read == left_marker && r.dir == 1) || (r.read == right_marker && r.dir == -1)) ||
            r.write != r.read)
          say("marker moves are p[ -> q[+ and p] -> q]-");
        break;
      case Shape::stay:
        if (is_marker(r.read) || is_marker(r.write)) {
          if (r.read != r.write) say("rewrite rules must not touch markers");
        } else if (!sym_ok(r.read) || !sym_ok(r.write)) {
          say("unknown tape symbol");
        }
        break;
      case Shape::insert:
        if (!m.labeled()) say("unlabeled machines cannot insert cells");
        else if (r.label.empty()) say("insert must be Σ-labeled");
        if (r.read == left_marker) say("cannot insert left of the left marker");
        else if (!sym_ok(r.read) && r.read != right_marker) say("unknown tape symbol");
        if (!sym_ok(r.write)) say("inserted symbol must be a tape symbol");
        break;
      case Shape::erase:
        if (!m.labeled()) say("unlabeled machines cannot delete cells");
        if (is_marker(r.read)) say("delete must not remove a marker");
        else if (!sym_ok(r.read)) say("unknown tape symbol");
        break;
    }
  }
  return diag;
}

// ---------------------------------------------------------------------------
// Engine: a compiled view of a machine over compact configuration keys.

enum class ExternalityPolicy { state, config };

namespace detail {

// key[0] = state id, key[1] = head, key[2..] = tape symbol ids.
using Key = std::u32string;

inline std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

class Engine {
 public:
  explicit Engine(const MachineDescription& m) : m_(m) {
    for (std::size_t i = 0; i < m_.rules.size(); ++i) {
      auto& r = m_.rules[i];
      index_[pair_key(r.from.id(), r.read.id())].push_back(static_cast<std::uint32_t>(i));
      if (r.label.empty() && m_.labeled()) {
        eps_states_.insert(r.from.id());
        eps_pairs_.insert(pair_key(r.from.id(), r.read.id()));
      }
    }
    for (auto f : m_.finals) finals_.insert(f.id());
  }

  const MachineDescription& machine() const { return m_; }

  static Key encode(const Configuration& c) {
    Key k;
    k.reserve(c.tape.size() + 2);
    k.push_back(static_cast<char32_t>(c.state.id()));
    k.push_back(static_cast<char32_t>(c.head));
    for (auto s : c.tape) k.push_back(static_cast<char32_t>(s.id()));
    return k;
  }

  static Configuration decode(const Key& k) {
    Configuration c;
    c.state = Symbol::from_id(k[0]);
    c.head = k[1];
    for (std::size_t i = 2; i < k.size(); ++i) c.tape.push_back(Symbol::from_id(k[i]));
    return c;
  }

  static std::uint32_t state_of(const Key& k) { return k[0]; }
  static std::uint32_t scanned(const Key& k) { return k[2 + k[1]]; }
  static std::size_t length(const Key& k) { return k.size() - 4; }

  bool final(const Key& k) const { return finals_.count(state_of(k)) > 0; }

  const std::vector<std::uint32_t>* rules_at(const Key& k) const {
    auto it = index_.find(pair_key(state_of(k), scanned(k)));
    return it == index_.end() ? nullptr : &it->second;
  }

  Key apply(const Key& k, const Rule& r) const {
    Key n = k;
    std::size_t h = k[1];
    std::size_t i = 2 + h;
    n[0] = static_cast<char32_t>(r.to.id());
    switch (r.shape) {
      case Shape::move:
      case Shape::marker:
        n[i] = static_cast<char32_t>(r.write.id());
        n[1] = static_cast<char32_t>(h + r.dir);
        break;
      case Shape::stay: n[i] = static_cast<char32_t>(r.write.id()); break;
      case Shape::insert: n.insert(n.begin() + i, static_cast<char32_t>(r.write.id())); break;
      case Shape::erase: n.erase(n.begin() + i); break;
    }
    return n;
  }

  template <class F>
  void for_each_move(const Key& k, F&& f) const {
    if (auto* rs = rules_at(k))
      for (auto i : *rs) f(m_.rules[i], apply(k, m_.rules[i]));
  }

  bool external(const Key& k, ExternalityPolicy p) const {
    if (p == ExternalityPolicy::state) return eps_states_.count(state_of(k)) == 0;
    return eps_pairs_.count(pair_key(state_of(k), scanned(k))) == 0;
  }

  // All external configurations reachable by epsilon moves (start included
  // when it is external). Internal configurations are expanded; silent
  // divergence simply contributes nothing.
  std::vector<Key> eps_closure(const Key& start, ExternalityPolicy p,
                               std::size_t cap = 5000000) const {
    std::vector<Key> out;
    std::unordered_set<Key> seen{start};
    std::vector<Key> stack{start};
    while (!stack.empty()) {
      Key k = std::move(stack.back());
      stack.pop_back();
      if (external(k, p)) {
        out.push_back(k);
        continue;
      }
      for_each_move(k, [&](const Rule& r, Key n) {
        if (!r.label.empty()) return;
        if (seen.insert(n).second) {
          if (seen.size() > cap) throw SizeExceeded("epsilon closure exceeds cap");
          stack.push_back(std::move(n));
        }
      });
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Edges of the transition graph leaving an external configuration.
  std::vector<std::pair<Symbol, Key>> closure_edges(const Key& k, ExternalityPolicy p) const {
    std::set<std::pair<std::uint32_t, Key>> acc;
    for_each_move(k, [&](const Rule& r, Key n) {
      if (r.label.empty()) return;
      for (auto& t : eps_closure(n, p)) acc.emplace(r.label.id(), t);
    });
    std::vector<std::pair<Symbol, Key>> out;
    for (auto& [a, t] : acc) out.emplace_back(Symbol::from_id(a), t);
    return out;
  }

  // True when no epsilon cycle is reachable from k.
  bool eps_terminates(const Key& k, std::size_t cap = 5000000) const {
    std::unordered_map<Key, int> colour;  // 1 on stack, 2 done
    std::vector<std::pair<Key, bool>> stack{{k, false}};
    while (!stack.empty()) {
      auto [x, leaving] = stack.back();
      stack.pop_back();
      if (leaving) {
        colour[x] = 2;
        continue;
      }
      auto& c = colour[x];
      if (c == 2) continue;
      if (c == 1) continue;
      c = 1;
      if (colour.size() > cap) throw SizeExceeded("epsilon search exceeds cap");
      stack.emplace_back(x, true);
      bool cycle = false;
      for_each_move(x, [&](const Rule& r, Key n) {
        if (!r.label.empty()) return;
        auto it = colour.find(n);
        if (it != colour.end() && it->second == 1) cycle = true;
        else if (it == colour.end()) stack.emplace_back(std::move(n), false);
      });
      if (cycle) return false;
    }
    return true;
  }

 private:
  MachineDescription m_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
  std::unordered_set<std::uint32_t> eps_states_;
  std::unordered_set<std::uint64_t> eps_pairs_;
  std::unordered_set<std::uint32_t> finals_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Semantics

inline std::set<std::pair<Symbol, Configuration>> step(const MachineDescription& m,
                                                       const Configuration& c) {
  check_configuration(m, c);
  detail::Engine e(m);
  std::set<std::pair<Symbol, Configuration>> out;
  e.for_each_move(detail::Engine::encode(c), [&](const Rule& r, const detail::Key& n) {
    out.emplace(r.label, detail::Engine::decode(n));
  });
  return out;
}

// Exact: reachability over (configuration, letters consumed) with a visited
// set, so it terminates on every machine.
inline bool accepts(const MachineDescription& m, const Word& w,
                    std::optional<Configuration> start = std::nullopt) {
  for (auto a : w)
    if (!m.in_input(a)) throw InvalidInput("'" + a.name() + "' is not an input symbol");
  detail::Engine e(m);
  auto c0 = start ? *start : initial_configuration(m, w);
  check_configuration(m, c0);
  auto k0 = detail::Engine::encode(c0);
  if (!m.labeled()) {
    std::unordered_set<detail::Key> seen{k0};
    std::vector<detail::Key> stack{k0};
    while (!stack.empty()) {
      auto k = std::move(stack.back());
      stack.pop_back();
      if (e.final(k)) return true;
      e.for_each_move(k, [&](const Rule&, detail::Key n) {
        if (seen.insert(n).second) stack.push_back(std::move(n));
      });
    }
    return false;
  }
  // The consumed-prefix length is appended to the key.
  auto tag = [](detail::Key k, std::size_t i) {
    k.push_back(static_cast<char32_t>(i));
    return k;
  };
  std::unordered_set<detail::Key> seen{tag(k0, 0)};
  std::vector<std::pair<detail::Key, std::size_t>> stack{{k0, 0}};
  while (!stack.empty()) {
    auto [k, i] = std::move(stack.back());
    stack.pop_back();
    if (i == w.size() && e.final(k)) return true;
    e.for_each_move(k, [&](const Rule& r, detail::Key n) {
      std::size_t j = i;
      if (!r.label.empty()) {
        if (i == w.size() || r.label != w[i]) return;
        j = i + 1;
      }
      if (seen.insert(tag(n, j)).second) stack.emplace_back(std::move(n), j);
    });
  }
  return false;
}

// Every configuration either has moves with pairwise distinct letters, or a
// single epsilon move. Moves depend only on (state, scanned symbol) and
// distinct rules yield distinct successors, so the check is local.
inline bool is_deterministic(const MachineDescription& m) {
  std::map<std::pair<Symbol, Symbol>, std::set<Rule>> groups;
  for (auto& r : m.rules) groups[{r.from, r.read}].insert(r);
  for (auto& [_, rs] : groups) {
    bool eps = false;
    std::set<Symbol> labels;
    for (auto& r : rs) {
      if (r.label.empty()) eps = true;
      labels.insert(r.label);
    }
    if (eps && rs.size() > 1) return false;
    if (labels.size() != rs.size()) return false;
  }
  return true;
}

inline std::uint64_t step_bound(const MachineDescription& m, std::size_t n) {
  using U = unsigned __int128;
  U total = 0, power = 1;
  const U limit = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t len = 0; len <= n; ++len) {
    total += U(m.states.size()) * U(len + 2) * power;
    if (total > limit) throw std::overflow_error("step bound overflows 64 bits");
    power *= U(m.tape.size());
    if (power > limit) power = limit + 1;
  }
  return static_cast<std::uint64_t>(total);
}

// ---------------------------------------------------------------------------
// Normalization

inline Symbol fresh_symbol(const std::string& base, const std::set<Symbol>& taken) {
  std::string name = base;
  while (taken.count(Symbol(name))) name += "'";
  return Symbol(name);
}

// Def. of normalized machines: states split into Q_eps (epsilon rules only,
// one for every tape symbol) and Q_Sigma (letter rules only), F in Q_Sigma.
inline bool is_normalized(const MachineDescription& m) {
  std::set<Symbol> eps_states, sigma_states;
  std::set<std::pair<Symbol, Symbol>> eps_pairs;
  for (auto& r : m.rules) {
    if (r.label.empty()) {
      eps_states.insert(r.from);
      eps_pairs.emplace(r.from, r.read);
    } else {
      sigma_states.insert(r.from);
    }
  }
  for (auto p : eps_states) {
    if (sigma_states.count(p) || m.is_final(p)) return false;
    for (auto a : m.tape)
      if (!eps_pairs.count({p, a})) return false;
  }
  return true;
}

// Structural repair. States mixing letter and epsilon rules (or final states
// with epsilon rules) are split into an internal dispatcher p~ that keeps the
// epsilon rules and bridges to the external p by an epsilon stay on every
// symbol p would be external on; purely internal states get self loops.
inline MachineDescription normalize(const MachineDescription& m) {
  MachineDescription out = m;
  if (!m.labeled()) return out;
  std::set<Symbol> taken(m.states.begin(), m.states.end());
  taken.insert(m.tape.begin(), m.tape.end());
  Alphabet all = m.tape;
  all.push_back(left_marker);
  all.push_back(right_marker);

  std::map<Symbol, std::set<Symbol>> eps_syms, sigma_syms;
  for (auto& r : m.rules) (r.label.empty() ? eps_syms : sigma_syms)[r.from].insert(r.read);

  std::map<Symbol, Symbol> dispatcher;
  for (auto p : m.states) {
    if (!eps_syms.count(p)) continue;
    if (!sigma_syms.count(p) && !m.is_final(p)) continue;
    auto d = fresh_symbol(p.name() + "~", taken);
    taken.insert(d);
    dispatcher[p] = d;
  }
  auto target = [&](Symbol q) {
    auto it = dispatcher.find(q);
    return it == dispatcher.end() ? q : it->second;
  };

  out.rules.clear();
  for (auto& r : m.rules) {
    Rule n = r;
    n.to = target(r.to);
    if (r.label.empty() && dispatcher.count(r.from)) n.from = dispatcher[r.from];
    out.rules.push_back(n);
  }
  out.states.clear();
  for (auto p : m.states) {
    out.states.push_back(p);
    if (dispatcher.count(p)) out.states.push_back(dispatcher[p]);
  }
  out.initial = target(m.initial);

  for (auto p : m.states) {
    if (!eps_syms.count(p)) continue;
    if (auto it = dispatcher.find(p); it != dispatcher.end()) {
      for (auto a : all) {
        bool bridge = m.is_final(p) || !eps_syms[p].count(a) || sigma_syms[p].count(a);
        if (bridge) out.rules.push_back(Rule::stay(it->second, a, epsilon, p, a));
      }
    } else {
      for (auto a : all)
        if (!eps_syms[p].count(a)) out.rules.push_back(Rule::stay(p, a, epsilon, p, a));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unlabeled to labeled

// The labeled machine waits in q_A / q_R with the head on the right marker.
// Reading a appends a, copies the tape onto a second track and runs the
// unlabeled machine there with epsilon moves. It may give up at any time
// (restoring the tape and entering q_R); it enters q_A only after the
// simulated machine reached a final state.
inline MachineDescription lbm_to_llbm(const MachineDescription& n) {
  if (n.labeled()) throw PreconditionFailed("lbm_to_llbm expects an unlabeled machine");
  MachineDescription m;
  m.flavor = Flavor::llbm;
  m.input = n.input;
  std::set<Symbol> taken(n.tape.begin(), n.tape.end());
  taken.insert(n.states.begin(), n.states.end());
  auto fresh = [&](const std::string& base) {
    auto s = fresh_symbol(base, taken);
    taken.insert(s);
    return s;
  };
  auto pair_sym = [&](Symbol x, Symbol y) { return Symbol("<" + x.name() + "," + y.name() + ">"); };

  m.tape = n.input;
  for (auto x : n.input)
    for (auto y : n.tape) m.tape.push_back(pair_sym(x, y));

  auto qa = fresh("qA"), qr = fresh("qR"), qs = fresh("qS");
  std::map<Symbol, Symbol> sim;
  for (auto p : n.states) sim[p] = fresh("n." + p.name());
  Symbol go_a = fresh("back.A"), go_r = fresh("back.R");
  Symbol put_a = fresh("put.A"), put_r = fresh("put.R");
  m.states = {qa, qr, qs, go_a, go_r, put_a, put_r};
  for (auto p : n.states) m.states.push_back(sim[p]);
  m.finals = {qa};
  m.initial = accepts(n, {}) ? qa : qr;

  auto& R = m.rules;
  for (auto x : n.input) {
    R.push_back(Rule::insert(qa, right_marker, x, qs, x));
    R.push_back(Rule::insert(qr, right_marker, x, qs, x));
    R.push_back(Rule::move(qs, x, epsilon, qs, pair_sym(x, x), -1));
  }
  R.push_back(Rule::marker(qs, left_marker, epsilon, sim[n.initial]));

  for (auto& r : n.rules) {
    auto p = sim[r.from], q = sim[r.to];
    if (r.shape == Shape::marker) {
      R.push_back(Rule::marker(p, r.read, epsilon, q));
      continue;
    }
    if (is_marker(r.read)) {  // marker stay
      R.push_back(Rule::stay(p, r.read, epsilon, q, r.read));
      continue;
    }
    for (auto x : n.input) {
      auto a = pair_sym(x, r.read), b = pair_sym(x, r.write);
      if (r.shape == Shape::move) R.push_back(Rule::move(p, a, epsilon, q, b, r.dir));
      else R.push_back(Rule::stay(p, a, epsilon, q, b));
    }
  }

  Alphabet cells;
  for (auto x : n.input)
    for (auto y : n.tape) cells.push_back(pair_sym(x, y));
  auto give_up = [&](Symbol from, Symbol via) {
    for (auto c : cells) R.push_back(Rule::stay(from, c, epsilon, via, c));
    R.push_back(Rule::stay(from, left_marker, epsilon, via, left_marker));
    R.push_back(Rule::stay(from, right_marker, epsilon, via, right_marker));
  };
  for (auto p : n.states) {
    give_up(sim[p], go_r);
    if (n.is_final(p)) give_up(sim[p], go_a);
  }
  for (auto [go, put, done] : {std::tuple{go_a, put_a, qa}, std::tuple{go_r, put_r, qr}}) {
    for (auto c : cells) R.push_back(Rule::move(go, c, epsilon, go, c, -1));
    R.push_back(Rule::marker(go, right_marker, epsilon, go));
    R.push_back(Rule::marker(go, left_marker, epsilon, put));
    for (auto x : n.input)
      for (auto y : n.tape) R.push_back(Rule::move(put, pair_sym(x, y), epsilon, put, x, +1));
    R.push_back(Rule::stay(put, right_marker, epsilon, done, right_marker));
  }
  return normalize(m);
}

// ---------------------------------------------------------------------------
// Transition-graph helpers shared with tgraph

inline std::vector<std::pair<Symbol, Configuration>> closure_edges(
    const MachineDescription& m, const Configuration& c,
    ExternalityPolicy policy = ExternalityPolicy::config) {
  check_configuration(m, c);
  detail::Engine e(m);
  auto k = detail::Engine::encode(c);
  if (!e.external(k, policy)) throw NotExternal(c.str());
  std::vector<std::pair<Symbol, Configuration>> out;
  for (auto& [a, t] : e.closure_edges(k, policy)) out.emplace_back(a, detail::Engine::decode(t));
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline Generator<Key> transition_generator(std::shared_ptr<const Engine> e,
                                           ExternalityPolicy policy) {
  Generator<Key> g;
  auto memo = std::make_shared<std::map<Key, std::vector<std::pair<Symbol, Key>>>>();
  g.edges = [e, policy, memo](const Key& k) {
    auto it = memo->find(k);
    if (it == memo->end()) it = memo->emplace(k, e->closure_edges(k, policy)).first;
    return it->second;
  };
  g.name = [](const Key& k) { return Engine::decode(k).str(); };
  return g;
}

}  // namespace detail

// Keeps one rule per (state, scanned symbol, label). Ties are broken by the
// smallest (target state name, shape tag, written symbol, direction).
// Requires a terminating machine whose transition graph is deterministic;
// both are checked on the ball of the given radius.
inline MachineDescription prune_determinize(const MachineDescription& m,
                                            std::optional<Configuration> start = std::nullopt,
                                            std::size_t radius = 3,
                                            ExternalityPolicy policy = ExternalityPolicy::config,
                                            std::size_t cap = default_vertex_cap) {
  auto e = std::make_shared<const detail::Engine>(m);
  auto c0 = start ? *start : initial_configuration(m);
  check_configuration(m, c0);
  auto k0 = detail::Engine::encode(c0);
  if (!e->external(k0, policy)) throw NotExternal(c0.str());
  auto g = detail::transition_generator(e, policy);
  auto x = explore(g, {k0}, radius, cap);
  for (std::size_t v = 0; v < x.vertices.size(); ++v) {
    std::set<Symbol> labels;
    for (auto& edge : x.fragment.out_edges(v))
      if (!labels.insert(edge.label).second)
        throw PreconditionFailed("transition graph is not deterministic at " + x.fragment.name(v));
    if (x.distance[v] >= radius) continue;
    bool ok = true;
    e->for_each_move(x.vertices[v], [&](const Rule& r, const detail::Key& n) {
      if (!r.label.empty() && !e->eps_terminates(n)) ok = false;
    });
    if (!ok) throw PreconditionFailed("epsilon cycle reachable from " + x.fragment.name(v));
  }
  std::map<std::tuple<Symbol, Symbol, Symbol>, Rule> keep;
  auto rank = [](const Rule& r) {
    return std::make_tuple(r.to.name(), std::string(shape_tag(r.shape)), r.write.name(), r.dir);
  };
  for (auto& r : m.rules) {
    auto key = std::make_tuple(r.from, r.read, r.label);
    auto it = keep.find(key);
    if (it == keep.end() || rank(r) < rank(it->second)) keep[key] = r;
  }
  MachineDescription out = m;
  out.rules.clear();
  std::set<Rule> seen;
  for (auto& r : m.rules)
    if (keep[{r.from, r.read, r.label}] == r && seen.insert(r).second) out.rules.push_back(r);
  return out;
}

}  // namespace lbg
