#pragma once

#include <regex>

#include "lbg/machine.hpp"

namespace lbg {

// ---------------------------------------------------------------------------
// Anchored patterns over words of symbols: "[b*q2b]", "(ab)+", "a|b?".
// Letters are symbols of a vocabulary (longest match first); the operators
// are ( ) * + ? | and '.' for any symbol.

class WordPattern {
 public:
  WordPattern(std::string_view pattern, std::vector<Symbol> vocab) : vocab_(std::move(vocab)) {
    std::sort(vocab_.begin(), vocab_.end(),
              [](Symbol a, Symbol b) { return a.name().size() > b.name().size(); });
    std::wstring re;
    for (std::size_t i = 0; i < pattern.size();) {
      char c = pattern[i];
      if (c == ' ') {
        ++i;
        continue;
      }
      bool hit = false;
      for (auto s : vocab_) {
        auto& n = s.name();
        if (!n.empty() && pattern.substr(i, n.size()) == n) {
          re += code(s);
          i += n.size();
          hit = true;
          break;
        }
      }
      if (hit) continue;
      if (std::string_view("()*+?|").find(c) != std::string_view::npos) {
        re += static_cast<wchar_t>(c);
      } else if (c == '.') {
        re += L'[';
        re += static_cast<wchar_t>(base);
        re += L'-';
        re += static_cast<wchar_t>(base + 0x1000);
        re += L']';
      } else {
        throw InvalidInput("unexpected '" + std::string(1, c) + "' in pattern '" +
                           std::string(pattern) + "'");
      }
      ++i;
    }
    try {
      re_ = std::wregex(re);
    } catch (const std::regex_error&) {
      throw InvalidInput("malformed pattern '" + std::string(pattern) + "'");
    }
  }

  bool matches(const Word& w) const {
    std::wstring s;
    for (auto a : w) s += code(a);
    return std::regex_match(s, re_);
  }

 private:
  static constexpr wchar_t base = 0xE000;
  wchar_t code(Symbol s) const {
    auto it = index_.find(s);
    if (it == index_.end()) it = index_.emplace(s, index_.size()).first;
    // Unknown symbols get codes too: they can only match '.'.
    return static_cast<wchar_t>(base + it->second);
  }

  std::vector<Symbol> vocab_;
  mutable std::map<Symbol, std::size_t> index_;
  std::wregex re_;
};

// Final-vertex predicates: a finite set of names, a pattern, or a function.
using ConfigPredicate = std::function<bool(const Configuration&)>;

inline ConfigPredicate final_names(std::set<std::string> names) {
  return [names = std::move(names)](const Configuration& c) { return names.count(c.str()) > 0; };
}

inline ConfigPredicate final_pattern(const MachineDescription& m, std::string_view pattern) {
  auto p = std::make_shared<const WordPattern>(pattern, vocabulary(m));
  return [p](const Configuration& c) { return p->matches(c.tokens()); };
}

inline ConfigPredicate final_states(const MachineDescription& m) {
  std::set<Symbol> f(m.finals.begin(), m.finals.end());
  return [f](const Configuration& c) { return f.count(c.state) > 0; };
}

// ---------------------------------------------------------------------------
// Transition graphs of labeled machines

inline Generator<Configuration> transition_generator(
    const MachineDescription& m, ExternalityPolicy policy = ExternalityPolicy::config) {
  auto e = std::make_shared<const detail::Engine>(m);
  auto inner = detail::transition_generator(e, policy);
  Generator<Configuration> g;
  g.edges = [inner](const Configuration& c) {
    std::vector<std::pair<Symbol, Configuration>> out;
    for (auto& [a, k] : inner.edges(detail::Engine::encode(c)))
      out.emplace_back(a, detail::Engine::decode(k));
    return out;
  };
  g.name = [](const Configuration& c) { return c.str(); };
  return g;
}

inline bool is_external(const MachineDescription& m, const Configuration& c,
                        ExternalityPolicy policy = ExternalityPolicy::config) {
  return detail::Engine(m).external(detail::Engine::encode(c), policy);
}

// The external configurations reachable from c by epsilon moves; {c} when c
// is already external.
inline std::vector<Configuration> external_roots(
    const MachineDescription& m, const Configuration& c,
    ExternalityPolicy policy = ExternalityPolicy::config) {
  check_configuration(m, c);
  detail::Engine e(m);
  std::vector<Configuration> out;
  for (auto& k : e.eps_closure(detail::Engine::encode(c), policy))
    out.push_back(detail::Engine::decode(k));
  return out;
}

inline GraphFragment transition_ball(const MachineDescription& m, const Configuration& c0,
                                     std::size_t radius,
                                     ExternalityPolicy policy = ExternalityPolicy::config,
                                     std::size_t cap = default_vertex_cap) {
  check_configuration(m, c0);
  if (!is_external(m, c0, policy)) throw NotExternal(c0.str());
  return ball(transition_generator(m, policy), {c0}, radius, cap);
}

// Path language from c0 (or from the external configurations it silently
// reaches, when c0 is internal).
inline std::set<Word> language(const MachineDescription& m, const Configuration& c0,
                               const ConfigPredicate& final, std::size_t maxlen,
                               ExternalityPolicy policy = ExternalityPolicy::config,
                               std::size_t cap = 5000000) {
  auto g = transition_generator(m, policy);
  std::set<Word> out;
  for (auto& r : external_roots(m, c0, policy)) {
    auto l = path_language<Configuration>(g, r, final, maxlen, cap);
    out.insert(l.begin(), l.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Caucal closure: an a-edge for every eps* a eps* path, then restriction.

template <class V>
Generator<V> caucal_generator(const Generator<V>& config_graph, std::function<bool(const V&)> keep,
                              std::size_t cap = 5000000) {
  Generator<V> g;
  g.name = config_graph.name;
  g.edges = [config_graph, keep, cap](const V& v) {
    auto eps_reach = [&](const V& s) {
      std::set<V> seen{s};
      std::vector<V> stack{s};
      while (!stack.empty()) {
        V x = stack.back();
        stack.pop_back();
        for (auto& [a, y] : config_graph.edges(x))
          if (a.empty() && seen.insert(y).second) {
            if (seen.size() > cap) throw SizeExceeded("epsilon search exceeds cap");
            stack.push_back(y);
          }
      }
      return seen;
    };
    std::set<std::pair<Symbol, V>> acc;
    for (auto& x : eps_reach(v))
      for (auto& [a, y] : config_graph.edges(x)) {
        if (a.empty()) continue;
        for (auto& t : eps_reach(y))
          if (keep(t)) acc.emplace(a, t);
      }
    return std::vector<std::pair<Symbol, V>>(acc.begin(), acc.end());
  };
  return g;
}

// Our closure on an explicit graph: external vertices have no eps edge.
template <class V>
Generator<V> closure_generator(const Generator<V>& config_graph, std::size_t cap = 5000000) {
  auto external = [config_graph](const V& v) {
    for (auto& [a, _] : config_graph.edges(v))
      if (a.empty()) return false;
    return true;
  };
  Generator<V> g;
  g.name = config_graph.name;
  g.edges = [config_graph, external, cap](const V& v) {
    if (!external(v)) throw NotExternal(config_graph.name(v));
    std::set<std::pair<Symbol, V>> acc;
    for (auto& [a, y] : config_graph.edges(v)) {
      if (a.empty()) continue;
      std::set<V> seen{y};
      std::vector<V> stack{y};
      while (!stack.empty()) {
        V x = stack.back();
        stack.pop_back();
        if (external(x)) {
          acc.emplace(a, x);
          continue;
        }
        for (auto& [b, z] : config_graph.edges(x))
          if (b.empty() && seen.insert(z).second) {
            if (seen.size() > cap) throw SizeExceeded("epsilon search exceeds cap");
            stack.push_back(z);
          }
      }
    }
    return std::vector<std::pair<Symbol, V>>(acc.begin(), acc.end());
  };
  return g;
}

// The raw configuration graph of a machine, eps edges included.
inline Generator<Configuration> configuration_generator(const MachineDescription& m) {
  auto e = std::make_shared<const detail::Engine>(m);
  Generator<Configuration> g;
  g.edges = [e](const Configuration& c) {
    std::set<std::pair<Symbol, Configuration>> acc;
    e->for_each_move(detail::Engine::encode(c), [&](const Rule& r, const detail::Key& n) {
      acc.emplace(r.label, detail::Engine::decode(n));
    });
    return std::vector<std::pair<Symbol, Configuration>>(acc.begin(), acc.end());
  };
  g.name = [](const Configuration& c) { return c.str(); };
  return g;
}

inline GraphFragment caucal_ball(const MachineDescription& m, const Configuration& c0,
                                 std::size_t radius, const ConfigPredicate& restriction,
                                 std::size_t cap = default_vertex_cap) {
  check_configuration(m, c0);
  return ball(caucal_generator<Configuration>(configuration_generator(m), restriction), {c0},
              radius, cap);
}

inline GraphFragment caucal_ball(const FiniteGraph& g, const std::string& root, std::size_t radius,
                                 const std::function<bool(const std::string&)>& restriction,
                                 std::size_t cap = default_vertex_cap) {
  return ball(caucal_generator<std::string>(g.generator(), restriction), {root}, radius, cap);
}

inline std::vector<std::pair<Symbol, std::string>> closure_edges(const FiniteGraph& g,
                                                                 const std::string& v) {
  return closure_generator<std::string>(g.generator()).edges(v);
}

inline GraphFragment closure_ball(const FiniteGraph& g, const std::string& root,
                                  std::size_t radius, std::size_t cap = default_vertex_cap) {
  return ball(closure_generator<std::string>(g.generator()), {root}, radius, cap);
}

// ---------------------------------------------------------------------------
// Synchronized products

struct SyncConstraint {
  Symbol left;
  Symbol right;
  Symbol label;  // label of the product edge
};

inline std::vector<SyncConstraint> diagonal(const Alphabet& sigma) {
  std::vector<SyncConstraint> out;
  for (auto a : sigma) out.push_back({a, a, a});
  return out;
}

inline Symbol pair_label(Symbol a, Symbol b) { return Symbol("(" + a.name() + "," + b.name() + ")"); }

template <class V1, class V2>
Generator<std::pair<V1, V2>> synchronized_product(const Generator<V1>& g1, const Generator<V2>& g2,
                                                  std::vector<SyncConstraint> constraints) {
  Generator<std::pair<V1, V2>> g;
  g.edges = [g1, g2, constraints](const std::pair<V1, V2>& v) {
    std::set<std::pair<Symbol, std::pair<V1, V2>>> acc;
    if (constraints.empty()) return std::vector<std::pair<Symbol, std::pair<V1, V2>>>{};
    auto e1 = g1.edges(v.first);
    auto e2 = g2.edges(v.second);
    for (auto& [a, x] : e1)
      for (auto& [b, y] : e2)
        for (auto& c : constraints)
          if (c.left == a && c.right == b) acc.insert({c.label, {x, y}});
    return std::vector<std::pair<Symbol, std::pair<V1, V2>>>(acc.begin(), acc.end());
  };
  g.name = [g1, g2](const std::pair<V1, V2>& v) {
    return "(" + g1.name(v.first) + "," + g2.name(v.second) + ")";
  };
  if (g1.truncated || g2.truncated)
    g.truncated = [g1, g2](const std::pair<V1, V2>& v) {
      return (g1.truncated && g1.truncated(v.first)) || (g2.truncated && g2.truncated(v.second));
    };
  return g;
}

// Restriction to the vertices reachable from root is exploration itself.
template <class V>
GraphFragment reachable_restriction(const Generator<V>& g, const V& root, std::size_t radius,
                                    std::size_t cap = default_vertex_cap) {
  return ball(g, {root}, radius, cap);
}

}  // namespace lbg
