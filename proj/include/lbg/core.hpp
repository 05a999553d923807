#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lbg {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define LBG_ERROR(name)                        \
  struct name : Error {                        \
    explicit name(const std::string& what)     \
        : Error(std::string(#name ": ") + what) {} \
  }

LBG_ERROR(SizeExceeded);
LBG_ERROR(InvalidConfiguration);
LBG_ERROR(InvalidInput);
LBG_ERROR(PreconditionFailed);
LBG_ERROR(NotExternal);
LBG_ERROR(NotNormalForm);
LBG_ERROR(NotNormalized);
LBG_ERROR(NotSynchronized);
LBG_ERROR(NotFiniteImage);
LBG_ERROR(NotFunctional);
LBG_ERROR(UnknownRoot);
LBG_ERROR(NeedsAcceptor);
LBG_ERROR(AlphabetMismatch);

#undef LBG_ERROR

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

inline constexpr std::size_t default_vertex_cap = 10000;

// ---------------------------------------------------------------------------
// Symbols

namespace detail {

class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable t;
    return t;
  }

  std::uint32_t intern(std::string_view name) {
    {
      std::shared_lock lock(mu_);
      auto it = index_.find(name);
      if (it != index_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    names_.emplace_back(name);
    auto id = static_cast<std::uint32_t>(names_.size() - 1);
    index_.emplace(std::string_view(names_.back()), id);
    return id;
  }

  const std::string& name(std::uint32_t id) const {
    std::shared_lock lock(mu_);
    return names_[id];
  }

 private:
  SymbolTable() { intern(""); }

  mutable std::shared_mutex mu_;
  std::deque<std::string> names_;
  std::unordered_map<std::string_view, std::uint32_t> index_;
};

}  // namespace detail

// An interned token. The default-constructed symbol has the empty name and
// stands for the empty label (epsilon) wherever labels are optional.
class Symbol {
 public:
  Symbol() = default;
  Symbol(std::string_view name) : id_(detail::SymbolTable::instance().intern(name)) {}
  Symbol(const char* name) : Symbol(std::string_view(name)) {}
  Symbol(const std::string& name) : Symbol(std::string_view(name)) {}

  static Symbol from_id(std::uint32_t id) {
    Symbol s;
    s.id_ = id;
    return s;
  }

  const std::string& name() const { return detail::SymbolTable::instance().name(id_); }
  std::uint32_t id() const { return id_; }
  bool empty() const { return id_ == 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
    if (a.id_ == b.id_) return std::strong_ordering::equal;
    return a.name() <=> b.name();
  }

 private:
  std::uint32_t id_ = 0;
};

inline const Symbol epsilon{};

using Word = std::vector<Symbol>;
using Alphabet = std::vector<Symbol>;

inline std::string str(const Word& w) {
  std::string out;
  for (auto s : w) out += s.name();
  return out;
}

inline std::string label_str(Symbol s) { return s.empty() ? "eps" : s.name(); }

// Splits text into one symbol per UTF-8 code point.
inline Word chars(std::string_view text) {
  Word w;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = 1;
    auto c = static_cast<unsigned char>(text[i]);
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    w.emplace_back(text.substr(i, len));
    i += len;
  }
  return w;
}

// Greedy longest-match tokenization against a vocabulary.
inline std::optional<Word> tokenize(std::string_view text, const std::vector<Symbol>& vocab) {
  std::vector<const std::string*> names;
  for (auto s : vocab)
    if (!s.empty()) names.push_back(&s.name());
  std::sort(names.begin(), names.end(),
            [](auto* a, auto* b) { return a->size() > b->size(); });
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    bool hit = false;
    for (auto* n : names) {
      if (text.substr(i, n->size()) == *n) {
        w.emplace_back(*n);
        i += n->size();
        hit = true;
        break;
      }
    }
    if (!hit) return std::nullopt;
  }
  return w;
}

inline Word parse_word(std::string_view text, const std::vector<Symbol>& vocab) {
  if (text == "eps" || text.empty()) return {};
  auto w = tokenize(text, vocab);
  if (!w) throw InvalidInput("cannot split '" + std::string(text) + "' into known symbols");
  return *w;
}

// Length-then-lexicographic order, letters ranked by position in `order`.
inline bool shortlex_less(const Word& a, const Word& b, const Alphabet& order) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    auto ia = std::find(order.begin(), order.end(), a[i]);
    auto ib = std::find(order.begin(), order.end(), b[i]);
    if (ia != ib) return ia < ib;
    return a[i] < b[i];
  }
  return false;
}

// All words of length exactly n over sigma, in lexicographic order.
inline std::vector<Word> words_of_length(const Alphabet& sigma, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Word> next;
    next.reserve(out.size() * sigma.size());
    for (auto& w : out)
      for (auto a : sigma) {
        next.push_back(w);
        next.back().push_back(a);
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Word> words_up_to(const Alphabet& sigma, std::size_t n) {
  std::vector<Word> out;
  for (std::size_t m = 0; m <= n; ++m) {
    auto layer = words_of_length(sigma, m);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph fragments

struct Edge {
  std::size_t source;
  Symbol label;
  std::size_t target;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge& a, const Edge& b) {
    if (auto c = a.source <=> b.source; c != 0) return c;
    if (auto c = a.label.id() <=> b.label.id(); c != 0) return c;
    return a.target <=> b.target;
  }
};

class GraphFragment {
 public:
  std::size_t add_vertex(std::string name) {
    names_.push_back(std::move(name));
    by_name_.emplace(names_.back(), names_.size() - 1);
    return names_.size() - 1;
  }

  // Returns false when the triple was already present.
  bool add_edge(std::size_t s, Symbol label, std::size_t t) {
    if (s >= names_.size() || t >= names_.size())
      throw std::out_of_range("edge endpoint is not a vertex");
    return edges_.insert({s, label, t}).second;
  }

  void add_root(std::size_t v) { roots_.insert(check(v)); }
  void add_frontier(std::size_t v) { frontier_.insert(check(v)); }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t v) const { return names_.at(v); }
  const std::set<Edge>& edges() const { return edges_; }
  const std::set<std::size_t>& roots() const { return roots_; }
  const std::set<std::size_t>& frontier() const { return frontier_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(std::size_t s, Symbol label, std::size_t t) const {
    return edges_.count({s, label, t}) > 0;
  }

  std::vector<Edge> out_edges(std::size_t v) const {
    std::vector<Edge> out;
    for (auto it = edges_.lower_bound({v, Symbol::from_id(0), 0});
         it != edges_.end() && it->source == v; ++it)
      out.push_back(*it);
    return out;
  }

  std::size_t out_degree(std::size_t v) const { return out_edges(v).size(); }

  std::size_t in_degree(std::size_t v) const {
    std::size_t n = 0;
    for (auto& e : edges_) n += e.target == v;
    return n;
  }

  // Multiset of labels, useful for comparing fragments in tests.
  std::multiset<std::tuple<std::string, std::string, std::string>> named_edges() const {
    std::multiset<std::tuple<std::string, std::string, std::string>> out;
    for (auto& e : edges_) out.emplace(names_[e.source], e.label.name(), names_[e.target]);
    return out;
  }

  std::set<std::string> vertex_names() const { return {names_.begin(), names_.end()}; }

 private:
  std::size_t check(std::size_t v) const {
    if (v >= names_.size()) throw std::out_of_range("not a vertex");
    return v;
  }

  std::vector<std::string> names_;
  std::multimap<std::string, std::size_t> by_name_;
  std::set<Edge> edges_;
  std::set<std::size_t> roots_, frontier_;
};

// ---------------------------------------------------------------------------
// Isomorphism

namespace detail {

struct IsoState {
  const GraphFragment& a;
  const GraphFragment& b;
  std::vector<std::vector<std::pair<Symbol, std::size_t>>> a_out, a_in, b_out, b_in;
  std::vector<std::size_t> color_a, color_b;
  std::vector<std::size_t> order;
  std::vector<std::optional<std::size_t>> map;
  std::vector<bool> used;

  IsoState(const GraphFragment& x, const GraphFragment& y) : a(x), b(y) {
    auto adj = [](const GraphFragment& f, auto& out, auto& in) {
      out.assign(f.size(), {});
      in.assign(f.size(), {});
      for (auto& e : f.edges()) {
        out[e.source].emplace_back(e.label, e.target);
        in[e.target].emplace_back(e.label, e.source);
      }
    };
    adj(a, a_out, a_in);
    adj(b, b_out, b_in);
  }

  // Colour refinement over both graphs at once so colours are comparable.
  bool refine() {
    std::size_t na = a.size();
    std::vector<std::size_t> col(na + b.size(), 0);
    auto vertex = [&](std::size_t i) -> std::pair<const GraphFragment*, std::size_t> {
      return i < na ? std::make_pair(&a, i) : std::make_pair(&b, i - na);
    };
    auto base = [&](std::size_t i) {
      auto [f, v] = vertex(i);
      auto& out = f == &a ? a_out[v] : b_out[v];
      auto& in = f == &a ? a_in[v] : b_in[v];
      std::vector<std::pair<int, std::uint32_t>> labels;
      for (auto& [l, _] : out) labels.emplace_back(0, l.id());
      for (auto& [l, _] : in) labels.emplace_back(1, l.id());
      std::sort(labels.begin(), labels.end());
      return std::make_tuple(f->roots().count(v) > 0, f->frontier().count(v) > 0, in.size(),
                             out.size(), labels);
    };
    {
      using Key = decltype(base(0));
      std::map<Key, std::size_t> ids;
      for (std::size_t i = 0; i < col.size(); ++i) {
        auto k = base(i);
        auto it = ids.emplace(k, ids.size()).first;
        col[i] = it->second;
      }
    }
    std::size_t classes = 0;
    for (int round = 0; round < 64; ++round) {
      using Key = std::pair<std::size_t, std::vector<std::tuple<int, std::uint32_t, std::size_t>>>;
      std::map<Key, std::size_t> ids;
      std::vector<std::size_t> next(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) {
        auto [f, v] = vertex(i);
        std::size_t off = f == &a ? 0 : na;
        auto& out = f == &a ? a_out[v] : b_out[v];
        auto& in = f == &a ? a_in[v] : b_in[v];
        Key k{col[i], {}};
        for (auto& [l, w] : out) k.second.emplace_back(0, l.id(), col[off + w]);
        for (auto& [l, w] : in) k.second.emplace_back(1, l.id(), col[off + w]);
        std::sort(k.second.begin(), k.second.end());
        next[i] = ids.emplace(std::move(k), ids.size()).first->second;
      }
      col = std::move(next);
      if (ids.size() == classes) break;
      classes = ids.size();
    }
    color_a.assign(col.begin(), col.begin() + na);
    color_b.assign(col.begin() + na, col.end());
    auto ca = color_a, cb = color_b;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    return ca == cb;
  }

  void make_order() {
    std::map<std::size_t, std::size_t> class_size;
    for (auto c : color_a) ++class_size[c];
    std::vector<bool> seen(a.size(), false);
    std::vector<std::size_t> by_rarity(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) by_rarity[i] = i;
    std::stable_sort(by_rarity.begin(), by_rarity.end(), [&](auto x, auto y) {
      return class_size[color_a[x]] < class_size[color_a[y]];
    });
    // BFS from rare vertices so each new vertex usually has a mapped neighbour.
    for (auto s : by_rarity) {
      if (seen[s]) continue;
      std::deque<std::size_t> q{s};
      seen[s] = true;
      while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        order.push_back(v);
        for (auto* adj : {&a_out[v], &a_in[v]})
          for (auto& [_, w] : *adj)
            if (!seen[w]) {
              seen[w] = true;
              q.push_back(w);
            }
      }
    }
  }

  bool consistent(std::size_t v, std::size_t w) const {
    for (auto& [l, x] : a_out[v]) {
      std::size_t y;
      if (x == v) y = w;
      else if (map[x]) y = *map[x];
      else continue;
      if (!b.has_edge(w, l, y)) return false;
    }
    for (auto& [l, x] : a_in[v]) {
      if (x == v || !map[x]) continue;
      if (!b.has_edge(*map[x], l, w)) return false;
    }
    return true;
  }

  bool search(std::size_t k) {
    if (k == order.size()) return true;
    auto v = order[k];
    for (std::size_t w = 0; w < b.size(); ++w) {
      if (used[w] || color_b[w] != color_a[v] || !consistent(v, w)) continue;
      map[v] = w;
      used[w] = true;
      if (search(k + 1)) return true;
      map[v].reset();
      used[w] = false;
    }
    return false;
  }
};

}  // namespace detail

// Returns a bijection from the vertices of f1 to those of f2 preserving
// labelled edges, roots and frontier marks, or nothing if none exists.
inline std::optional<std::vector<std::size_t>> isomorphic(const GraphFragment& f1,
                                                          const GraphFragment& f2,
                                                          std::size_t cap = default_vertex_cap) {
  if (f1.size() > cap || f2.size() > cap)
    throw SizeExceeded("fragment has more than " + std::to_string(cap) + " vertices");
  if (f1.size() != f2.size() || f1.edges().size() != f2.edges().size() ||
      f1.roots().size() != f2.roots().size() || f1.frontier().size() != f2.frontier().size())
    return std::nullopt;
  detail::IsoState st(f1, f2);
  if (!st.refine()) return std::nullopt;
  st.make_order();
  st.map.assign(f1.size(), std::nullopt);
  st.used.assign(f2.size(), false);
  if (!st.search(0)) return std::nullopt;
  std::vector<std::size_t> out(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) out[i] = *st.map[i];
  return out;
}

// ---------------------------------------------------------------------------
// DOT

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

// Roots are drawn with a double border, frontier vertices dashed.
inline std::string to_dot(const GraphFragment& f) {
  if (f.size() == 0) return "digraph G { }\n";
  std::vector<std::size_t> order(f.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return f.name(x) < f.name(y); });
  std::vector<std::string> id(f.size());
  std::map<std::string, int> seen;
  for (auto v : order) {
    int n = seen[f.name(v)]++;
    id[v] = detail::dot_quote(n == 0 ? f.name(v) : f.name(v) + "~" + std::to_string(n));
  }
  std::ostringstream out;
  out << "digraph G {\n";
  for (auto v : order) {
    std::vector<std::string> attrs;
    if (f.roots().count(v)) attrs.push_back("peripheries=2");
    if (f.frontier().count(v)) attrs.push_back("style=dashed");
    out << "  " << id[v];
    if (!attrs.empty()) {
      out << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
      out << "]";
    }
    out << ";\n";
  }
  std::vector<std::tuple<std::string, std::string, std::string>> lines;
  for (auto& e : f.edges()) lines.emplace_back(id[e.source], e.label.name(), id[e.target]);
  std::sort(lines.begin(), lines.end());
  for (auto& [s, l, t] : lines)
    out << "  " << s << " -> " << t << " [label=" << detail::dot_quote(l) << "];\n";
  out << "}\n";
  return out.str();
}

// Reads back the subset of DOT written by to_dot.
inline GraphFragment from_dot(std::string_view text) {
  GraphFragment f;
  std::size_t i = 0, line = 1;
  auto fail = [&](const std::string& what) { throw ParseError(line, what); };
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ';')) {
      if (text[i] == '\n') ++line;
      ++i;
    }
  };
  auto quoted = [&]() -> std::string {
    skip();
    if (i >= text.size() || text[i] != '"') fail("expected quoted identifier");
    std::string out;
    for (++i; i < text.size() && text[i] != '"'; ++i) {
      if (text[i] == '\\' && i + 1 < text.size()) ++i;
      out += text[i];
    }
    if (i >= text.size()) fail("unterminated string");
    ++i;
    return out;
  };
  auto attrs = [&]() {
    std::map<std::string, std::string> out;
    skip();
    if (i >= text.size() || text[i] != '[') return out;
    ++i;
    while (true) {
      skip();
      if (i < text.size() && text[i] == ']') {
        ++i;
        return out;
      }
      std::string key;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        key += text[i++];
      if (key.empty()) fail("bad attribute");
      skip();
      if (i >= text.size() || text[i] != '=') fail("expected '='");
      ++i;
      skip();
      std::string val;
      if (i < text.size() && text[i] == '"') {
        val = quoted();
      } else {
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
          val += text[i++];
      }
      out[key] = val;
      skip();
      if (i < text.size() && text[i] == ',') ++i;
    }
  };
  std::map<std::string, std::size_t> ids;
  auto vertex = [&](const std::string& id) {
    auto it = ids.find(id);
    if (it != ids.end()) return it->second;
    auto v = f.add_vertex(id);
    ids.emplace(id, v);
    return v;
  };
  skip();
  if (text.substr(i, 7) != "digraph") fail("expected 'digraph'");
  i += 7;
  skip();
  while (i < text.size() && text[i] != '{') ++i;
  if (i >= text.size()) fail("expected '{'");
  ++i;
  while (true) {
    skip();
    if (i >= text.size()) fail("unexpected end of input");
    if (text[i] == '}') break;
    auto s = quoted();
    skip();
    if (text.substr(i, 2) == "->") {
      i += 2;
      auto t = quoted();
      auto a = attrs();
      f.add_edge(vertex(s), Symbol(a["label"]), vertex(t));
    } else {
      auto v = vertex(s);
      auto a = attrs();
      if (a.count("peripheries")) f.add_root(v);
      if (a.count("style") && a["style"] == "dashed") f.add_frontier(v);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// On-demand graphs and balls

template <class V>
struct Generator {
  std::function<std::vector<std::pair<Symbol, V>>(const V&)> edges;
  std::function<std::string(const V&)> name;
  // Optional: true when edges(v) was cut short by some resource cap.
  std::function<bool(const V&)> truncated;
};

template <class V>
struct Explored {
  GraphFragment fragment;
  std::vector<V> vertices;  // indexed like fragment vertices
  std::vector<std::size_t> distance;
};

template <class V>
Explored<V> explore(const Generator<V>& g, const std::vector<V>& roots, std::size_t radius,
                    std::size_t cap = default_vertex_cap) {
  Explored<V> out;
  std::map<V, std::size_t> index;
  std::deque<std::size_t> queue;
  auto visit = [&](const V& v, std::size_t d) {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    if (out.vertices.size() >= cap)
      throw SizeExceeded("ball exceeds " + std::to_string(cap) + " vertices");
    auto id = out.fragment.add_vertex(g.name(v));
    index.emplace(v, id);
    out.vertices.push_back(v);
    out.distance.push_back(d);
    queue.push_back(id);
    return id;
  };
  for (auto& r : roots) out.fragment.add_root(visit(r, 0));
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    V v = out.vertices[id];
    auto succ = g.edges(v);
    if (out.distance[id] >= radius) {
      if (!succ.empty() || (g.truncated && g.truncated(v))) out.fragment.add_frontier(id);
      continue;
    }
    if (g.truncated && g.truncated(v)) out.fragment.add_frontier(id);
    for (auto& [a, w] : succ) {
      auto t = visit(w, out.distance[id] + 1);
      out.fragment.add_edge(id, a, t);
    }
  }
  return out;
}

template <class V>
GraphFragment ball(const Generator<V>& g, const std::vector<V>& roots, std::size_t radius,
                   std::size_t cap = default_vertex_cap) {
  return explore(g, roots, radius, cap).fragment;
}

// The part of an explored ball that a smaller radius would have produced.
template <class V>
GraphFragment shrink(const Explored<V>& x, const Generator<V>& g, std::size_t radius) {
  GraphFragment f;
  std::vector<std::optional<std::size_t>> id(x.vertices.size());
  for (std::size_t v = 0; v < x.vertices.size(); ++v)
    if (x.distance[v] <= radius) id[v] = f.add_vertex(x.fragment.name(v));
  for (auto r : x.fragment.roots()) f.add_root(*id[r]);
  for (auto& e : x.fragment.edges())
    if (x.distance[e.source] < radius) f.add_edge(*id[e.source], e.label, *id[e.target]);
  for (std::size_t v = 0; v < x.vertices.size(); ++v) {
    if (!id[v]) continue;
    bool cut = (g.truncated && g.truncated(x.vertices[v])) ||
               (x.distance[v] == radius && !g.edges(x.vertices[v]).empty());
    if (cut) f.add_frontier(*id[v]);
  }
  return f;
}

// Explicit finite graph, handy for hand-drawn examples.
struct FiniteGraph {
  std::vector<std::tuple<std::string, Symbol, std::string>> edges;

  Generator<std::string> generator() const {
    auto copy = edges;
    Generator<std::string> g;
    g.edges = [copy](const std::string& v) {
      std::vector<std::pair<Symbol, std::string>> out;
      for (auto& [s, a, t] : copy)
        if (s == v) out.emplace_back(a, t);
      return out;
    };
    g.name = [](const std::string& v) { return v; };
    return g;
  }
};

// Path language of a generator: all words of length <= maxlen labelling a
// path from root to a vertex satisfying final.
template <class V>
std::set<Word> path_language(const Generator<V>& g, const V& root,
                             const std::function<bool(const V&)>& final, std::size_t maxlen,
                             std::size_t cap = 1000000) {
  std::set<Word> out;
  std::map<Word, std::set<V>> layer{{Word{}, {root}}};
  std::map<V, std::vector<std::pair<Symbol, V>>> memo;
  std::size_t work = 0;
  for (std::size_t n = 0;; ++n) {
    for (auto& [w, vs] : layer)
      for (auto& v : vs)
        if (final(v)) {
          out.insert(w);
          break;
        }
    if (n == maxlen) break;
    std::map<Word, std::set<V>> next;
    for (auto& [w, vs] : layer)
      for (auto& v : vs) {
        auto it = memo.find(v);
        if (it == memo.end()) it = memo.emplace(v, g.edges(v)).first;
        for (auto& [a, t] : it->second) {
          auto w2 = w;
          w2.push_back(a);
          next[w2].insert(t);
          if (++work > cap) throw SizeExceeded("path language search exceeds cap");
        }
      }
    if (next.empty()) break;
    layer = std::move(next);
  }
  return out;
}

}  // namespace lbg

template <>
struct std::hash<lbg::Symbol> {
  std::size_t operator()(lbg::Symbol s) const noexcept { return s.id(); }
};
