#pragma once

#include "lbg/machine.hpp"
#include "lbg/rewriting.hpp"

namespace lbg {

using Decider = std::function<bool(const Word& u, const Word& v)>;

enum class Provenance { acceptor_machine, semantic, combinator };

// An unlabeled LBM over Gamma + {separator} accepting u sep v.
struct Acceptor {
  MachineDescription machine;
  Symbol separator{"#"};
};

// The transduction (ua, v) with ua R* v, u and v normal forms.
struct RewritingBacking {
  RewritingSystem system;
  Symbol letter;
};

struct IncrementalTransduction {
  Alphabet alphabet;
  std::size_t k = 0;
  Decider decider;
  Provenance provenance = Provenance::semantic;
  std::shared_ptr<const Acceptor> acceptor;
  std::shared_ptr<const RewritingBacking> rewriting;
  // Graph edges are u -a-> v iff decider(u a, v) rather than decider(u, v).
  bool appends_label = false;
  // Optional direct image computation; must agree with the decider.
  std::function<std::vector<Word>(const Word&)> enumerate;

  bool contains(const Word& u, const Word& v) const {
    return v.size() <= u.size() + k && decider(u, v);
  }
};

using Family = std::map<Symbol, IncrementalTransduction>;

inline IncrementalTransduction from_decider(Alphabet alphabet, std::size_t k, Decider d) {
  IncrementalTransduction t;
  t.alphabet = std::move(alphabet);
  t.k = k;
  t.decider = std::move(d);
  return t;
}

inline IncrementalTransduction from_acceptor(Alphabet alphabet, std::size_t k, MachineDescription m,
                                             Symbol separator = Symbol("#")) {
  if (m.labeled()) throw PreconditionFailed("acceptor must be an unlabeled machine");
  if (std::find(alphabet.begin(), alphabet.end(), separator) != alphabet.end())
    throw PreconditionFailed("separator '" + separator.name() + "' occurs in the alphabet");
  for (auto a : alphabet)
    if (!m.in_input(a)) throw AlphabetMismatch("acceptor does not read '" + a.name() + "'");
  if (!m.in_input(separator)) throw AlphabetMismatch("acceptor does not read the separator");
  auto acc = std::make_shared<const Acceptor>(Acceptor{std::move(m), separator});
  IncrementalTransduction t;
  t.alphabet = std::move(alphabet);
  t.k = k;
  t.provenance = Provenance::acceptor_machine;
  t.acceptor = acc;
  t.decider = [acc](const Word& u, const Word& v) {
    Word w = u;
    w.push_back(acc->separator);
    w.insert(w.end(), v.begin(), v.end());
    return accepts(acc->machine, w);
  };
  return t;
}

inline std::set<Symbol> symbol_set(const Alphabet& a) { return {a.begin(), a.end()}; }

// All v with |v| <= |u| + k and (u, v) in T, in length-then-lexicographic
// order of the alphabet.
inline std::vector<Word> image(const IncrementalTransduction& T, const Word& u,
                               std::size_t cap = 2000000) {
  std::vector<Word> out;
  const std::size_t n = u.size() + T.k;
  if (T.enumerate) {
    for (auto& v : T.enumerate(u))
      if (v.size() <= n) out.push_back(v);
    std::sort(out.begin(), out.end(),
              [&](const Word& a, const Word& b) { return shortlex_less(a, b, T.alphabet); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::size_t seen = 0;
  for (std::size_t len = 0; len <= n; ++len) {
    for (auto& v : words_of_length(T.alphabet, len)) {
      if (++seen > cap) throw SizeExceeded("image candidate count exceeds cap");
      if (T.decider(u, v)) out.push_back(v);
    }
  }
  return out;
}

enum class BoolOp { union_, intersection };

inline IncrementalTransduction combine(const IncrementalTransduction& t1,
                                       const IncrementalTransduction& t2, BoolOp op) {
  if (symbol_set(t1.alphabet) != symbol_set(t2.alphabet))
    throw AlphabetMismatch("transductions are over different alphabets");
  IncrementalTransduction t;
  t.alphabet = t1.alphabet;
  t.k = std::max(t1.k, t2.k);
  t.provenance = Provenance::combinator;
  t.appends_label = t1.appends_label;
  if (op == BoolOp::union_)
    t.decider = [t1, t2](const Word& u, const Word& v) { return t1.contains(u, v) || t2.contains(u, v); };
  else
    t.decider = [t1, t2](const Word& u, const Word& v) { return t1.contains(u, v) && t2.contains(u, v); };
  return t;
}

// E_k - T.
inline IncrementalTransduction complement(const IncrementalTransduction& T) {
  IncrementalTransduction t;
  t.alphabet = T.alphabet;
  t.k = T.k;
  t.provenance = Provenance::combinator;
  t.appends_label = T.appends_label;
  t.decider = [T](const Word& u, const Word& v) { return v.size() <= u.size() + T.k && !T.decider(u, v); };
  return t;
}

inline IncrementalTransduction restrict(const IncrementalTransduction& T,
                                        std::function<bool(const Word&)> domain,
                                        std::function<bool(const Word&)> codomain) {
  IncrementalTransduction t = T;
  t.provenance = Provenance::combinator;
  t.acceptor = nullptr;
  t.rewriting = nullptr;
  t.enumerate = nullptr;
  t.decider = [T, domain, codomain](const Word& u, const Word& v) {
    return domain(u) && codomain(v) && T.decider(u, v);
  };
  return t;
}

// ---------------------------------------------------------------------------
// Transduction graphs

inline Generator<Word> transduction_generator(const Family& family, std::size_t cap = 2000000) {
  Generator<Word> g;
  g.edges = [family, cap](const Word& u) {
    std::vector<std::pair<Symbol, Word>> out;
    for (auto& [a, T] : family) {
      Word src = u;
      if (T.appends_label) src.push_back(a);
      for (auto& v : image(T, src, cap)) out.emplace_back(a, v);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  g.name = word_name;
  return g;
}

inline GraphFragment graph_ball(const Family& family, const Word& root, std::size_t radius,
                                std::size_t cap = default_vertex_cap) {
  return ball(transduction_generator(family), {root}, radius, cap);
}

// ---------------------------------------------------------------------------
// Block encoding: a k-incremental family over Gamma becomes 1-incremental
// over Gamma^1 ... Gamma^k. A word is cut into blocks of k letters, the last
// one possibly shorter; only such words are valid codes.

struct BlockCode {
  std::size_t k;
  Alphabet base;
  Alphabet blocks;
  std::map<Symbol, Word> decode_table;
  bool identity = false;  // k <= 1: words are left as they are

  Symbol block(const Word& w) const { return Symbol("<" + str(w) + ">"); }

  Word encode(const Word& w) const {
    if (identity) return w;
    Word out;
    for (std::size_t i = 0; i < w.size(); i += k)
      out.push_back(block(Word(w.begin() + i, w.begin() + std::min(w.size(), i + k))));
    return out;
  }

  std::optional<Word> decode(const Word& code) const {
    if (identity) return code;
    Word out;
    for (std::size_t i = 0; i < code.size(); ++i) {
      auto it = decode_table.find(code[i]);
      if (it == decode_table.end()) return std::nullopt;
      if (i + 1 < code.size() && it->second.size() != k) return std::nullopt;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
  }
};

inline BlockCode block_code(const Alphabet& base, std::size_t k) {
  BlockCode c{k, base, {}, {}, false};
  for (std::size_t len = 1; len <= k; ++len)
    for (auto& w : words_of_length(base, len)) {
      auto s = c.block(w);
      c.blocks.push_back(s);
      c.decode_table.emplace(s, w);
    }
  return c;
}

// The same graph with plain edges u -a-> v iff (u, v) in T_a.
inline Family without_appended_labels(const Family& family) {
  Family out;
  for (auto& [a, T] : family) {
    if (!T.appends_label) {
      out.emplace(a, T);
      continue;
    }
    IncrementalTransduction t;
    t.alphabet = T.alphabet;
    t.k = T.k + 1;
    t.provenance = Provenance::combinator;
    t.decider = [T, a = a](const Word& u, const Word& v) {
      Word ua = u;
      ua.push_back(a);
      return T.contains(ua, v);
    };
    out.emplace(a, std::move(t));
  }
  return out;
}

// Returns the re-encoded family (k <= 1) and the code; roots must be encoded
// with code.encode. Families with k <= 1 come back unchanged.
inline std::pair<Family, BlockCode> normalize_increment(const Family& input) {
  auto family = without_appended_labels(input);
  std::size_t k = 1;
  Alphabet base;
  for (auto& [_, T] : family) {
    k = std::max(k, T.k);
    if (base.empty()) base = T.alphabet;
  }
  if (k <= 1) {
    BlockCode id{k, base, base, {}, true};
    return {family, id};
  }
  auto code = block_code(base, k);
  Family out;
  for (auto& [a, T] : family) {
    IncrementalTransduction t;
    t.alphabet = code.blocks;
    t.k = 1;
    t.provenance = Provenance::semantic;
    t.decider = [code, T](const Word& u, const Word& v) {
      auto du = code.decode(u), dv = code.decode(v);
      return du && dv && T.contains(*du, *dv);
    };
    out.emplace(a, std::move(t));
  }
  return {out, code};
}

}  // namespace lbg
