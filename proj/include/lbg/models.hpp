#pragma once

#include "lbg/rational.hpp"

namespace lbg::models {

// The example machine over {a, b} whose transition graph is drawn in Fig. 1;
// with final vertices [b*q2b] its path language is (a^n b^n)+.
inline MachineDescription m1() {
  Symbol a("a"), b("b"), q0("q0"), q1("q1"), q2("q2"), q3("q3");
  MachineDescription m;
  m.tape = {a, b};
  m.input = {a, b};
  m.states = {q0, q1, q2, q3};
  m.initial = q0;
  m.finals = {q2};
  m.rules = {
      Rule::insert(q0, right_marker, a, q0, a), Rule::insert(q0, a, a, q0, a),
      Rule::move(q0, a, b, q1, b, +1),          Rule::move(q1, a, b, q1, b, +1),
      Rule::marker(q1, right_marker, epsilon, q2), Rule::move(q2, b, a, q3, a, -1),
      Rule::move(q3, b, a, q3, a, -1),          Rule::marker(q3, left_marker, epsilon, q1),
  };
  return m;
}

// Binary counter of Fig. 2: a appends 0, b increments, c strips a final 1.
inline RewritingSystem r2() {
  Symbol a("a"), b("b"), c("c"), z("0"), o("1");
  RewritingSystem R;
  R.alphabet = {a, b, c, z, o};
  R.labels = {a, b, c};
  R.rules = {{{a}, {z}}, {{b}, {b}}, {{z, b}, {o}}, {{o, b}, {b, z}}, {{c}, {c}}, {{o, c}, {}}};
  return R;
}

inline const Symbol fig1_separator{"|"};

// Synchronized transducers for the transductions of the Fig. 1 graph over
// {#, a, b}, the root # standing for [q0]:
//   T_a = {(#a^n, #a^(n+1))} + {(b^m a^n, b^(m-1) a^(n+1)) : m >= 1}
//   T_b = {(#a^n, a^(n-1) b) : n >= 1} + {(a^m b^n, a^(m-1) b^(n+1)) : m >= 1}
inline TransducerFamily fig1_transducers() {
  Symbol h("#"), a("a"), b("b");
  Alphabet gamma{h, a, b};
  auto st = [](const char* n) { return Symbol(n); };
  FiniteTransducer ta;
  ta.alphabet = gamma;
  ta.states = {st("s0"), st("s1"), st("f1"), st("s2"), st("s3")};
  ta.initial = st("s0");
  ta.finals = {st("f1"), st("s3")};
  ta.transitions = {
      {st("s0"), h, h, st("s1")}, {st("s1"), a, a, st("s1")}, {st("s1"), epsilon, a, st("f1")},
      {st("s0"), b, b, st("s2")}, {st("s2"), b, b, st("s2")}, {st("s2"), b, a, st("s3")},
      {st("s0"), b, a, st("s3")}, {st("s3"), a, a, st("s3")},
  };
  FiniteTransducer tb;
  tb.alphabet = gamma;
  tb.states = {st("s0"), st("t1"), st("t2"), st("t3"), st("u1"), st("u2")};
  tb.initial = st("s0");
  tb.finals = {st("t3"), st("u2")};
  tb.transitions = {
      {st("s0"), h, a, st("t1")}, {st("t1"), a, a, st("t1")}, {st("t1"), a, b, st("t2")},
      {st("s0"), h, b, st("t2")}, {st("t2"), a, epsilon, st("t3")},
      {st("s0"), a, a, st("u1")}, {st("u1"), a, a, st("u1")}, {st("u1"), a, b, st("u2")},
      {st("s0"), a, b, st("u2")}, {st("u2"), b, b, st("u2")},
  };
  return {{a, ta}, {b, tb}};
}

// The same transductions, each backed by an acceptor machine over u|v.
inline Family fig1_family() {
  Family out;
  for (auto& [label, t] : fig1_transducers()) {
    auto k = epsilon_output_bound(t);
    auto T = from_acceptor(t.alphabet, k, transducer_acceptor(t, fig1_separator), fig1_separator);
    out.emplace(label, std::move(T));
  }
  return out;
}

inline const Word fig1_root{Symbol("#")};

// Fig. 4(a): 1 -a-> 2 -eps-> 3 -eps-> 4 -b-> 5.
inline FiniteGraph fig4a() {
  Symbol a("a"), b("b");
  return FiniteGraph{{{"1", a, "2"}, {"2", epsilon, "3"}, {"3", epsilon, "4"}, {"4", b, "5"}}};
}

// Fig. 5: every letter becomes any two letters over {A, B}.
inline FiniteTransducer fig5_transducer() {
  Symbol A("A"), B("B"), q("q"), p("p");
  FiniteTransducer t;
  t.alphabet = {A, B};
  t.states = {q, p};
  t.initial = q;
  t.finals = {q};
  for (auto x : {A, B})
    for (auto y : {A, B}) t.transitions.push_back({q, x, y, p});
  for (auto z : {A, B}) t.transitions.push_back({p, epsilon, z, q});
  return t;
}

inline TransducerFamily fig5_family() { return {{Symbol("t"), fig5_transducer()}}; }

inline const Word fig5_root{Symbol("A")};

// Fig. 7: reading a writes x, then an epsilon diamond through p2 or p3 ends
// in p4 on y; b is read from there.
inline MachineDescription fig7() {
  Symbol a("a"), b("b"), x("x"), y("y");
  Symbol p0("p0"), p1("p1"), p2("p2"), p3("p3"), p4("p4"), p5("p5");
  MachineDescription m;
  m.tape = {a, b, x, y};
  m.input = {a, b};
  m.states = {p0, p1, p2, p3, p4, p5};
  m.initial = p0;
  m.finals = {p5};
  m.rules = {
      Rule::insert(p0, right_marker, a, p1, x), Rule::stay(p1, x, epsilon, p2, x),
      Rule::stay(p1, x, epsilon, p3, x),        Rule::stay(p2, x, epsilon, p4, y),
      Rule::stay(p3, x, epsilon, p4, y),        Rule::stay(p4, y, b, p5, y),
  };
  return m;
}

// Fig. 6: Fig. 7 with an epsilon cycle between p2 and p3 and a branch into
// a state p6 that loops forever.
inline MachineDescription fig6() {
  auto m = fig7();
  Symbol x("x"), p1("p1"), p2("p2"), p3("p3"), p6("p6");
  m.states.push_back(p6);
  m.rules.push_back(Rule::stay(p2, x, epsilon, p3, x));
  m.rules.push_back(Rule::stay(p3, x, epsilon, p2, x));
  m.rules.push_back(Rule::stay(p1, x, epsilon, p6, x));
  m.rules.push_back(Rule::stay(p6, x, epsilon, p6, x));
  return m;
}

// Fig. 8 over unary numbers: a doubles n >= 1, b subtracts 3 from n >= 4.
inline std::vector<NamedFunction> fig8_functions() {
  Symbol one("1"), a("a"), b("b");
  auto st = [](std::string n) { return Symbol(std::move(n)); };
  FiniteTransducer dbl;
  dbl.alphabet = {one};
  dbl.states = {st("s0"), st("p0"), st("s"), st("p")};
  dbl.initial = st("s0");
  dbl.finals = {st("s")};
  dbl.transitions = {{st("s0"), one, one, st("p0")}, {st("p0"), epsilon, one, st("s")},
                     {st("s"), one, one, st("p")},   {st("p"), epsilon, one, st("s")}};
  FiniteTransducer sub;
  sub.alphabet = {one};
  sub.states = {st("s0"), st("s1"), st("s2"), st("s3"), st("s4")};
  sub.initial = st("s0");
  sub.finals = {st("s4")};
  sub.transitions = {{st("s0"), one, epsilon, st("s1")}, {st("s1"), one, epsilon, st("s2")},
                     {st("s2"), one, epsilon, st("s3")}, {st("s3"), one, one, st("s4")},
                     {st("s4"), one, one, st("s4")}};
  return {{a, a, dbl}, {b, b, sub}};
}

inline TransducerFamily fig8_family() {
  TransducerFamily out;
  for (auto& f : fig8_functions()) out.emplace(f.label, f.f);
  return out;
}

inline Word unary(std::size_t n) { return Word(n, Symbol("1")); }

}  // namespace lbg::models
