#pragma once

#include <random>

#include "lbg/rational.hpp"

namespace lbg::corpus {

struct MachineShape {
  std::size_t states = 4;
  std::size_t tape = 3;
  std::size_t input = 2;
  std::size_t rules = 20;
};

// A random labeled machine. Each (state, letter) pair inserts at the right
// marker, and at one random symbol, with probability 1/2 each; the remaining
// rules are drawn from all shapes.
inline MachineDescription random_llbm(std::uint64_t seed, MachineShape shape = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  static const char* letters[] = {"a", "b", "c", "d"};
  MachineDescription m;
  shape.tape = std::clamp<std::size_t>(shape.tape, 1, 4);
  shape.input = std::clamp<std::size_t>(shape.input, 1, shape.tape);
  for (std::size_t i = 0; i < shape.tape; ++i) m.tape.emplace_back(letters[i]);
  m.input.assign(m.tape.begin(), m.tape.begin() + shape.input);
  for (std::size_t i = 0; i < std::max<std::size_t>(shape.states, 1); ++i)
    m.states.emplace_back("q" + std::to_string(i));
  m.initial = m.states[0];
  for (auto q : m.states)
    if (pick(2) == 0) m.finals.push_back(q);
  if (m.finals.empty()) m.finals.push_back(m.states[pick(m.states.size())]);
  auto state = [&] { return m.states[pick(m.states.size())]; };
  auto sym = [&] { return m.tape[pick(m.tape.size())]; };
  auto letter = [&] { return m.input[pick(m.input.size())]; };
  std::set<Rule> seen;
  for (auto p : m.states)
    for (auto a : m.input)
      for (auto x : {right_marker, sym()})
        if (pick(2) == 0) {
          auto r = Rule::insert(p, x, a, state(), sym());
          if (seen.insert(r).second) m.rules.push_back(r);
        }
  for (std::size_t tries = 0; m.rules.size() < shape.rules && tries < 50 * shape.rules; ++tries) {
    Rule r;
    auto p = state(), q = state();
    switch (pick(8)) {
      case 0: r = Rule::insert(p, right_marker, letter(), q, sym()); break;
      case 1: r = Rule::insert(p, sym(), letter(), q, sym()); break;
      case 2: r = Rule::move(p, sym(), letter(), q, sym(), pick(2) ? 1 : -1); break;
      case 3: r = Rule::move(p, sym(), epsilon, q, sym(), pick(2) ? 1 : -1); break;
      case 4: r = Rule::stay(p, sym(), pick(2) ? epsilon : letter(), q, sym()); break;
      case 5: r = Rule::erase(p, sym(), epsilon, q); break;
      case 6: r = Rule::marker(p, right_marker, pick(2) ? epsilon : letter(), q); break;
      default: r = Rule::marker(p, left_marker, epsilon, q); break;
    }
    if (seen.insert(r).second) m.rules.push_back(r);
  }
  return m;
}

// A random transducer within E_1: letter/letter and letter/eps steps, and at
// most one eps/letter step into a final sink.
inline FiniteTransducer random_transducer(std::uint64_t seed, const Alphabet& gamma,
                                          std::size_t states = 3, std::size_t transitions = 7) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  FiniteTransducer t;
  t.alphabet = gamma;
  for (std::size_t i = 0; i < states; ++i) t.states.emplace_back("s" + std::to_string(i));
  Symbol sink("z");
  t.states.push_back(sink);
  t.initial = t.states[0];
  for (std::size_t i = 0; i < states; ++i)
    if (pick(2) == 0) t.finals.push_back(t.states[i]);
  t.finals.push_back(sink);
  auto st = [&] { return t.states[pick(states)]; };
  auto sym = [&] { return gamma[pick(gamma.size())]; };
  std::set<Transition> seen;
  for (std::size_t tries = 0; seen.size() < transitions && tries < 50 * transitions; ++tries) {
    Transition tr;
    switch (pick(6)) {
      case 0: tr = {st(), sym(), epsilon, st()}; break;
      case 1: tr = {st(), epsilon, sym(), sink}; break;
      default: tr = {st(), sym(), sym(), st()}; break;
    }
    if (seen.insert(tr).second) t.transitions.push_back(tr);
  }
  return t;
}

inline IncrementalTransduction random_acceptor_transduction(std::uint64_t seed, const Alphabet& gamma,
                                                            Symbol sep = Symbol("|")) {
  auto t = random_transducer(seed, gamma);
  return from_acceptor(gamma, 1, transducer_acceptor(t, sep), sep);
}

}  // namespace lbg::corpus
