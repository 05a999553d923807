#include <chrono>
#include <cstdio>
#include <iostream>

#include "lbg/analysis.hpp"
#include "lbg/corpus.hpp"
#include "lbg/equivalence.hpp"
#include "lbg/models.hpp"

using namespace lbg;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

// --- Independent oracles --------------------------------------------------

// (a^n b^n)^m with n, m >= 1, by direct construction.
std::set<Word> anbn_plus(std::size_t maxlen) {
  std::set<Word> out;
  for (std::size_t n = 1; 2 * n <= maxlen; ++n) {
    Word w;
    for (std::size_t m = 1; w.size() + 2 * n <= maxlen; ++m) {
      w.insert(w.end(), n, Symbol("a"));
      w.insert(w.end(), n, Symbol("b"));
      out.insert(w);
    }
  }
  return out;
}

std::uint64_t binary_value(const Word& w) {
  std::uint64_t v = 0;
  for (auto s : w) v = 2 * v + (s == Symbol("1"));
  return v;
}

Word binary_word(std::uint64_t v, std::size_t len) {
  Word w(len, Symbol("0"));
  for (std::size_t i = 0; i < len; ++i, v /= 2) w[len - 1 - i] = v % 2 ? Symbol("1") : Symbol("0");
  return w;
}

bool same_named(const GraphFragment& a, const GraphFragment& b) {
  return a.vertex_names() == b.vertex_names() && a.named_edges() == b.named_edges();
}

// --- Criteria -------------------------------------------------------------

Outcome c1() {
  auto m = models::m1();
  auto got = language(m, initial_configuration(m), final_pattern(m, "[b*q2b]"), 12);
  auto want = anbn_plus(12);
  if (got != want) return fail(std::to_string(got.size()) + " words vs " + std::to_string(want.size()));
  return {true, std::to_string(got.size()) + " words"};
}

Outcome c2() {
  auto R = models::r2();
  Symbol a("a"), b("b"), c("c"), zero("0"), one("1");
  std::size_t checked = 0;
  for (auto& u : words_up_to({zero, one}, 6)) {
    if (!is_normal_form(R, u)) return fail(str(u) + " should be a normal form");
    std::set<std::pair<Symbol, Word>> want;
    Word u0 = u;
    u0.push_back(zero);
    want.emplace(a, u0);
    auto val = binary_value(u);
    if (!u.empty() && val + 1 < (std::uint64_t{1} << u.size())) want.emplace(b, binary_word(val + 1, u.size()));
    if (!u.empty() && u.back() == one) want.emplace(c, Word(u.begin(), u.end() - 1));
    auto edges = cayley_edges(R, u);
    std::set<std::pair<Symbol, Word>> got(edges.begin(), edges.end());
    if (got != want || got.size() != edges.size()) return fail("edges of '" + str(u) + "' differ");
    ++checked;
  }
  return {true, std::to_string(checked) + " normal forms"};
}

Outcome c3() {
  auto m1 = models::m1();
  auto c0 = initial_configuration(m1);
  auto fused = llbm_to_rewriting(normalize(m1));
  if (!isomorphic(cayley_ball(fused.system, fused.root, 4), transition_ball(m1, c0, 4)))
    return fail("(i) Cayley ball differs at radius 4");
  auto R = models::r2();
  if (!isomorphic(graph_ball(rewriting_to_transductions(R), {}, 3), cayley_ball(R, {}, 3)))
    return fail("(ii) transduction ball differs at radius 3");
  auto family = models::fig1_family();
  auto tm = transductions_to_llbm(family);
  if (!is_normalized(tm.machine)) return fail("(iii) machine is not normalized");
  auto x = transition_ball(tm.machine, tm.configuration(models::fig1_root), 3);
  if (!isomorphic(x, graph_ball(family, models::fig1_root, 3)))
    return fail("(iii) machine ball differs at radius 3");
  return {true, "three arrows isomorphic"};
}

Outcome c4() {
  auto m1 = models::m1();
  auto fused = llbm_to_rewriting(normalize(m1));
  auto family = rewriting_to_transductions(fused.system);
  auto tm = transductions_to_llbm(family);
  auto x = transition_ball(tm.machine, tm.configuration(fused.root), 3);
  if (!isomorphic(x, transition_ball(m1, initial_configuration(m1), 3)))
    return fail("round-trip ball differs at radius 3");
  return {true, std::to_string(tm.machine.rules.size()) + " rules after round trip"};
}

Outcome c5() {
  std::size_t words = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = corpus::random_llbm(seed);
    auto n = normalize(m);
    if (!validate(n).empty()) return fail("seed " + std::to_string(seed) + ": invalid output");
    if (!is_normalized(n)) return fail("seed " + std::to_string(seed) + ": not normalized");
    for (auto& w : words_up_to(m.input, 8)) {
      if (accepts(m, w) != accepts(n, w))
        return fail("seed " + std::to_string(seed) + " disagrees on '" + str(w) + "'");
      ++words;
    }
  }
  return {true, std::to_string(words) + " acceptance checks"};
}

Outcome c6() {
  Alphabet gamma{Symbol("a"), Symbol("b")};
  std::vector<IncrementalTransduction> ts;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) ts.push_back(corpus::random_acceptor_transduction(seed, gamma));
  auto as_set = [](const std::vector<Word>& ws) { return std::set<Word>(ws.begin(), ws.end()); };
  std::size_t checks = 0, nonempty = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    auto& t1 = ts[i];
    auto& t2 = ts[(i + 1) % ts.size()];
    auto uni = combine(t1, t2, BoolOp::union_);
    auto inter = combine(t1, t2, BoolOp::intersection);
    auto comp = complement(t1);
    for (auto& u : words_up_to(gamma, 4)) {
      auto i1 = as_set(image(t1, u)), i2 = as_set(image(t2, u));
      nonempty += !i1.empty();
      std::set<Word> want_u = i1, want_i;
      want_u.insert(i2.begin(), i2.end());
      for (auto& v : i1)
        if (i2.count(v)) want_i.insert(v);
      if (as_set(image(uni, u)) != want_u) return fail("union law fails at '" + str(u) + "'");
      if (as_set(image(inter, u)) != want_i) return fail("intersection law fails at '" + str(u) + "'");
      auto ic = as_set(image(comp, u));
      auto universe = words_up_to(gamma, u.size() + t1.k);
      for (auto& v : universe)
        if (i1.count(v) == ic.count(v)) return fail("complement does not partition E_k('" + str(u) + "')");
      if (i1.size() + ic.size() != universe.size()) return fail("complement leaves E_k");
      ++checks;
    }
  }
  if (nonempty == 0) return fail("every image is empty");
  return {true, std::to_string(checks) + " (pair, u) checks, " + std::to_string(nonempty) + " non-empty images"};
}

Outcome c7() {
  auto g = models::fig4a();
  auto ours = closure_ball(g, "1", 4);
  std::multiset<std::tuple<std::string, std::string, std::string>> want_c{{"1", "a", "4"}, {"4", "b", "5"}};
  if (ours.size() != 3 || ours.named_edges() != want_c)
    return fail("closure is not the 3-vertex 2-edge graph");
  auto caucal = caucal_ball(g, "1", 4, [](const std::string&) { return true; });
  std::multiset<std::tuple<std::string, std::string, std::string>> want_b{
      {"1", "a", "2"}, {"1", "a", "3"}, {"1", "a", "4"}, {"2", "b", "5"}, {"3", "b", "5"}, {"4", "b", "5"}};
  if (caucal.size() != 5 || caucal.named_edges() != want_b)
    return fail("Caucal closure is not the 5-vertex 6-edge graph");
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = normalize(corpus::random_llbm(seed));
    auto ext = [m](const Configuration& c) { return is_external(m, c); };
    for (auto& c0 : external_roots(m, initial_configuration(m)))
      for (std::size_t r = 0; r <= 4; ++r) {
        if (!same_named(caucal_ball(m, c0, r, ext), transition_ball(m, c0, r)))
          return fail("seed " + std::to_string(seed) + " differs at radius " + std::to_string(r));
        ++compared;
      }
  }
  if (compared == 0) return fail("no corpus machine reaches an external configuration");
  return {true, std::to_string(compared) + " corpus balls equal"};
}

Outcome c8() {
  auto m = models::fig7();
  auto d = prune_determinize(m);
  if (!is_deterministic(d)) return fail("output is not deterministic");
  auto c0 = initial_configuration(m);
  if (!same_named(transition_ball(m, c0, 3), transition_ball(d, c0, 3))) return fail("balls differ");
  return {true, std::to_string(m.rules.size()) + " -> " + std::to_string(d.rules.size()) + " rules"};
}

Outcome c9() {
  auto fig5 = rational_ball(models::fig5_family(), models::fig5_root, 3, 8);
  auto p = degree_profile(fig5, "A");
  std::vector<std::size_t> want{4, 16, 256};
  for (std::size_t n = 0; n < 3; ++n)
    if (p.out.size() <= n || p.unreliable[n] || p.out[n] != want[n])
      return fail("Fig. 5 profile differs at distance " + std::to_string(n));
  auto m1 = models::m1();
  auto q = degree_profile(transition_ball(m1, initial_configuration(m1), 6), "[q0]");
  auto c = fit_outdegree_bound(q);
  if (c != 2u) return fail("M1 bound is " + (c ? std::to_string(*c) : std::string("none")));
  std::vector<std::pair<std::string, std::function<std::size_t(std::size_t)>>> fs{
      {"n", [](std::size_t n) { return n; }},
      {"n^2", [](std::size_t n) { return n * n; }},
      {"2^n", [](std::size_t n) { return std::size_t{1} << n; }}};
  for (auto& [name, f] : fs) {
    auto b = ball(lemma_id_gadget(f, 5), {Word{}}, 64);
    if (!b.frontier().empty()) return fail(name + ": gadget ball is not complete");
    for (std::size_t n = 1; n <= 5; ++n) {
      auto v = b.find(word_name(Word(n, Symbol("0"))));
      if (!v || b.in_degree(*v) != f(n)) return fail(name + ": in-degree at 0^" + std::to_string(n));
    }
  }
  return {true, "[4, 16, 256]; c = 2; lemma_id in-degrees"};
}

Outcome c10() {
  auto fs = models::fig8_functions();
  Alphabet gamma{Symbol("1")};
  auto keep = [](const Word& w) { return w.size() <= 64; };
  auto res = weber_rename(fs, gamma, models::unary(1), 200, keep);
  auto& g = res.original;
  if (!g.frontier().empty()) return fail("exploration did not saturate");
  std::set<std::string> names;
  for (std::size_t v = 0; v < g.size(); ++v) names.insert(res.renamed.name(v));
  if (names.size() != g.size()) return fail("renaming is not injective");
  if (!isomorphic(g, res.renamed) && g.size() > 0) return fail("renamed fragment is not isomorphic");
  for (auto& e : g.edges())
    if (!res.renamed.has_edge(e.source, e.label, e.target)) return fail("edge lost by renaming");
  for (std::size_t v = 0; v < g.size(); ++v)
    if (replay_pair(fs, res.names[v], 4096) != res.vertices[v])
      return fail("pair " + res.names[v].str() + " does not replay");
  // Brute-force minimality: enumerate pairs by weight, then m, then r.
  std::size_t max_w = 0;
  for (auto& p : res.names) max_w = std::max(max_w, p.weight());
  Alphabet xs;
  for (auto& f : fs) xs.push_back(f.name);
  std::map<Word, CanonicalPair> first;
  for (std::size_t w = 0; w <= max_w; ++w)
    for (std::size_t lm = 0; lm <= w; ++lm)
      for (auto& m : words_of_length(gamma, lm))
        for (auto& r : words_of_length(xs, w - lm)) {
          auto x = replay_pair(fs, {m, r}, 4096);
          if (x && !first.count(*x)) first.emplace(*x, CanonicalPair{m, r});
        }
  for (std::size_t v = 0; v < g.size(); ++v)
    if (!(first.at(res.vertices[v]) == res.names[v])) return fail("non-minimal name for " + str(res.vertices[v]));
  for (auto& e : g.edges())
    if (res.names[e.target].weight() > res.names[e.source].weight() + 1)
      return fail("renaming is not 1-incremental along an edge");
  return {true, std::to_string(g.size()) + " vertices, max weight " + std::to_string(max_w)};
}

Outcome c11() {
  const Symbol sharp("#");
  auto letters = [&](const Word& w) {
    return std::count_if(w.begin(), w.end(), [&](Symbol s) { return s != sharp; });
  };
  auto keep = std::function<bool(const Word&)>([&](const Word& w) { return letters(w) <= 4; });
  auto word_vertices = [&](const GraphFragment& f) {
    std::set<std::string> out;
    for (std::size_t v = 0; v < f.size(); ++v)
      if (f.name(v).find('#') == std::string::npos) out.insert(f.name(v));
    return out;
  };
  std::set<Word> only_bb{chars("bb")};
  auto g = restrict_generator(fig3_gadget([&](const Word& u) { return only_bb.count(u) > 0; }), keep);
  auto x = explore(g, {Word{sharp}}, 64);
  if (!x.fragment.frontier().empty()) return fail("restricted gadget ball is not complete");
  auto v = x.fragment.find("bb");
  if (!v || x.distance[*v] != 7) return fail("'bb' is not at distance 7");
  if (word_vertices(x.fragment) != std::set<std::string>{"bb"}) return fail("a word outside L is reachable");
  auto empty = ball(restrict_generator(fig3_gadget([](const Word&) { return false; }), keep), {Word{sharp}}, 64);
  if (!word_vertices(empty).empty()) return fail("a word vertex is reachable with L empty");
  return {true, "distance 7; " + std::to_string(x.fragment.size()) + " vertices explored"};
}

Outcome c12() {
  std::size_t checks = 0;
  for (std::uint64_t seed = 101; seed <= 110; ++seed) {
    auto m = normalize(corpus::random_llbm(seed));
    auto lang = language(m, initial_configuration(m), final_states(m), 6);
    for (auto& w : words_up_to(m.input, 6)) {
      if (accepts(m, w) != (lang.count(w) > 0))
        return fail("seed " + std::to_string(seed) + " disagrees on '" + str(w) + "'");
      ++checks;
    }
  }
  return {true, std::to_string(checks) + " words"};
}

Outcome c13() {
  Symbol a("a"), b("b");
  Alphabet sigma{a, b};
  // Concatenations of one block a^n b repeated.
  auto blocks = [&](const Word& w) {
    if (w.empty()) return true;
    if (w.back() != b) return false;
    std::optional<std::size_t> n;
    std::size_t run = 0;
    for (auto s : w) {
      if (s == a) {
        ++run;
        continue;
      }
      if (n && *n != run) return false;
      n = run;
      run = 0;
    }
    return true;
  };
  auto balanced = [&](const Word& w) {
    auto n = w.size() / 2;
    if (w.size() % 2) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] != (i < n ? a : b)) return false;
    return true;
  };
  for (auto& [name, L] : std::vector<std::pair<std::string, LanguagePredicate>>{{"(a^n b)*", blocks},
                                                                               {"a^n b^n", balanced}}) {
    auto t = language_tree(L, sigma, 4);
    if (t.size() != 31 || t.edges().size() != 30) return fail(name + ": wrong tree size");
    for (std::size_t v = 0; v < t.size(); ++v) {
      auto out = t.out_edges(v);
      auto depth = t.name(v).size() - 1;
      std::set<Symbol> labels;
      for (auto& e : out) labels.insert(e.label);
      if (depth < 4 && (out.size() != 2 || labels != std::set<Symbol>{a, b})) return fail(name + ": not complete");
      if (t.in_degree(v) != (depth == 0 ? 0u : 1u)) return fail(name + ": not a tree");
      for (auto& e : out)
        if (t.name(e.target).substr(1) != t.name(v).substr(1) + e.label.name()) return fail(name + ": bad edge");
    }
    for (auto& w : words_up_to(sigma, 4)) {
      bool accepted = t.find("A" + str(w)).has_value();
      bool rejected = t.find("R" + str(w)).has_value();
      if (accepted == rejected || accepted != L(w)) return fail(name + ": mark differs at '" + str(w) + "'");
    }
  }
  return {true, "two sample languages"};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome (*)()>> criteria{
      {"Fig. 1 language of M1 up to length 12", c1},
      {"Fig. 2 Cayley edges against binary arithmetic", c2},
      {"equivalence arrows 1=>2, 2=>3, 3=>1", c3},
      {"round trip 1=>2=>3=>1 at radius 3", c4},
      {"normalization on 20 random machines", c5},
      {"Boolean algebra on 20 acceptor-backed transductions", c6},
      {"closure definitions (Fig. 4) and corpus", c7},
      {"determinization of Fig. 7", c8},
      {"degree growth", c9},
      {"Weber renaming of Fig. 8", c10},
      {"Fig. 3 gadget structure", c11},
      {"accepts against transition-graph paths", c12},
      {"language trees", c13},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.ok;
    std::printf("criterion %2zu: %s  %s (%s) [%.2fs]\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
