#include <gtest/gtest.h>

#include "lbg/corpus.hpp"
#include "lbg/models.hpp"
#include "lbg/tgraph.hpp"

using namespace lbg;

namespace {

Configuration cfg(const MachineDescription& m, const std::string& text) { return parse_configuration(m, text); }

MachineDescription unlabeled(std::vector<Rule> rules, std::vector<Symbol> states, std::vector<Symbol> finals) {
  MachineDescription m;
  m.flavor = Flavor::lbm;
  m.tape = {"a", "b"};
  m.input = {"a", "b"};
  m.states = std::move(states);
  m.initial = m.states[0];
  m.finals = std::move(finals);
  m.rules = std::move(rules);
  return m;
}

// Accepts exactly "ab".
MachineDescription lbm_ab() {
  return unlabeled({Rule::move("q0", "a", epsilon, "q1", "a", 1), Rule::move("q1", "b", epsilon, "q2", "b", 1),
                    Rule::marker("q2", right_marker, epsilon, "f")},
                   {"q0", "q1", "q2", "f"}, {"f"});
}

// Accepts words of even length.
MachineDescription lbm_even() {
  std::vector<Rule> rs;
  for (Symbol x : {"a", "b"}) {
    rs.push_back(Rule::move("e", x, epsilon, "o", x, 1));
    rs.push_back(Rule::move("o", x, epsilon, "e", x, 1));
  }
  rs.push_back(Rule::marker("e", right_marker, epsilon, "f"));
  return unlabeled(rs, {"e", "o", "f"}, {"f"});
}

std::uint64_t count_configurations(const MachineDescription& m, std::size_t n) {
  std::uint64_t total = 0;
  for (auto& w : words_up_to(m.tape, n))
    for (auto q : m.states)
      for (std::size_t h = 0; h < w.size() + 2; ++h) {
        Configuration c;
        c.tape.push_back(left_marker);
        c.tape.insert(c.tape.end(), w.begin(), w.end());
        c.tape.push_back(right_marker);
        c.state = q;
        c.head = h;
        check_configuration(m, c);
        ++total;
      }
  return total;
}

}  // namespace

TEST(Validate, Fig1MachineIsClean) { EXPECT_TRUE(validate(models::m1()).empty()); }

TEST(Validate, EpsilonInsert) {
  auto m = models::m1();
  m.rules.push_back(Rule::insert("q0", "a", epsilon, "q0", "a"));
  auto d = validate(m);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].find("insert must be Σ-labeled"), std::string::npos);
}

TEST(Validate, MarkerDeletion) {
  auto m = models::m1();
  m.rules.push_back(Rule::erase("q0", right_marker, "a", "q0"));
  auto d = validate(m);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].find("marker"), std::string::npos);
}

TEST(Step, Fig1Examples) {
  auto m = models::m1();
  auto s = step(m, cfg(m, "[q0]"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.begin()->first, Symbol("a"));
  EXPECT_EQ(s.begin()->second.str(), "[q0a]");
  auto t = step(m, cfg(m, "[bq1]"));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_TRUE(t.begin()->first.empty());
  EXPECT_EQ(t.begin()->second.str(), "[q2b]");
}

TEST(Step, NoMatchingRule) {
  auto m = models::m1();
  EXPECT_TRUE(step(m, cfg(m, "[q2a]")).empty());
}

TEST(Step, InvalidConfiguration) {
  auto m = models::m1();
  Configuration c{{left_marker, Symbol("a")}, Symbol("q0"), 1};
  EXPECT_THROW(step(m, c), InvalidConfiguration);
  EXPECT_THROW(cfg(m, "[ab]"), InvalidConfiguration);
}

TEST(Accepts, Fig1Language) {
  auto m = models::m1();
  EXPECT_TRUE(accepts(m, chars("aabb")));
  EXPECT_TRUE(accepts(m, chars("ab")));
  EXPECT_TRUE(accepts(m, chars("aabbaabb")));
  EXPECT_FALSE(accepts(m, chars("aab")));
  EXPECT_FALSE(accepts(m, {}));
  EXPECT_FALSE(accepts(m, chars("abaabb")));
  EXPECT_THROW(accepts(m, chars("ac")), InvalidInput);
}

TEST(Deterministic, Examples) {
  EXPECT_TRUE(is_deterministic(models::m1()));
  auto m = models::m1();
  m.rules = {Rule::stay("q0", "a", epsilon, "q1", "a"), Rule::stay("q0", "a", epsilon, "q2", "a")};
  EXPECT_FALSE(is_deterministic(m));
  m.rules = {Rule::insert("q0", "a", "a", "q1", "b"), Rule::insert("q0", "a", "b", "q2", "b")};
  EXPECT_TRUE(is_deterministic(m));
  EXPECT_FALSE(is_deterministic(models::fig7()));
}

TEST(Normalize, AddsSelfLoopsOnly) {
  MachineDescription m;
  m.tape = {"a"};
  m.input = {"a"};
  m.states = {"p", "q"};
  m.initial = "p";
  m.finals = {"p"};
  m.rules = {Rule::insert("p", right_marker, "a", "p", "a"), Rule::stay("q", "a", epsilon, "p", "a"),
             Rule::marker("q", left_marker, epsilon, "p"), Rule::marker("q", right_marker, epsilon, "p")};
  auto n = normalize(m);
  EXPECT_TRUE(is_normalized(n));
  EXPECT_EQ(n.states, m.states);
  std::set<Rule> before(m.rules.begin(), m.rules.end()), after(n.rules.begin(), n.rules.end());
  for (auto& r : before) EXPECT_TRUE(after.count(r));
  for (auto& r : after)
    if (!before.count(r)) {
      EXPECT_EQ(r.from, r.to);
      EXPECT_TRUE(r.label.empty());
    }
}

TEST(Normalize, Fig1SplitsMixedState) {
  auto m = models::m1();
  EXPECT_FALSE(is_normalized(m));
  auto n = normalize(m);
  EXPECT_TRUE(is_normalized(n));
  EXPECT_TRUE(validate(n).empty());
  EXPECT_GT(n.states.size(), m.states.size());
  for (auto& w : words_up_to(m.input, 10)) EXPECT_EQ(accepts(n, w), accepts(m, w)) << str(w);
}

TEST(Normalize, EmptyMachine) {
  MachineDescription m;
  m.tape = {"a"};
  m.input = {"a"};
  m.states = {"p"};
  m.initial = "p";
  auto n = normalize(m);
  EXPECT_TRUE(is_normalized(n));
  EXPECT_EQ(n.states, m.states);
  EXPECT_TRUE(n.rules.empty());
}

TEST(PruneDeterminize, Fig7) {
  auto m = models::fig7();
  auto d = prune_determinize(m);
  EXPECT_TRUE(is_deterministic(d));
  EXPECT_LT(d.rules.size(), m.rules.size());
  auto c0 = initial_configuration(m);
  auto a = transition_ball(m, c0, 3), b = transition_ball(d, c0, 3);
  EXPECT_EQ(a.named_edges(), b.named_edges());
  EXPECT_EQ(a.vertex_names(), b.vertex_names());
}

TEST(PruneDeterminize, AlreadyDeterministic) {
  auto m = models::m1();
  auto d = prune_determinize(m, std::nullopt, 4);
  EXPECT_EQ(std::set<Rule>(d.rules.begin(), d.rules.end()), std::set<Rule>(m.rules.begin(), m.rules.end()));
}

TEST(PruneDeterminize, SameLabelEdgesFail) {
  MachineDescription m;
  m.tape = {"a", "b"};
  m.input = {"a"};
  m.states = {"p", "q"};
  m.initial = "p";
  m.finals = {"q"};
  m.rules = {Rule::insert("p", right_marker, "a", "q", "a"), Rule::insert("p", right_marker, "a", "q", "b")};
  EXPECT_THROW(prune_determinize(m), PreconditionFailed);
}

TEST(StepBound, Examples) {
  MachineDescription m;
  m.tape = {"a"};
  m.states = {"p"};
  EXPECT_EQ(step_bound(m, 0), 2u);
  m.states = {"p", "q"};
  EXPECT_EQ(step_bound(m, 1), 10u);
  auto m1 = models::m1();
  EXPECT_EQ(step_bound(m1, 3), count_configurations(m1, 3));
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(step_bound(m1, n), count_configurations(m1, n));
}

TEST(LbmToLlbm, EmptyLanguage) {
  auto m = lbm_ab();
  m.finals.clear();
  auto l = lbm_to_llbm(m);
  EXPECT_TRUE(l.labeled());
  for (auto& w : words_up_to(m.input, 5)) EXPECT_FALSE(accepts(l, w));
}

TEST(LbmToLlbm, ExactlyAb) {
  auto m = lbm_ab();
  auto l = lbm_to_llbm(m);
  EXPECT_TRUE(validate(l).empty());
  for (auto& w : words_up_to(m.input, 6)) {
    EXPECT_EQ(accepts(m, w), str(w) == "ab") << str(w);
    EXPECT_EQ(accepts(l, w), accepts(m, w)) << str(w);
  }
}

TEST(LbmToLlbm, EvenLength) {
  auto m = lbm_even();
  auto l = lbm_to_llbm(m);
  for (auto& w : words_up_to(m.input, 8)) {
    EXPECT_EQ(accepts(m, w), w.size() % 2 == 0) << str(w);
    EXPECT_EQ(accepts(l, w), accepts(m, w)) << str(w);
  }
}

TEST(MachineProperty, StepKeepsConfigurationsValidAndBounded) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto m = corpus::random_llbm(seed);
    ASSERT_TRUE(validate(m).empty()) << seed;
    std::set<std::pair<Configuration, std::size_t>> seen;
    std::vector<std::pair<Configuration, std::size_t>> stack{{initial_configuration(m), 0}};
    while (!stack.empty() && seen.size() < 3000) {
      auto [c, consumed] = stack.back();
      stack.pop_back();
      if (!seen.insert({c, consumed}).second) continue;
      for (auto& [a, d] : step(m, c)) {
        EXPECT_NO_THROW(check_configuration(m, d));
        std::size_t k = consumed + (a.empty() ? 0 : 1);
        EXPECT_LE(d.tape.size(), k + 2);
        if (k <= 5) stack.emplace_back(d, k);
      }
    }
  }
}

TEST(MachineProperty, AcceptsMatchesPathLanguage) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto m = normalize(corpus::random_llbm(seed));
    auto l = language(m, initial_configuration(m), final_states(m), 6);
    for (auto& w : words_up_to(m.input, 6)) EXPECT_EQ(accepts(m, w), l.count(w) > 0) << seed << " " << str(w);
  }
}

TEST(MachineProperty, NormalizePreservesAcceptance) {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    auto m = corpus::random_llbm(seed);
    auto n = normalize(m);
    EXPECT_TRUE(is_normalized(n)) << seed;
    EXPECT_TRUE(validate(n).empty()) << seed;
    for (auto& w : words_up_to(m.input, 7)) EXPECT_EQ(accepts(n, w), accepts(m, w)) << seed << " " << str(w);
  }
}
