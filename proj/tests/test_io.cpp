#include <gtest/gtest.h>

#include "lbg/corpus.hpp"
#include "lbg/io.hpp"
#include "lbg/models.hpp"

using namespace lbg;

namespace {

const std::filesystem::path data = LBG_DATA_DIR;

std::size_t error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line;
  }
  return 0;
}

std::set<Rule> rule_set(const MachineDescription& m) { return {m.rules.begin(), m.rules.end()}; }

}  // namespace

TEST(Io, MachineRoundTrip) {
  std::vector<MachineDescription> ms{models::m1(), models::fig6(), models::fig7(), normalize(models::m1())};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) ms.push_back(corpus::random_llbm(seed));
  for (auto& m : ms) {
    auto text = io::serialize(m);
    auto back = io::parse_machine(text);
    EXPECT_EQ(io::serialize(back), text);
    EXPECT_EQ(rule_set(back), rule_set(m));
    EXPECT_EQ(back.states, m.states);
    EXPECT_EQ(back.finals, m.finals);
    EXPECT_EQ(back.flavor, m.flavor);
  }
}

TEST(Io, DataFilesMatchModels) {
  auto m = io::parse_machine(io::read_file(data / "m1.lbm"));
  EXPECT_EQ(rule_set(m), rule_set(models::m1()));
  EXPECT_EQ(io::serialize(m), io::serialize(models::m1()));
  auto R = io::parse_rewriting(io::read_file(data / "r2.rws"));
  EXPECT_EQ(R.rules, models::r2().rules);
  EXPECT_EQ(io::serialize(R), io::serialize(models::r2()));
  auto t = io::parse_transducer(io::read_file(data / "fig5.fst"));
  EXPECT_EQ(io::serialize(t), io::serialize(models::fig5_transducer()));
  auto fam = io::load_family(data / "fig1.fam");
  auto ref = models::fig1_transducers();
  ASSERT_EQ(fam.size(), ref.size());
  for (auto& [a, tr] : ref) EXPECT_EQ(io::serialize(fam.at(a)), io::serialize(tr));
}

TEST(Io, RewritingAndTransducerRoundTrip) {
  auto R = models::r2();
  EXPECT_EQ(io::serialize(io::parse_rewriting(io::serialize(R))), io::serialize(R));
  for (auto& [_, t] : models::fig1_transducers())
    EXPECT_EQ(io::serialize(io::parse_transducer(io::serialize(t))), io::serialize(t));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto t = corpus::random_transducer(seed, chars("ab"));
    auto back = io::parse_transducer(io::serialize(t));
    EXPECT_EQ(back.transitions, t.transitions);
  }
}

TEST(Io, RuleShapes) {
  EXPECT_EQ(io::parse_rule(1, "p a -x-> q b +"), Rule::move("p", "a", "x", "q", "b", 1));
  EXPECT_EQ(io::parse_rule(1, "p a -> q b -"), Rule::move("p", "a", epsilon, "q", "b", -1));
  EXPECT_EQ(io::parse_rule(1, "p ] -> q ] -"), Rule::marker("p", right_marker, epsilon, "q"));
  EXPECT_EQ(io::parse_rule(1, "p a -> q b"), Rule::stay("p", "a", epsilon, "q", "b"));
  EXPECT_EQ(io::parse_rule(1, "p ] -x-> q b ]"), Rule::insert("p", right_marker, "x", "q", "b"));
  EXPECT_EQ(io::parse_rule(1, "p a -x-> q"), Rule::erase("p", "a", "x", "q"));
  for (auto& r : models::m1().rules) EXPECT_EQ(io::parse_rule(1, to_string(r)), r);
}

TEST(Io, ErrorsCarryLineNumbers) {
  std::string bad_state = "kind: llbm\ntape: a\ninput: a\nstates: q0\ninitial: q0\nfinal: q0\nrule: zz a -> q0 a\n";
  EXPECT_EQ(error_line([&] { io::parse_machine(bad_state); }), 7u);
  EXPECT_EQ(error_line([&] { io::parse_machine("kind: llbm\nfoo: bar\n"); }), 2u);
  EXPECT_EQ(error_line([&] { io::parse_machine("kind: llbm\nkind: lbm\n"); }), 2u);
  EXPECT_EQ(error_line([&] { io::parse_machine("kind: llbm\nno colon here\n"); }), 2u);
  EXPECT_EQ(error_line([&] { io::parse_transducer("kind: fst\nalphabet: a\nstates: s\ninitial: s\nfinal: s\ntrans: s a s\n"); }), 6u);
  EXPECT_EQ(error_line([&] { io::parse_rewriting("kind: rws\nalphabet: a\nlabels: a\nrule: a b -> a\n"); }), 4u);
  try {
    io::parse_machine(bad_state);
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("undeclared state 'zz'"), std::string::npos);
  }
}

TEST(Io, CommentsAndBlankLines) {
  auto text = "; a comment\nkind: rws\n\nalphabet: a b ; trailing\nlabels: a\nrule: a b -> eps\n";
  auto R = io::parse_rewriting(text);
  ASSERT_EQ(R.rules.size(), 1u);
  EXPECT_TRUE(R.rules[0].rhs.empty());
}

TEST(Io, MissingFile) {
  EXPECT_THROW(io::read_file(data / "does_not_exist.lbm"), InvalidInput);
}
