#include <gtest/gtest.h>

#include <random>

#include "lbg/models.hpp"

using namespace lbg;

namespace {

using Rules = std::vector<std::pair<std::string, std::string>>;

RewritingSystem system_of(const std::string& gamma, const std::string& sigma, const Rules& rules) {
  RewritingSystem R;
  R.alphabet = chars(gamma);
  R.labels = chars(sigma);
  for (auto& [l, r] : rules) R.rules.push_back({chars(l), chars(r)});
  return R;
}

// String-level rewriting, independent of the library.
std::set<std::string> oracle_once(const Rules& rules, const std::string& w) {
  std::set<std::string> out;
  for (auto& [l, r] : rules)
    for (auto p = w.find(l); p != std::string::npos; p = w.find(l, p + 1))
      out.insert(w.substr(0, p) + r + w.substr(p + l.size()));
  return out;
}

std::set<std::string> oracle_normal_forms(const Rules& rules, const std::string& w) {
  std::set<std::string> seen{w}, out;
  std::vector<std::string> stack{w};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    auto next = oracle_once(rules, x);
    if (next.empty()) out.insert(x);
    for (auto& y : next)
      if (seen.insert(y).second) stack.push_back(y);
  }
  return out;
}

std::set<std::string> strs(const std::set<Word>& ws) {
  std::set<std::string> out;
  for (auto& w : ws) out.insert(str(w));
  return out;
}

Rules random_rules(std::mt19937& rng, const std::string& gamma, bool strict) {
  Rules rs;
  std::size_t n = 2 + rng() % 4;
  auto word = [&](std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += gamma[rng() % gamma.size()];
    return s;
  };
  while (rs.size() < n) {
    std::size_t l = 1 + rng() % 3;
    std::size_t r = strict ? rng() % l : rng() % (l + 1);
    rs.emplace_back(word(l), word(r));
  }
  return rs;
}

}  // namespace

TEST(DeriveOnce, Fig2Examples) {
  auto R = models::r2();
  EXPECT_EQ(strs(derive_once(R, chars("01b"))), (std::set<std::string>{"0b0", "01b"}));
  EXPECT_TRUE(derive_once(R, {}).empty());
  EXPECT_TRUE(derive_once(R, chars("10")).empty());
}

TEST(NormalForms, Fig2Examples) {
  auto R = models::r2();
  EXPECT_EQ(strs(normal_forms_of(R, chars("01b")).forms), (std::set<std::string>{"10"}));
  EXPECT_TRUE(normal_forms_of(R, chars("b")).forms.empty());
  EXPECT_EQ(strs(normal_forms_of(R, chars("1001")).forms), (std::set<std::string>{"1001"}));
}

TEST(NormalForms, CertificatesReplay) {
  auto R = models::r2();
  auto w = chars("011bb");
  auto nf = normal_forms_of(R, w, true);
  ASSERT_FALSE(nf.forms.empty());
  for (auto& v : nf.forms) {
    ASSERT_TRUE(nf.certificates.count(v));
    EXPECT_EQ(replay(R, w, nf.certificates.at(v)), v);
  }
  EXPECT_THROW(replay(R, w, {{0, 0}}), InvalidInput);
}

TEST(CayleyEdges, Fig2Vertex01) {
  auto R = models::r2();
  auto e = cayley_edges(R, chars("01"));
  std::set<std::pair<std::string, std::string>> got;
  for (auto& [a, v] : e) got.emplace(a.name(), str(v));
  EXPECT_EQ(got, (std::set<std::pair<std::string, std::string>>{{"a", "010"}, {"b", "10"}, {"c", "0"}}));
}

TEST(CayleyEdges, Fig2RootAndEmptyLabels) {
  auto R = models::r2();
  auto e = cayley_edges(R, {});
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].first, Symbol("a"));
  EXPECT_EQ(str(e[0].second), "0");
  R.labels.clear();
  EXPECT_TRUE(cayley_edges(R, chars("01")).empty());
  EXPECT_THROW(cayley_edges(models::r2(), chars("b")), NotNormalForm);
}

TEST(CayleyBall, Fig2Radius3) {
  auto R = models::r2();
  auto f = cayley_ball(R, {}, 3);
  for (auto& n : f.vertex_names()) {
    if (n == "eps") continue;
    for (char ch : n) EXPECT_TRUE(ch == '0' || ch == '1') << n;
    EXPECT_LE(n.size(), 3u);
  }
  EXPECT_TRUE(f.find("0"));
  EXPECT_TRUE(f.find("00"));
  EXPECT_TRUE(f.find("1"));
  EXPECT_EQ(cayley_ball(R, chars("01"), 0).size(), 1u);
  EXPECT_THROW(cayley_ball(R, chars("b"), 2), NotNormalForm);
}

TEST(Validate, RewritingRules) {
  EXPECT_TRUE(validate(models::r2()).empty());
  auto R = system_of("ab", "a", {{"a", "ab"}, {"", "a"}, {"x", ""}});
  EXPECT_EQ(validate(R).size(), 4u);
}

TEST(UniqueNormalForms, Fig2) {
  EXPECT_TRUE(unique_normal_forms_upto(models::r2(), 5));
  EXPECT_FALSE(unique_normal_forms_upto(system_of("ab", "a", {{"a", "b"}, {"a", ""}}), 1));
}

TEST(RewritingProperty, AgreesWithStringOracle) {
  std::mt19937 rng(5);
  for (int t = 0; t < 60; ++t) {
    auto rules = random_rules(rng, "abc", false);
    auto R = system_of("abc", "ab", rules);
    ASSERT_TRUE(validate(R).empty());
    for (auto& w : words_up_to(R.alphabet, 4)) {
      auto s = str(w);
      EXPECT_EQ(strs(derive_once(R, w)), oracle_once(rules, s)) << t << " " << s;
      auto nf = normal_forms_of(R, w, true);
      EXPECT_EQ(strs(nf.forms), oracle_normal_forms(rules, s)) << t << " " << s;
      for (auto& v : nf.forms) {
        EXPECT_LE(v.size(), w.size());
        EXPECT_TRUE(is_normal_form(R, v));
        EXPECT_EQ(replay(R, w, nf.certificates.at(v)), v);
      }
    }
  }
}

TEST(RewritingProperty, StrictSystemsMatchDerivationLeaves) {
  std::mt19937 rng(9);
  for (int t = 0; t < 60; ++t) {
    auto rules = random_rules(rng, "ab", true);
    auto R = system_of("ab", "ab", rules);
    for (auto& w : words_up_to(R.alphabet, 5)) EXPECT_EQ(normal_forms_of(R, w).forms, derivation_leaves(R, w));
  }
}

TEST(RewritingProperty, CayleyVerticesAreNormalForms) {
  std::mt19937 rng(21);
  for (int t = 0; t < 30; ++t) {
    auto R = system_of("abc", "ab", random_rules(rng, "abc", false));
    Word root;
    if (!is_normal_form(R, root)) continue;
    auto x = explore(cayley_generator(R), {root}, 4);
    for (auto& v : x.vertices) EXPECT_TRUE(is_normal_form(R, v));
  }
  auto x = explore(cayley_generator(models::r2()), {Word{}}, 5);
  for (auto& v : x.vertices) EXPECT_TRUE(is_normal_form(models::r2(), v));
}
