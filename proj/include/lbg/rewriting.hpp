#pragma once

#include <memory>
#include <unordered_set>

#include "lbg/core.hpp"

namespace lbg {

struct RewriteRule {
  Word lhs;
  Word rhs;
  friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
  friend auto operator<=>(const RewriteRule&, const RewriteRule&) = default;
};

inline std::string to_string(const RewriteRule& r) {
  return (r.lhs.empty() ? "eps" : str(r.lhs)) + " -> " + (r.rhs.empty() ? "eps" : str(r.rhs));
}

struct RewritingSystem {
  Alphabet alphabet;  // Gamma
  Alphabet labels;    // Sigma, a subset of Gamma
  std::vector<RewriteRule> rules;
};

inline std::vector<std::string> validate(const RewritingSystem& R) {
  std::vector<std::string> diag;
  std::set<Symbol> gamma(R.alphabet.begin(), R.alphabet.end());
  for (auto a : R.labels)
    if (!gamma.count(a)) diag.push_back("label '" + a.name() + "' is not in the alphabet");
  for (auto& r : R.rules) {
    if (r.lhs.empty()) diag.push_back("rule '" + to_string(r) + "': empty left-hand side");
    if (r.lhs.size() < r.rhs.size())
      diag.push_back("rule '" + to_string(r) + "': right-hand side longer than left-hand side");
    for (auto& side : {r.lhs, r.rhs})
      for (auto s : side)
        if (!gamma.count(s)) {
          diag.push_back("rule '" + to_string(r) + "': unknown symbol '" + s.name() + "'");
          break;
        }
  }
  return diag;
}

// One rewriting step: replace the occurrence of rule `rule` at `position`.
struct RewriteStep {
  std::size_t position;
  std::size_t rule;
  friend bool operator==(const RewriteStep&, const RewriteStep&) = default;
};

struct NormalForms {
  std::set<Word> forms;
  // For each normal form, a derivation from the source word (when requested).
  std::map<Word, std::vector<RewriteStep>> certificates;
};

namespace detail {

using IdWord = std::u32string;

inline IdWord ids(const Word& w) {
  IdWord out;
  out.reserve(w.size());
  for (auto s : w) out.push_back(static_cast<char32_t>(s.id()));
  return out;
}

inline Word syms(const IdWord& w) {
  Word out;
  out.reserve(w.size());
  for (auto c : w) out.push_back(Symbol::from_id(c));
  return out;
}

class Rewriter {
 public:
  explicit Rewriter(const RewritingSystem& R) {
    for (std::size_t i = 0; i < R.rules.size(); ++i) {
      lhs_.push_back(ids(R.rules[i].lhs));
      rhs_.push_back(ids(R.rules[i].rhs));
      if (!lhs_.back().empty()) by_first_[lhs_.back()[0]].push_back(i);
    }
  }

  std::size_t size() const { return lhs_.size(); }

  template <class F>
  void for_each_redex(const IdWord& w, F&& f) const {
    for (std::size_t p = 0; p < w.size(); ++p) {
      auto it = by_first_.find(w[p]);
      if (it == by_first_.end()) continue;
      for (auto i : it->second) {
        auto& l = lhs_[i];
        if (w.compare(p, l.size(), l) == 0 && p + l.size() <= w.size()) f(p, i);
      }
    }
  }

  bool normal(const IdWord& w) const {
    bool found = false;
    for (std::size_t p = 0; p < w.size() && !found; ++p) {
      auto it = by_first_.find(w[p]);
      if (it == by_first_.end()) continue;
      for (auto i : it->second)
        if (p + lhs_[i].size() <= w.size() && w.compare(p, lhs_[i].size(), lhs_[i]) == 0) {
          found = true;
          break;
        }
    }
    return !found;
  }

  IdWord apply(const IdWord& w, std::size_t p, std::size_t i) const {
    IdWord out = w.substr(0, p);
    out += rhs_[i];
    out += w.substr(p + lhs_[i].size());
    return out;
  }

  // Normal forms reachable from w; parents recorded when certify is set.
  NormalForms normal_forms(const IdWord& w, bool certify, std::size_t cap) const {
    NormalForms out;
    std::unordered_map<IdWord, std::pair<IdWord, RewriteStep>> parent;
    std::unordered_set<IdWord> seen{w};
    std::deque<IdWord> queue{w};
    while (!queue.empty()) {
      IdWord x = std::move(queue.front());
      queue.pop_front();
      bool any = false;
      for_each_redex(x, [&](std::size_t p, std::size_t i) {
        any = true;
        IdWord y = apply(x, p, i);
        if (seen.insert(y).second) {
          if (seen.size() > cap) throw SizeExceeded("derivation space exceeds cap");
          if (certify) parent.emplace(y, std::make_pair(x, RewriteStep{p, i}));
          queue.push_back(std::move(y));
        }
      });
      if (any) continue;
      auto nf = syms(x);
      if (certify) {
        std::vector<RewriteStep> steps;
        for (IdWord c = x; c != w;) {
          auto& [from, step] = parent.at(c);
          steps.push_back(step);
          c = from;
        }
        std::reverse(steps.begin(), steps.end());
        out.certificates.emplace(nf, std::move(steps));
      }
      out.forms.insert(std::move(nf));
    }
    return out;
  }

 private:
  std::vector<IdWord> lhs_, rhs_;
  std::unordered_map<char32_t, std::vector<std::size_t>> by_first_;
};

}  // namespace detail

inline bool is_normal_form(const RewritingSystem& R, const Word& w) {
  return detail::Rewriter(R).normal(detail::ids(w));
}

inline std::set<Word> derive_once(const RewritingSystem& R, const Word& w) {
  detail::Rewriter rw(R);
  auto x = detail::ids(w);
  std::set<Word> out;
  rw.for_each_redex(x, [&](std::size_t p, std::size_t i) { out.insert(detail::syms(rw.apply(x, p, i))); });
  return out;
}

inline NormalForms normal_forms_of(const RewritingSystem& R, const Word& w, bool certify = false,
                                   std::size_t cap = 5000000) {
  return detail::Rewriter(R).normal_forms(detail::ids(w), certify, cap);
}

inline Word replay(const RewritingSystem& R, const Word& w, const std::vector<RewriteStep>& steps) {
  Word x = w;
  for (auto& s : steps) {
    if (s.rule >= R.rules.size()) throw InvalidInput("certificate names an unknown rule");
    auto& r = R.rules[s.rule];
    if (s.position + r.lhs.size() > x.size() ||
        !std::equal(r.lhs.begin(), r.lhs.end(), x.begin() + s.position))
      throw InvalidInput("certificate step does not match the word");
    Word y(x.begin(), x.begin() + s.position);
    y.insert(y.end(), r.rhs.begin(), r.rhs.end());
    y.insert(y.end(), x.begin() + s.position + r.lhs.size(), x.end());
    x = std::move(y);
  }
  return x;
}

// Exhaustive derivation-tree leaves; only for terminating systems.
inline std::set<Word> derivation_leaves(const RewritingSystem& R, const Word& w) {
  auto next = derive_once(R, w);
  if (next.empty()) return {w};
  std::set<Word> out;
  for (auto& v : next) {
    if (v == w) throw PreconditionFailed("system is not terminating on " + str(w));
    auto sub = derivation_leaves(R, v);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cayley-type graphs

inline std::vector<std::pair<Symbol, Word>> cayley_edges(const RewritingSystem& R, const Word& u) {
  detail::Rewriter rw(R);
  if (!rw.normal(detail::ids(u))) throw NotNormalForm("'" + str(u) + "' is not a normal form");
  std::vector<std::pair<Symbol, Word>> out;
  for (auto a : R.labels) {
    auto ua = detail::ids(u);
    ua.push_back(static_cast<char32_t>(a.id()));
    for (auto& v : rw.normal_forms(ua, false, 5000000).forms) out.emplace_back(a, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string word_name(const Word& w) { return w.empty() ? "eps" : str(w); }

inline Generator<Word> cayley_generator(const RewritingSystem& R) {
  auto rw = std::make_shared<const detail::Rewriter>(R);
  auto labels = R.labels;
  Generator<Word> g;
  g.edges = [rw, labels](const Word& u) {
    std::vector<std::pair<Symbol, Word>> out;
    auto base = detail::ids(u);
    for (auto a : labels) {
      auto ua = base;
      ua.push_back(static_cast<char32_t>(a.id()));
      for (auto& v : rw->normal_forms(ua, false, 5000000).forms) out.emplace_back(a, v);
    }
    return out;
  };
  g.name = word_name;
  return g;
}

inline GraphFragment cayley_ball(const RewritingSystem& R, const Word& root, std::size_t radius,
                                 std::size_t cap = default_vertex_cap) {
  if (!is_normal_form(R, root)) throw NotNormalForm("'" + str(root) + "' is not a normal form");
  return ball(cayley_generator(R), {root}, radius, cap);
}

// Bounded check of unique normal forms: every word of length <= n over the
// alphabet has at most one normal form.
inline bool unique_normal_forms_upto(const RewritingSystem& R, std::size_t n) {
  detail::Rewriter rw(R);
  for (auto& w : words_up_to(R.alphabet, n))
    if (rw.normal_forms(detail::ids(w), false, 5000000).forms.size() > 1) return false;
  return true;
}

}  // namespace lbg
