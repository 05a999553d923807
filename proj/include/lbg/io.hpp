#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lbg/rational.hpp"

namespace lbg::io {

// Line-oriented documents: `key: value` headers, then `rule:` or `trans:`
// lines; `;` starts a comment.

struct Line {
  std::size_t number;
  std::string key;
  std::string value;
};

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline std::vector<Line> lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t n = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++n;
    auto c = raw.find(';');
    auto body = trim(c == std::string::npos ? raw : raw.substr(0, c));
    if (body.empty()) continue;
    auto colon = body.find(':');
    if (colon == std::string::npos) throw ParseError(n, "expected 'key: value'");
    out.push_back({n, trim(body.substr(0, colon)), trim(body.substr(colon + 1))});
  }
  return out;
}

class Headers {
 public:
  Headers(const std::vector<Line>& ls, std::set<std::string> allowed, std::string list_key) {
    for (auto& l : ls) {
      if (l.key == list_key) {
        items.push_back(l);
        continue;
      }
      if (!allowed.count(l.key)) throw ParseError(l.number, "unknown key '" + l.key + "'");
      if (!items.empty()) throw ParseError(l.number, "header '" + l.key + "' after " + list_key + " lines");
      if (!values_.emplace(l.key, l).second) throw ParseError(l.number, "duplicate key '" + l.key + "'");
    }
  }

  const Line& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ParseError(0, "missing key '" + key + "'");
    return it->second;
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::vector<Symbol> symbols(const std::string& key) const {
    std::vector<Symbol> out;
    for (auto& t : split(get(key).value)) out.emplace_back(t);
    return out;
  }

  std::vector<Line> items;

 private:
  std::map<std::string, Line> values_;
};

inline std::string join(const std::vector<Symbol>& xs) {
  std::string out;
  for (auto& x : xs) out += (out.empty() ? "" : " ") + x.name();
  return out;
}

inline std::string spaced(const Word& w) { return w.empty() ? "eps" : join(w); }

// ---------------------------------------------------------------------------
// Machines (.lbm)

inline Rule parse_rule(std::size_t n, const std::string& text) {
  auto t = split(text);
  if (t.size() < 4) throw ParseError(n, "rule needs 'state symbol arrow state ...'");
  Symbol label;
  auto& arrow = t[2];
  if (arrow == "->") {
    label = epsilon;
  } else if (arrow.size() > 3 && arrow.front() == '-' && arrow.substr(arrow.size() - 2) == "->") {
    label = Symbol(arrow.substr(1, arrow.size() - 3));
  } else {
    throw ParseError(n, "malformed arrow '" + arrow + "'");
  }
  Symbol p(t[0]), a(t[1]), q(t[3]);
  auto rest = std::vector<std::string>(t.begin() + 4, t.end());
  auto dir = [&](const std::string& d) {
    if (d == "+") return +1;
    if (d == "-") return -1;
    throw ParseError(n, "direction must be + or -");
  };
  switch (rest.size()) {
    case 0: return Rule::erase(p, a, label, q);
    case 1: return Rule::stay(p, a, label, q, Symbol(rest[0]));
    case 2:
      if (rest[1] == "+" || rest[1] == "-") {
        if (is_marker(a)) {
          if (Symbol(rest[0]) != a) throw ParseError(n, "marker moves keep the marker");
          auto r = Rule::marker(p, a, label, q);
          if (r.dir != dir(rest[1])) throw ParseError(n, "marker moves are [ + and ] -");
          return r;
        }
        return Rule::move(p, a, label, q, Symbol(rest[0]), dir(rest[1]));
      }
      if (Symbol(rest[1]) != a) throw ParseError(n, "insert must end with the scanned symbol");
      return Rule::insert(p, a, label, q, Symbol(rest[0]));
    default: throw ParseError(n, "too many fields in rule");
  }
}

inline MachineDescription parse_machine(std::string_view text) {
  auto ls = lines(text);
  Headers h(ls, {"kind", "tape", "input", "states", "initial", "final"}, "rule");
  MachineDescription m;
  auto kind = h.get("kind");
  if (kind.value == "llbm") m.flavor = Flavor::llbm;
  else if (kind.value == "lbm") m.flavor = Flavor::lbm;
  else throw ParseError(kind.number, "kind must be lbm or llbm");
  m.tape = h.symbols("tape");
  m.input = h.has("input") ? h.symbols("input") : Alphabet{};
  m.states = h.symbols("states");
  auto init = h.symbols("initial");
  if (init.size() != 1) throw ParseError(h.get("initial").number, "exactly one initial state");
  m.initial = init[0];
  m.finals = h.has("final") ? h.symbols("final") : std::vector<Symbol>{};
  for (auto& l : h.items) {
    auto r = parse_rule(l.number, l.value);
    m.rules.push_back(r);
    MachineDescription probe = m;
    probe.rules = {r};
    auto diag = validate(probe);
    for (auto& d : diag)
      if (d.rfind("rule", 0) == 0) throw ParseError(l.number, d);
  }
  auto diag = validate(m);
  if (!diag.empty()) {
    std::size_t n = 0;
    for (auto& l : ls)
      if (diag[0].find("initial") != std::string::npos && l.key == "initial") n = l.number;
      else if (diag[0].find("final") != std::string::npos && l.key == "final") n = l.number;
      else if (l.key == "tape" || l.key == "input") n = n ? n : l.number;
    throw ParseError(n, diag[0]);
  }
  return m;
}

inline std::string serialize(const MachineDescription& m) {
  std::string out;
  out += std::string("kind: ") + (m.labeled() ? "llbm" : "lbm") + "\n";
  out += "tape: " + join(m.tape) + "\n";
  out += "input: " + join(m.input) + "\n";
  out += "states: " + join(m.states) + "\n";
  out += "initial: " + m.initial.name() + "\n";
  out += "final: " + join(m.finals) + "\n";
  for (auto& r : m.rules) out += "rule: " + to_string(r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Rewriting systems (.rws)

inline RewritingSystem parse_rewriting(std::string_view text) {
  auto ls = lines(text);
  Headers h(ls, {"kind", "alphabet", "labels"}, "rule");
  if (h.get("kind").value != "rws") throw ParseError(h.get("kind").number, "kind must be rws");
  RewritingSystem R;
  R.alphabet = h.symbols("alphabet");
  R.labels = h.has("labels") ? h.symbols("labels") : Alphabet{};
  for (auto& l : h.items) {
    auto arrow = l.value.find("->");
    if (arrow == std::string::npos) throw ParseError(l.number, "rule needs '->'");
    auto side = [&](std::string s) {
      s = trim(s);
      if (s == "eps") return Word{};
      auto w = tokenize(s, R.alphabet);
      if (!w) throw ParseError(l.number, "cannot split '" + s + "' into alphabet symbols");
      return *w;
    };
    RewriteRule r{side(l.value.substr(0, arrow)), side(l.value.substr(arrow + 2))};
    RewritingSystem probe{R.alphabet, {}, {r}};
    auto diag = validate(probe);
    if (!diag.empty()) throw ParseError(l.number, diag[0]);
    R.rules.push_back(std::move(r));
  }
  auto diag = validate(R);
  if (!diag.empty()) throw ParseError(h.get("labels").number, diag[0]);
  return R;
}

inline std::string serialize(const RewritingSystem& R) {
  std::string out = "kind: rws\n";
  out += "alphabet: " + join(R.alphabet) + "\n";
  out += "labels: " + join(R.labels) + "\n";
  for (auto& r : R.rules) out += "rule: " + spaced(r.lhs) + " -> " + spaced(r.rhs) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Transducers (.fst): `trans: p in/out q`, eps for the empty word.

inline FiniteTransducer parse_transducer(std::string_view text) {
  auto ls = lines(text);
  Headers h(ls, {"kind", "alphabet", "states", "initial", "final"}, "trans");
  if (h.get("kind").value != "fst") throw ParseError(h.get("kind").number, "kind must be fst");
  FiniteTransducer t;
  t.alphabet = h.symbols("alphabet");
  t.states = h.symbols("states");
  auto init = h.symbols("initial");
  if (init.size() != 1) throw ParseError(h.get("initial").number, "exactly one initial state");
  t.initial = init[0];
  t.finals = h.has("final") ? h.symbols("final") : std::vector<Symbol>{};
  for (auto& l : h.items) {
    auto f = split(l.value);
    if (f.size() != 3) throw ParseError(l.number, "transition needs 'state in/out state'");
    auto slash = f[1].find('/');
    if (slash == std::string::npos) throw ParseError(l.number, "label needs 'in/out'");
    auto sym = [](const std::string& s) { return s == "eps" ? epsilon : Symbol(s); };
    Transition tr{Symbol(f[0]), sym(f[1].substr(0, slash)), sym(f[1].substr(slash + 1)), Symbol(f[2])};
    FiniteTransducer probe = t;
    probe.transitions = {tr};
    auto diag = validate(probe);
    if (!diag.empty()) throw ParseError(l.number, diag.back());
    t.transitions.push_back(tr);
  }
  auto diag = validate(t);
  if (!diag.empty()) throw ParseError(h.get("initial").number, diag[0]);
  return t;
}

inline std::string serialize(const FiniteTransducer& t) {
  std::string out = "kind: fst\n";
  out += "alphabet: " + join(t.alphabet) + "\n";
  out += "states: " + join(t.states) + "\n";
  out += "initial: " + t.initial.name() + "\n";
  out += "final: " + join(t.finals) + "\n";
  for (auto& tr : t.transitions)
    out += "trans: " + tr.from.name() + " " + label_str(tr.in) + "/" + label_str(tr.out) + " " +
           tr.to.name() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Families (.fam): `member: label path.fst`, paths relative to the file.

struct FamilyFile {
  std::vector<std::pair<Symbol, std::string>> members;
};

inline FamilyFile parse_family(std::string_view text) {
  auto ls = lines(text);
  Headers h(ls, {"kind"}, "member");
  if (h.get("kind").value != "family") throw ParseError(h.get("kind").number, "kind must be family");
  FamilyFile f;
  for (auto& l : h.items) {
    auto t = split(l.value);
    if (t.size() != 2) throw ParseError(l.number, "member needs 'label path'");
    f.members.emplace_back(Symbol(t[0]), t[1]);
  }
  return f;
}

inline std::string serialize(const FamilyFile& f) {
  std::string out = "kind: family\n";
  for (auto& [a, p] : f.members) out += "member: " + a.name() + " " + p + "\n";
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + p.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + p.string() + "'");
  out << text;
}

inline TransducerFamily load_family(const std::filesystem::path& p) {
  auto f = parse_family(read_file(p));
  TransducerFamily out;
  for (auto& [a, rel] : f.members) out[a] = parse_transducer(read_file(p.parent_path() / rel));
  return out;
}

}  // namespace lbg::io
