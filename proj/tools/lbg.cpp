#include <CLI11.hpp>
#include <iostream>

#include "lbg/analysis.hpp"
#include "lbg/corpus.hpp"
#include "lbg/equivalence.hpp"
#include "lbg/io.hpp"
#include "lbg/models.hpp"

using namespace lbg;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, negative = 1, usage = 2, cap_hit = 3 };

struct Globals {
  std::size_t cap = default_vertex_cap;
  std::uint64_t seed = 1;
  std::string policy = "config";
  ExternalityPolicy externality() const {
    return policy == "state" ? ExternalityPolicy::state : ExternalityPolicy::config;
  }
};

std::string ext(const std::string& path) { return fs::path(path).extension().string(); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") std::cout << text;
  else io::write_file(out, text);
}

std::string set_str(const std::set<Word>& ws, const Alphabet& order) {
  std::vector<Word> v(ws.begin(), ws.end());
  std::sort(v.begin(), v.end(), [&](auto& a, auto& b) { return shortlex_less(a, b, order); });
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + word_name(v[i]);
  return out + "}";
}

Alphabet letters_of(const std::string& text) { return chars(text); }

LanguagePredicate pattern_language(const std::string& pattern, const Alphabet& letters, bool given) {
  if (!given) return [](const Word&) { return false; };
  auto p = std::make_shared<const WordPattern>(pattern, letters);
  return [p](const Word& w) { return p->matches(w); };
}

MachineDescription load_machine(const std::string& path) { return io::parse_machine(io::read_file(path)); }

TransducerFamily load_transducers(const std::string& path) {
  if (ext(path) == ".fst") return {{Symbol("t"), io::parse_transducer(io::read_file(path))}};
  return io::load_family(path);
}

Alphabet family_alphabet(const TransducerFamily& f) {
  if (f.empty()) return {};
  return f.begin()->second.alphabet;
}

// Acceptor-backed transductions of a rational family, as used by tg-to-llbm.
Family acceptor_family(const TransducerFamily& tf, Symbol sep) {
  Family out;
  for (auto& [a, t] : tf)
    out.emplace(a, from_acceptor(t.alphabet, epsilon_output_bound(t), transducer_acceptor(t, sep), sep));
  return out;
}

struct BallRequest {
  std::string file;
  std::string root;
  bool root_given = false;
  std::size_t radius = 3;
  std::size_t output_cap = 64;
};

GraphFragment build_ball(const BallRequest& r, const Globals& g, std::string& root_name) {
  auto e = ext(r.file);
  if (e == ".lbm") {
    auto m = load_machine(r.file);
    auto c0 = r.root_given ? parse_configuration(m, r.root) : initial_configuration(m);
    root_name = c0.str();
    return transition_ball(m, c0, r.radius, g.externality(), g.cap);
  }
  if (e == ".rws") {
    auto R = io::parse_rewriting(io::read_file(r.file));
    auto root = r.root_given ? parse_word(r.root, R.alphabet) : Word{};
    root_name = word_name(root);
    return cayley_ball(R, root, r.radius, g.cap);
  }
  if (e == ".fam" || e == ".fst") {
    auto tf = load_transducers(r.file);
    auto root = r.root_given ? parse_word(r.root, family_alphabet(tf)) : Word{};
    root_name = word_name(root);
    return rational_ball(tf, root, r.radius, r.output_cap, g.cap);
  }
  throw InvalidInput("unknown file type '" + e + "' (expected .lbm, .rws, .fam or .fst)");
}

void add_ball_options(CLI::App* c, BallRequest& r) {
  c->add_option("file", r.file, "machine (.lbm), rewriting system (.rws) or transducer family (.fam, .fst)")
      ->required();
  c->add_option("--root", r.root, "root configuration or word");
  c->add_option("--radius", r.radius, "ball radius");
  c->add_option("--output-cap", r.output_cap, "longest transducer output explored");
}

// Built-in figure fragments.
GraphFragment figure(const std::string& name, std::optional<std::size_t> radius, const Globals& g) {
  auto rad = [&](std::size_t d) { return radius.value_or(d); };
  if (name == "fig1") {
    auto m = models::m1();
    return transition_ball(m, initial_configuration(m), rad(3), g.externality(), g.cap);
  }
  if (name == "fig2") return cayley_ball(models::r2(), {}, rad(3), g.cap);
  if (name == "fig4b") return caucal_ball(models::fig4a(), "1", rad(4), [](const std::string&) { return true; }, g.cap);
  if (name == "fig4c") return closure_ball(models::fig4a(), "1", rad(4), g.cap);
  if (name == "fig5") return rational_ball(models::fig5_family(), models::fig5_root, rad(2), 8, g.cap);
  if (name == "fig6" || name == "fig7") {
    auto m = name == "fig6" ? models::fig6() : models::fig7();
    return transition_ball(m, initial_configuration(m), rad(3), g.externality(), g.cap);
  }
  if (name == "fig8") {
    auto keep = [](const Word& w) { return w.size() <= 64; };
    return weber_rename(models::fig8_functions(), {Symbol("1")}, models::unary(1), rad(200), keep, 4096, g.cap)
        .renamed;
  }
  throw InvalidInput("unknown figure '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearly bounded graphs: machines, rewriting systems, transductions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--cap", g.cap, "vertex cap for explorations");
  app.add_option("--seed", g.seed, "seed for corpus generation");
  app.add_option("--policy", g.policy, "externality policy")->check(CLI::IsMember({"state", "config"}));

  std::function<int()> run;

  // accepts
  std::string file, word;
  auto accepts_cmd = app.add_subcommand("accepts", "does the machine accept the word");
  accepts_cmd->add_option("machine", file, "machine file")->required();
  accepts_cmd->add_option("word", word, "input word (eps for the empty word)")->required();
  accepts_cmd->callback([&] {
    run = [&] {
      auto m = load_machine(file);
      bool yes = accepts(m, parse_word(word, m.input));
      std::cout << (yes ? "true" : "false") << "\n";
      return yes ? ok : negative;
    };
  });

  // language
  std::string final_pattern_text, root_text;
  std::size_t maxlen = 8;
  auto language_cmd = app.add_subcommand("language", "path language to final vertices");
  language_cmd->add_option("machine", file, "machine file")->required();
  language_cmd->add_option("--final", final_pattern_text, "pattern over configurations, e.g. [b*q2b]")->required();
  language_cmd->add_option("--maxlen", maxlen, "longest word");
  language_cmd->add_option("--root", root_text, "start configuration");
  language_cmd->callback([&] {
    run = [&] {
      auto m = load_machine(file);
      auto c0 = root_text.empty() ? initial_configuration(m) : parse_configuration(m, root_text);
      auto l = language(m, c0, final_pattern(m, final_pattern_text), maxlen, g.externality());
      std::cout << set_str(l, m.input) << "\n";
      return ok;
    };
  });

  // ball
  BallRequest ball_req;
  std::string dot_out;
  auto ball_cmd = app.add_subcommand("ball", "ball of a machine, rewriting system or transducer family");
  add_ball_options(ball_cmd, ball_req);
  ball_cmd->add_option("--dot", dot_out, "write DOT here (default: stdout)");
  ball_cmd->callback([&] {
    ball_req.root_given = ball_cmd->count("--root") > 0;
    run = [&] {
      std::string root;
      auto f = build_ball(ball_req, g, root);
      emit(to_dot(f), dot_out);
      if (!dot_out.empty()) std::cout << f.size() << " vertices, " << f.edges().size() << " edges\n";
      return ok;
    };
  });

  // normalize
  std::string out;
  auto normalize_cmd = app.add_subcommand("normalize", "normalized equivalent machine");
  normalize_cmd->add_option("machine", file, "machine file")->required();
  normalize_cmd->add_option("-o,--output", out, "output file (default: stdout)");
  normalize_cmd->callback([&] {
    run = [&] {
      emit(io::serialize(normalize(load_machine(file))), out);
      return ok;
    };
  });

  // determinize
  std::size_t radius = 3;
  auto determinize_cmd = app.add_subcommand("determinize", "prune rules of a machine with a deterministic graph");
  determinize_cmd->add_option("machine", file, "machine file")->required();
  determinize_cmd->add_option("--root", root_text, "start configuration");
  determinize_cmd->add_option("--radius", radius, "radius on which preconditions are checked");
  determinize_cmd->add_option("-o,--output", out, "output file (default: stdout)");
  determinize_cmd->callback([&] {
    run = [&] {
      auto m = load_machine(file);
      std::optional<Configuration> c0;
      if (!root_text.empty()) c0 = parse_configuration(m, root_text);
      emit(io::serialize(prune_determinize(m, c0, radius, g.externality(), g.cap)), out);
      return ok;
    };
  });

  // convert
  std::string direction, sep_text = "|";
  auto convert_cmd = app.add_subcommand("convert", "compile between the three presentations");
  convert_cmd->add_option("direction", direction, "llbm-to-rws, rws-to-tg or tg-to-llbm")
      ->required()
      ->check(CLI::IsMember({"llbm-to-rws", "rws-to-tg", "tg-to-llbm"}));
  convert_cmd->add_option("input", file, "source file")->required();
  convert_cmd->add_option("--radius", radius, "check radii 0..N");
  convert_cmd->add_option("--root", root_text, "root word for tg-to-llbm");
  convert_cmd->add_option("--separator", sep_text, "separator symbol for acceptor machines");
  convert_cmd->add_option("-o,--output", out, "write the converted object here");
  convert_cmd->callback([&] {
    run = [&] {
      std::vector<std::size_t> radii;
      for (std::size_t r = 0; r <= radius; ++r) radii.push_back(r);
      ConversionReport rep;
      if (direction == "llbm-to-rws") {
        auto m = load_machine(file);
        auto fused = llbm_to_rewriting(m);
        auto c0 = initial_configuration(m);
        rep = compare_balls(
            file, "rewriting system, root " + str(fused.root),
            [&](std::size_t r) { return transition_ball(m, c0, r, g.externality(), g.cap); },
            [&](std::size_t r) { return cayley_ball(fused.system, fused.root, r, g.cap); }, radii);
        if (!out.empty()) io::write_file(out, io::serialize(fused.system));
      } else if (direction == "rws-to-tg") {
        if (!out.empty()) throw InvalidInput("rws-to-tg transductions have no file form; drop -o");
        auto R = io::parse_rewriting(io::read_file(file));
        auto root = root_text.empty() ? Word{} : parse_word(root_text, R.alphabet);
        auto family = rewriting_to_transductions(R);
        rep = compare_balls(
            file, "transduction family (" + std::to_string(family.size()) + " labels)",
            [&](std::size_t r) { return cayley_ball(R, root, r, g.cap); },
            [&](std::size_t r) { return graph_ball(family, root, r, g.cap); }, radii);
      } else {
        auto tf = load_transducers(file);
        auto root = root_text.empty() ? Word{} : parse_word(root_text, family_alphabet(tf));
        auto family = acceptor_family(tf, Symbol(sep_text));
        auto tm = transductions_to_llbm(family);
        rep = compare_balls(
            file,
            "machine (" + std::to_string(tm.machine.states.size()) + " states, " +
                std::to_string(tm.machine.rules.size()) + " rules)",
            [&](std::size_t r) { return graph_ball(family, root, r, g.cap); },
            [&](std::size_t r) { return transition_ball(tm.machine, tm.configuration(root), r, g.externality(), g.cap); },
            radii);
        if (!out.empty()) io::write_file(out, io::serialize(tm.machine));
      }
      std::cout << rep.str();
      return rep.success() ? ok : negative;
    };
  });

  // iso
  std::string dot_a, dot_b;
  auto iso_cmd = app.add_subcommand("iso", "are two DOT fragments isomorphic");
  iso_cmd->add_option("a", dot_a, "first DOT file")->required();
  iso_cmd->add_option("b", dot_b, "second DOT file")->required();
  iso_cmd->callback([&] {
    run = [&] {
      auto x = from_dot(io::read_file(dot_a)), y = from_dot(io::read_file(dot_b));
      bool yes = isomorphic(x, y, g.cap).has_value();
      std::cout << (yes ? "isomorphic" : "not isomorphic") << "\n";
      return yes ? ok : negative;
    };
  });

  // degrees
  BallRequest deg_req;
  auto degrees_cmd = app.add_subcommand("degrees", "degree profile by distance from the root");
  add_ball_options(degrees_cmd, deg_req);
  degrees_cmd->callback([&] {
    deg_req.root_given = degrees_cmd->count("--root") > 0;
    run = [&] {
      std::string root;
      auto f = build_ball(deg_req, g, root);
      auto p = degree_profile(f, root);
      std::cout << "distance out in\n";
      for (std::size_t n = 0; n < p.out.size(); ++n)
        std::cout << n << " " << p.out[n] << " " << p.in[n] << (p.unreliable[n] ? " frontier" : "") << "\n";
      auto c = fit_outdegree_bound(p);
      std::cout << "bound: " << (c ? std::to_string(*c) + "^n" : std::string("none")) << "\n";
      return ok;
    };
  });

  // gadget
  std::string kind, lang, letters = "ab", growth = "n";
  bool lang_given = false;
  std::size_t max_letters = 4, max_n = 5;
  std::optional<std::size_t> gadget_radius;
  auto gadget_cmd = app.add_subcommand("gadget", "gadget graphs for a toy language");
  gadget_cmd->add_option("kind", kind, "fig3, bitree, lemma-id or tree")
      ->required()
      ->check(CLI::IsMember({"fig3", "bitree", "lemma-id", "tree"}));
  gadget_cmd->add_option("--lang", lang, "pattern for L over the letters (default: L empty)");
  gadget_cmd->add_option("--letters", letters, "letters of the language");
  gadget_cmd->add_option("--max-letters", max_letters, "keep vertices carrying at most this many letters");
  gadget_cmd->add_option("--f", growth, "in-degree function for lemma-id: n, n2 or 2n")
      ->check(CLI::IsMember({"n", "n2", "2n"}));
  gadget_cmd->add_option("--max-n", max_n, "spine length for lemma-id");
  gadget_cmd->add_option("--radius", gadget_radius, "ball radius");
  gadget_cmd->add_option("--dot", dot_out, "write DOT here (default: stdout)");
  gadget_cmd->callback([&] {
    lang_given = gadget_cmd->count("--lang") > 0;
    run = [&] {
      GraphFragment f;
      if (kind == "tree") {
        auto sigma = letters_of(letters);
        f = language_tree(pattern_language(lang, sigma, lang_given), sigma, gadget_radius.value_or(4), g.cap);
      } else if (kind == "lemma-id") {
        std::function<std::size_t(std::size_t)> fn = [](std::size_t n) { return n; };
        if (growth == "n2") fn = [](std::size_t n) { return n * n; };
        if (growth == "2n") fn = [](std::size_t n) { return std::size_t{1} << std::min<std::size_t>(n, 62); };
        f = ball(lemma_id_gadget(fn, max_n), {Word{}}, gadget_radius.value_or(64), g.cap);
      } else {
        const Symbol sharp("#");
        // Bitree vertices carry a leading 0 or 0-bar besides the path.
        std::size_t limit = max_letters + (kind == "bitree");
        auto keep = std::function<bool(const Word&)>([=](const Word& w) {
          return static_cast<std::size_t>(std::count(w.begin(), w.end(), sharp)) + limit >= w.size();
        });
        if (kind == "fig3") {
          auto sigma = letters_of(letters);
          auto L = pattern_language(lang, sigma, lang_given);
          f = ball(restrict_generator(fig3_gadget(L, sigma), keep), {Word{sharp}}, gadget_radius.value_or(64), g.cap);
        } else {
          auto L = pattern_language(lang, {Symbol("0"), Symbol("1")}, lang_given);
          f = ball(restrict_generator(bitree_gadget(L), keep), {Word{Symbol("0")}, Word{Symbol("0̄")}},
                   gadget_radius.value_or(64), g.cap);
        }
      }
      emit(to_dot(f), dot_out);
      return ok;
    };
  });

  // figure
  std::string fig_name;
  std::optional<std::size_t> fig_radius;
  auto figure_cmd = app.add_subcommand("figure", "built-in figure fragments");
  figure_cmd->add_option("name", fig_name, "fig1, fig2, fig4b, fig4c, fig5, fig6, fig7 or fig8")->required();
  figure_cmd->add_option("--radius", fig_radius, "override the default radius");
  figure_cmd->add_option("--dot", dot_out, "write DOT here (default: stdout)");
  figure_cmd->callback([&] {
    run = [&] {
      emit(to_dot(figure(fig_name, fig_radius, g)), dot_out);
      return ok;
    };
  });

  // random
  corpus::MachineShape shape;
  auto random_cmd = app.add_subcommand("random", "a seeded random labeled machine");
  random_cmd->add_option("--states", shape.states, "number of states");
  random_cmd->add_option("--tape", shape.tape, "number of tape symbols (at most 4)");
  random_cmd->add_option("--input", shape.input, "number of input letters");
  random_cmd->add_option("--rules", shape.rules, "number of rules");
  random_cmd->add_option("-o,--output", out, "output file (default: stdout)");
  random_cmd->callback([&] {
    run = [&] {
      emit(io::serialize(corpus::random_llbm(g.seed, shape)), out);
      return ok;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }
  try {
    return run();
  } catch (const SizeExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cap_hit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
}
