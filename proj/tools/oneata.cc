// Command-line front end: translate, sat, empty, simulate, entail, gen-hard,
// modelcheck, width-bound.

#include "oneata/emptiness.hh"
#include "oneata/entailment.hh"
#include "oneata/mtl.hh"
#include "oneata/product.hh"
#include "oneata/text.hh"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace oneata;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInconclusive = 2, kInputError = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw InputError("cannot write '" + path + "'");
  out << text;
}

template <class F> auto parsing(const std::string &what, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument &e) {
    throw InputError(what + ": " + e.what());
  }
}

std::vector<std::string> split_letters(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::string valuation_text(const Dbm &z, const Valuation &v, const Naming &names) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i)
    out += (i ? " " : "") + names.var_name(z.vars()[i]) + "=" + to_string(v[i]);
  return out;
}

json valuation_json(const Dbm &z, const Valuation &v, const Naming &names) {
  json j = json::object();
  for (size_t i = 0; i < v.size(); ++i)
    j[names.var_name(z.vars()[i])] = to_string(v[i]);
  return j;
}

json word_json(const TimedWord &w) {
  json j = json::array();
  for (const auto &e : w)
    j.push_back({{"delay", to_string(e.delay)}, {"letter", e.letter}});
  return j;
}

struct ExploreOpts {
  std::string prune;
  size_t max_nodes = 100000;
  unsigned jobs = 1;
  bool explore_all = false;
  bool dfs = false;
  std::string dot;
};

void add_explore_opts(CLI::App *cmd, ExploreOpts &o) {
  cmd->add_option("--prune", o.prune, "full | bounded | none");
  cmd->add_option("--max-nodes", o.max_nodes, "node budget");
  cmd->add_option("--jobs", o.jobs, "worker threads for successor computation");
  cmd->add_flag("--explore-all", o.explore_all, "do not stop at the first accepting node");
  cmd->add_flag("--dfs", o.dfs, "depth-first order");
  cmd->add_option("--dot", o.dot, "write the explored zone graph");
}

ExploreConfig make_config(const ExploreOpts &o, ExploreConfig base = {}) {
  if (!o.prune.empty())
    base.pruning = parsing("--prune", [&] { return parse_pruning(o.prune); });
  base.max_nodes = o.max_nodes;
  base.jobs = o.jobs;
  base.stop_at_accepting = !o.explore_all;
  base.order = o.dfs ? SearchOrder::DepthFirst : SearchOrder::BreadthFirst;
  return base;
}

int report(const ExploreResult &r, const ExploreConfig &cfg, bool as_json, const std::string &what) {
  const Verdict &v = r.verdict;
  if (as_json) {
    json j = {{"command", what},
              {"verdict", to_string(v.kind)},
              {"nodes", r.graph.nodes.size()},
              {"edges", r.graph.edges.size()},
              {"pruned", r.pruned},
              {"pruning", to_string(cfg.pruning)},
              {"max_constant", r.max_constant}};
    if (v.kind == VerdictKind::NonEmpty) {
      j["witness"] = word_json(v.witness);
      j["path"] = v.path_nodes;
    }
    if (!v.reason.empty())
      j["reason"] = v.reason;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << to_string(v.kind) << '\n';
    if (v.kind == VerdictKind::NonEmpty)
      std::cout << "witness: " << (v.witness.empty() ? "(empty word)" : to_string(v.witness)) << '\n';
    if (!v.reason.empty())
      std::cout << "reason: " << v.reason << '\n';
    std::cout << "nodes: " << r.graph.nodes.size() << ", pruned: " << r.pruned << '\n';
  }
  switch (v.kind) {
  case VerdictKind::Empty:
    return kOk;
  case VerdictKind::NonEmpty:
    return kNegative;
  case VerdictKind::Inconclusive:
    return kInconclusive;
  }
  return kInconclusive;
}

mtl::FormulaPtr read_formula(const std::string &text) {
  return parsing("formula", [&] { return mtl::parse(text); });
}

OneATA read_ata(const std::string &path) {
  std::string text = read_file(path);
  return parsing(path, [&] { return parse_ata(text); });
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"One-clock alternating timed automata: emptiness, entailment, MTL satisfiability"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string mtl_text, letters, ata_path, word_text, z_path, zp_path, cnf_path, ta_path, out_z,
      out_zp, out_path;
  long long M = -1;
  size_t depth = 3;
  ExploreOpts eo;
  bool bounded = false, brute = false;

  auto *translate = app.add_subcommand("translate", "MTL formula to 1-ATA");
  translate->add_option("--mtl", mtl_text, "formula")->required();
  translate->add_option("--letters", letters, "extra alphabet letters, comma separated");
  translate->add_option("-o,--out", out_path, "output file");

  auto *sat = app.add_subcommand("sat", "MTL satisfiability");
  sat->add_option("--mtl", mtl_text, "formula")->required();
  sat->add_option("--letters", letters, "extra alphabet letters, comma separated");
  add_explore_opts(sat, eo);

  auto *empty = app.add_subcommand("empty", "1-ATA emptiness");
  empty->add_option("--ata", ata_path, "automaton file")->required();
  add_explore_opts(empty, eo);

  auto *simulate = app.add_subcommand("simulate", "run a 1-ATA on a timed word");
  simulate->add_option("--ata", ata_path, "automaton file")->required();
  simulate->add_option("--word", word_text, "timed word, e.g. (0.5,a)(0.7,a)")->required();

  auto *entail = app.add_subcommand("entail", "node entailment Z <= Z'");
  entail->add_option("--z", z_path, "zone dump of the smaller node")->required();
  entail->add_option("--zprime", zp_path, "zone dump of the larger node")->required();
  entail->add_option("--M", M, "maximal constant")->required();
  entail->add_flag("--bounded", bounded, "identity-mapping check");
  entail->add_flag("--brute-force", brute, "region enumeration oracle");

  auto *genhard = app.add_subcommand("gen-hard", "entailment instance from a monotone 3-CNF");
  genhard->add_option("--cnf", cnf_path, "DIMACS-like file")->required();
  genhard->add_option("--out-z", out_z, "write Z here");
  genhard->add_option("--out-zprime", out_zp, "write Z' here");

  auto *mc = app.add_subcommand("modelcheck", "timed automaton against a 1-ATA");
  mc->add_option("--ta", ta_path, "timed automaton file")->required();
  auto *spec_opt = mc->add_option("--spec", ata_path, "1-ATA file");
  mc->add_option("--mtl", mtl_text, "formula whose translation is the specification")->excludes(spec_opt);
  add_explore_opts(mc, eo);

  auto *wb = app.add_subcommand("width-bound", "width bound of a one-sided formula");
  wb->add_option("--mtl", mtl_text, "formula")->required();
  wb->add_option("--depth", depth, "depth for the observed width (0 skips)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*translate) {
      auto f = read_formula(mtl_text);
      auto tr = mtl::translate(*f, split_letters(letters));
      std::string text = print_ata(tr.automaton);
      if (as_json) {
        json j = {{"command", "translate"}, {"formula", mtl::to_string(*f)}, {"automaton", text}};
        j["locations"] = json::object();
        for (const auto &[k, q] : tr.location_of)
          j["locations"][k] = tr.automaton.loc_name(q);
        j["width_bound"] = tr.width_bound ? json(*tr.width_bound) : json(nullptr);
        text = j.dump(2) + "\n";
      }
      if (out_path.empty())
        std::cout << text;
      else
        write_file(out_path, text);
      return kOk;
    }

    if (*sat) {
      auto f = read_formula(mtl_text);
      auto tr = mtl::translate(*f, split_letters(letters));
      ExploreConfig cfg = make_config(eo, default_config(*f));
      auto r = explore(tr.automaton, cfg);
      if (!eo.dot.empty())
        write_file(eo.dot, to_dot(r.graph, Naming::of(tr.automaton)));
      if (r.verdict.kind == VerdictKind::NonEmpty && !mtl::satisfies(r.verdict.witness, *f))
        throw std::logic_error("witness does not satisfy the formula");
      return report(r, cfg, as_json, "sat");
    }

    if (*empty) {
      OneATA a = read_ata(ata_path);
      ExploreConfig cfg = make_config(eo);
      auto r = explore(a, cfg);
      if (!eo.dot.empty())
        write_file(eo.dot, to_dot(r.graph, Naming::of(a)));
      return report(r, cfg, as_json, "empty");
    }

    if (*simulate) {
      OneATA a = read_ata(ata_path);
      TimedWord w = parsing("word", [&] { return parse_timed_word(word_text); });
      for (const auto &e : w)
        if (!a.has_letter(e.letter))
          throw InputError("word: letter '" + e.letter + "' is not in the alphabet");
      std::set<Configuration> cur{initial_configuration(a)};
      json steps = json::array();
      auto show = [&](const std::string &label) {
        std::vector<std::string> cs;
        for (const auto &g : cur)
          cs.push_back(to_string(g, a));
        if (as_json) {
          steps.push_back({{"step", label}, {"configurations", cs}});
          return;
        }
        std::cout << label << ":";
        for (const auto &c : cs)
          std::cout << ' ' << c;
        if (cs.empty())
          std::cout << " (no run)";
        std::cout << '\n';
      };
      show("start");
      for (const auto &ev : w) {
        std::set<Configuration> el;
        for (const auto &g : cur)
          el.insert(time_elapse_config(g, ev.delay));
        cur = std::move(el);
        show("delay " + to_string(ev.delay));
        std::set<Configuration> next;
        for (const auto &g : cur)
          for (auto &st : discrete_successors(a, g, ev.letter))
            next.insert(std::move(st.result));
        cur = std::move(next);
        show("read " + ev.letter);
      }
      bool acc = std::any_of(cur.begin(), cur.end(), [&](const Configuration &g) { return is_accepting(a, g); });
      if (as_json)
        std::cout << json{{"command", "simulate"}, {"word", to_string(w)}, {"run", steps},
                          {"result", acc ? "ACCEPTED" : "REJECTED"}}
                         .dump(2)
                  << '\n';
      else
        std::cout << (acc ? "ACCEPTED" : "REJECTED") << '\n';
      return acc ? kOk : kNegative;
    }

    if (*entail) {
      if (M < 0)
        throw InputError("--M must be non-negative");
      Naming names;
      std::string t1 = read_file(z_path), t2 = read_file(zp_path);
      Node n1 = parsing(z_path, [&] { return parse_node(t1, names); });
      Node n2 = parsing(zp_path, [&] { return parse_node(t2, names); });
      EntailResult r;
      std::string method = "full";
      if (bounded) {
        r.entails = node_entails_bounded(n1, n2, M);
        method = "bounded";
      } else if (brute) {
        r.entails = brute_force_node_entails(n1, n2, M);
        method = "brute-force";
      } else {
        r = node_entails_ex(n1, n2, M);
      }
      if (as_json) {
        json j = {{"command", "entail"}, {"method", method}, {"M", M},
                  {"result", r.entails ? "ENTAILS" : "NOT-ENTAILS"}};
        if (r.witness)
          j["witness"] = valuation_json(n2.zone, *r.witness, names);
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << (r.entails ? "ENTAILS" : "NOT-ENTAILS") << '\n';
        if (r.witness)
          std::cout << "witness: " << valuation_text(n2.zone, *r.witness, names) << '\n';
      }
      return r.entails ? kOk : kNegative;
    }

    if (*genhard) {
      std::string text = read_file(cnf_path);
      Cnf f = parsing(cnf_path, [&] { return parse_cnf(text); });
      HardnessInstance h = parsing(cnf_path, [&] { return gen_hardness_instance(f); });
      std::string dz = dump_node(h.z, h.names), dzp = dump_node(h.z_prime, h.names);
      if (!out_z.empty())
        write_file(out_z, dz);
      if (!out_zp.empty())
        write_file(out_zp, dzp);
      if (as_json) {
        std::cout << json{{"command", "gen-hard"}, {"M", h.m_const}, {"z", dz}, {"zprime", dzp},
                          {"clauses", h.formula.clauses.size()}}
                         .dump(2)
                  << '\n';
      } else {
        if (out_z.empty())
          std::cout << "# Z\n" << dz;
        if (out_zp.empty())
          std::cout << "# Z'\n" << dzp;
        std::cout << "M " << h.m_const << '\n';
      }
      return kOk;
    }

    if (*mc) {
      std::string tt = read_file(ta_path);
      TimedAutomaton ta = parsing(ta_path, [&] { return parse_ta(tt); });
      OneATA spec;
      if (!mtl_text.empty())
        spec = mtl::translate(*read_formula(mtl_text), ta.alphabet).automaton;
      else if (!ata_path.empty())
        spec = read_ata(ata_path);
      else
        throw InputError("modelcheck needs --spec or --mtl");
      ExploreConfig cfg = make_config(eo);
      auto r = model_check(ta, spec, cfg);
      if (!eo.dot.empty())
        write_file(eo.dot, to_dot(r.graph, Naming{spec.locations, ta.clocks}, ta.locations));
      return report(r, cfg, as_json, "modelcheck");
    }

    if (*wb) {
      auto f = read_formula(mtl_text);
      unsigned bound = parsing("formula", [&] { return mtl::width_bound(*f); });
      std::optional<size_t> seen;
      if (depth > 0) {
        auto tr = mtl::translate(*f);
        std::vector<Rational> delays{Rational(0), Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
        seen = observed_width(tr.automaton, depth, delays);
      }
      if (as_json) {
        json j = {{"command", "width-bound"}, {"bound", bound}};
        if (seen)
          j["observed"] = *seen, j["depth"] = depth;
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << "width bound: " << bound << '\n';
        if (seen)
          std::cout << "observed width (depth " << depth << "): " << *seen << '\n';
      }
      return kOk;
    }
  } catch (const InputError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
  return kInputError;
}
