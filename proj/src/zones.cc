#include "oneata/zones.hh"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oneata {

size_t Node::hash() const {
  size_t h = zone.hash();
  for (const auto &v : inactive)
    h ^= static_cast<size_t>(v.loc) * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::string Naming::var_name(const VarName &v) const {
  if (v.is_clock())
    return clocks.at(static_cast<size_t>(-v.loc - 1));
  return locs.at(static_cast<size_t>(v.loc)) + "." + std::to_string(v.index);
}

Loc Naming::location(const std::string &name, bool create) {
  auto it = std::find(locs.begin(), locs.end(), name);
  if (it != locs.end())
    return static_cast<Loc>(it - locs.begin());
  if (!create)
    throw std::invalid_argument("unknown location '" + name + "'");
  locs.push_back(name);
  return static_cast<Loc>(locs.size() - 1);
}

VarName Naming::clock(const std::string &name, bool create) {
  auto it = std::find(clocks.begin(), clocks.end(), name);
  if (it != clocks.end())
    return clock_var(static_cast<int>(it - clocks.begin()));
  if (!create)
    throw std::invalid_argument("unknown clock '" + name + "'");
  clocks.push_back(name);
  return clock_var(static_cast<int>(clocks.size() - 1));
}

Node initial_node(const OneATA &a) {
  Dbm z({VarName{a.initial, 1}});
  z.constrain(1, 0, Bound::zero());
  return Node{z, {}};
}

Node time_elapse_node(const Node &n) {
  Node r = n;
  r.zone.up();
  return r;
}

std::vector<Target> enumerate_targets(const Node &n, const std::string &letter, const OneATA &a) {
  std::vector<VarName> vars;
  for (const auto &v : n.zone.vars())
    if (!v.is_clock())
      vars.push_back(v);
  vars.insert(vars.end(), n.inactive.begin(), n.inactive.end());
  std::vector<const std::vector<Clause> *> lists;
  for (const auto &v : vars) {
    const auto *cl = a.transitions(v.loc, letter);
    if (!cl)
      return {};
    bool any = std::any_of(cl->begin(), cl->end(), [](const Clause &c) { return !c.is_false; });
    if (!any)
      return {};
    lists.push_back(cl);
  }
  std::vector<Target> out;
  std::vector<size_t> idx(vars.size(), 0);
  auto valid = [&] {
    for (size_t j = 0; j < vars.size(); ++j)
      if ((*lists[j])[idx[j]].is_false)
        return false;
    return true;
  };
  while (true) {
    if (valid()) {
      Target t;
      t.vars = vars;
      for (size_t j = 0; j < vars.size(); ++j) {
        t.clauses.push_back((*lists[j])[idx[j]]);
        t.clause_index.push_back(idx[j]);
      }
      out.push_back(std::move(t));
    }
    size_t j = 0;
    while (j < vars.size() && ++idx[j] == lists[j]->size())
      idx[j++] = 0;
    if (j == vars.size())
      break;
  }
  return out;
}

std::optional<Node> successor_with_clocks(const Node &n, const Target &t,
                                          const std::vector<std::pair<VarName, Interval>> &clock_guards,
                                          const std::vector<VarName> &clock_resets,
                                          std::vector<size_t> *origin) {
  // (1) time elapse, (2) guards on active variables.
  Dbm z = n.zone;
  z.up();
  for (size_t j = 0; j < t.vars.size(); ++j) {
    const auto &c = t.clauses[j];
    if (!c.guard || t.vars[j].index == 0)
      continue;
    auto i = z.index_of(t.vars[j]);
    if (!i)
      throw std::invalid_argument("target variable not in node");
    if (!z.constrain_interval(*i, *c.guard))
      return std::nullopt;
  }
  for (const auto &[clk, in] : clock_guards) {
    auto i = z.index_of(clk);
    if (!i)
      throw std::invalid_argument("guard on unknown clock");
    if (!z.constrain_interval(*i, in))
      return std::nullopt;
  }

  // (3) new variables: key -> source matrix index (0 = reset to zero).
  std::map<VarName, size_t> fresh;
  std::set<VarName> ia;
  std::map<Loc, int> next_index;
  for (const auto &v : z.vars())
    if (v.is_clock())
      fresh[v] = *z.index_of(v);
  for (size_t j = 0; j < t.vars.size(); ++j) {
    const auto &src = t.vars[j];
    const auto &c = t.clauses[j];
    bool active = src.index != 0;
    for (Loc q : c.now_states) {
      if (!active) {
        ia.insert(VarName{q, 0});
        continue;
      }
      auto &k = next_index[q];
      if (k < 2)
        k = 2;
      fresh[VarName{q, k++}] = *z.index_of(src);
    }
    for (Loc q : c.reset_states)
      fresh[VarName{q, 1}] = 0;
    for (Loc q : c.deactivated_states)
      ia.insert(VarName{q, 0});
  }

  // (4) extend, equate, project onto the fresh variables.
  size_t old_dim = z.dim();
  std::vector<VarName> all = z.vars();
  for (const auto &[v, src] : fresh) {
    VarName tagged = v;
    tagged.index += 1 << 20; // keeps fresh names apart from old ones
    all.push_back(tagged);
  }
  Dbm big(all);
  for (size_t i = 0; i < old_dim; ++i)
    for (size_t j = 0; j < old_dim; ++j)
      big.set(i, j, z.at(i, j));
  // Close the fresh columns: x_i - x_new <= x_i - 0 since x_new >= 0.
  for (size_t k = old_dim; k < big.dim(); ++k)
    for (size_t i = 0; i < old_dim; ++i)
      big.set(i, k, z.at(i, 0));
  size_t pos = old_dim;
  std::vector<size_t> keep;
  for (const auto &[v, src] : fresh) {
    if (!big.constrain(pos, src, Bound::zero()) || !big.constrain(src, pos, Bound::zero()))
      throw std::logic_error("copy constraint emptied a non-empty zone");
    keep.push_back(pos++);
  }
  Dbm proj = big.project(keep);

  // Compact indices per location, preserving order.
  std::vector<VarName> names;
  std::map<Loc, int> counter;
  for (const auto &[v, src] : fresh)
    names.push_back(v.is_clock() ? v : VarName{v.loc, ++counter[v.loc]});
  Node out{proj.renamed(names), std::vector<VarName>(ia.begin(), ia.end())};
  if (origin) {
    origin->clear();
    for (const auto &[v, src] : fresh)
      origin->push_back(src);
  }
  for (const auto &clk : clock_resets) {
    auto i = out.zone.index_of(clk);
    if (!i)
      throw std::invalid_argument("reset of unknown clock");
    out.zone.reset(*i);
    if (origin)
      (*origin)[*i - 1] = 0;
  }
  return out;
}

std::optional<Node> successor(const Node &n, const std::string &, const Target &t, const OneATA &) {
  return successor_with_clocks(n, t, {}, {});
}

bool is_accepting_node(const Node &n, const OneATA &a) {
  for (const auto &v : n.zone.vars())
    if (!v.is_clock() && !a.is_accepting(v.loc))
      return false;
  for (const auto &v : n.inactive)
    if (!a.is_accepting(v.loc))
      return false;
  return true;
}

bool node_satisfies(const Configuration &g, const Node &n) {
  const auto &vars = n.zone.vars();
  std::vector<State> states(g.begin(), g.end());
  for (const auto &v : n.inactive)
    if (!g.count(State{v.loc, std::nullopt}))
      return false;
  // Inactive states of g must all be covered by IA.
  for (const auto &s : states)
    if (!s.active() &&
        !std::binary_search(n.inactive.begin(), n.inactive.end(), VarName{s.loc, 0}))
      return false;
  std::vector<size_t> active_states;
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i].active())
      active_states.push_back(i);
  std::vector<size_t> assign(vars.size());
  std::vector<int> hits(states.size(), 0);
  Valuation val(vars.size());
  std::function<bool(size_t)> rec = [&](size_t k) -> bool {
    if (k == vars.size()) {
      for (size_t s : active_states)
        if (hits[s] == 0)
          return false;
      return true;
    }
    // Enough variables left to cover the uncovered states?
    size_t uncovered = 0;
    for (size_t s : active_states)
      uncovered += hits[s] == 0;
    if (uncovered > vars.size() - k)
      return false;
    for (size_t s : active_states) {
      if (states[s].loc != vars[k].loc)
        continue;
      val[k] = *states[s].val;
      bool ok = n.zone.at(k + 1, 0).admits(val[k]) && n.zone.at(0, k + 1).admits(-val[k]);
      for (size_t j = 0; ok && j < k; ++j)
        ok = n.zone.at(k + 1, j + 1).admits(val[k] - val[j]) &&
             n.zone.at(j + 1, k + 1).admits(val[j] - val[k]);
      if (!ok)
        continue;
      ++hits[s];
      if (rec(k + 1))
        return true;
      --hits[s];
    }
    return false;
  };
  return rec(0);
}

Configuration configuration_of(const Node &n, const Valuation &v) {
  Configuration g;
  const auto &vars = n.zone.vars();
  for (size_t i = 0; i < vars.size(); ++i)
    if (!vars[i].is_clock())
      g.insert(State{vars[i].loc, v[i]});
  for (const auto &x : n.inactive)
    g.insert(State{x.loc, std::nullopt});
  return g;
}

Configuration sample_configuration(const Node &n) {
  auto v = sample_point(n.zone);
  if (!v)
    throw std::logic_error("sample_configuration on an empty zone");
  return configuration_of(n, *v);
}

Configuration sample_configuration_random(const Node &n, std::mt19937_64 &rng) {
  auto v = sample_point_random(n.zone, rng);
  if (!v)
    throw std::logic_error("sample_configuration on an empty zone");
  return configuration_of(n, *v);
}

std::string dump_node(const Node &n, const Naming &names) {
  std::ostringstream os;
  auto inactive_line = [&] {
    os << "inactive: {";
    for (size_t i = 0; i < n.inactive.size(); ++i)
      os << (i ? ", " : "") << names.var_name(n.inactive[i]);
    os << "}\n";
  };
  if (n.zone.size() == 0) {
    if (n.inactive.empty())
      return "EMPTYNODE\n";
    os << "EMPTYZONE\n";
    inactive_line();
    return os.str();
  }
  auto name = [&](size_t i) { return i == 0 ? std::string("0") : names.var_name(n.zone.vars()[i - 1]); };
  std::vector<std::string> lines;
  for (size_t i = 0; i < n.zone.dim(); ++i)
    for (size_t j = 0; j < n.zone.dim(); ++j) {
      Bound b = n.zone.at(i, j);
      if (i == j || b.is_inf())
        continue;
      lines.push_back(name(i) + " - " + name(j) + " " + (b.strict() ? "<" : "<=") + " " +
                      std::to_string(b.value()));
    }
  std::sort(lines.begin(), lines.end());
  for (const auto &l : lines)
    os << l << "\n";
  if (!n.inactive.empty())
    inactive_line();
  return os.str();
}

namespace {

std::string trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

} // namespace

Node parse_node(const std::string &text, Naming &names) {
  struct Constraint {
    std::string x, y; // x - y REL k ; y may be "0"
    std::string rel;
    long long k;
  };
  std::vector<Constraint> cs;
  std::set<VarName> ia;
  std::vector<VarName> declared;
  bool empty_zone = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &msg) {
    throw std::invalid_argument("zone line " + std::to_string(lineno) + ": " + msg);
  };
  auto parse_var = [&](const std::string &tok) -> VarName {
    auto dot = tok.rfind('.');
    if (dot == std::string::npos)
      return names.clock(tok, true);
    std::string idx = tok.substr(dot + 1);
    if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit))
      fail("bad variable '" + tok + "'");
    return VarName{names.location(tok.substr(0, dot), true), std::stoi(idx)};
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos)
      line = line.substr(0, h);
    line = trim(line);
    if (line.empty())
      continue;
    if (line == "EMPTYNODE" || line == "EMPTYZONE") {
      empty_zone = true;
      continue;
    }
    if (line.rfind("inactive:", 0) == 0) {
      auto a = line.find('{'), b = line.find('}');
      if (a == std::string::npos || b == std::string::npos || b < a)
        fail("expected inactive: {...}");
      std::istringstream items(line.substr(a + 1, b - a - 1));
      std::string tok;
      while (std::getline(items, tok, ',')) {
        tok = trim(tok);
        if (tok.empty())
          continue;
        VarName v = parse_var(tok);
        if (v.is_clock() || v.index != 0)
          fail("inactive variables must have index 0");
        ia.insert(v);
      }
      continue;
    }
    if (line.rfind("var ", 0) == 0) {
      std::istringstream items(line.substr(4));
      std::string tok;
      while (items >> tok)
        declared.push_back(parse_var(tok));
      continue;
    }
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok)
      toks.push_back(tok);
    Constraint c;
    size_t r = 1;
    if (toks.size() == 5 && toks[1] == "-") {
      c.x = toks[0];
      c.y = toks[2];
      r = 3;
    } else if (toks.size() == 3) {
      c.x = toks[0];
      c.y = "0";
    } else {
      fail("expected 'X - Y REL k' or 'X REL k'");
    }
    c.rel = toks[r];
    static const std::set<std::string> rels{"<", "<=", "=", ">=", ">"};
    if (!rels.count(c.rel))
      fail("unknown relation '" + c.rel + "'");
    try {
      size_t used = 0;
      c.k = std::stoll(toks[r + 1], &used);
      if (used != toks[r + 1].size())
        throw std::invalid_argument("");
    } catch (const std::exception &) {
      fail("expected an integer constant");
    }
    cs.push_back(c);
  }
  std::set<VarName> varset(declared.begin(), declared.end());
  for (const auto &c : cs)
    for (const auto *t : {&c.x, &c.y})
      if (*t != "0")
        varset.insert(parse_var(*t));
  if (empty_zone && !varset.empty())
    throw std::invalid_argument("EMPTYNODE/EMPTYZONE cannot carry constraints");
  for (const auto &v : varset)
    if (!v.is_clock() && v.index == 0)
      throw std::invalid_argument("zone variables must have index >= 1");
  Dbm z(std::vector<VarName>(varset.begin(), varset.end()));
  auto idx = [&](const std::string &t) -> size_t { return t == "0" ? 0 : *z.index_of(parse_var(t)); };
  for (const auto &c : cs) {
    size_t i = idx(c.x), j = idx(c.y);
    bool ok = true;
    if (c.rel == "<" || c.rel == "<=" || c.rel == "=")
      ok = z.constrain(i, j, c.rel == "<" ? Bound::lt(c.k) : Bound::le(c.k));
    if (ok && (c.rel == ">" || c.rel == ">=" || c.rel == "="))
      ok = z.constrain(j, i, c.rel == ">" ? Bound::lt(-c.k) : Bound::le(-c.k));
    if (!ok)
      throw std::invalid_argument("zone constraints are unsatisfiable");
  }
  return Node{z, std::vector<VarName>(ia.begin(), ia.end())};
}

} // namespace oneata
