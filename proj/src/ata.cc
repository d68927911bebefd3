#include "oneata/ata.hh"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace oneata {

Loc OneATA::add_location(const std::string &n) {
  if (auto q = find_location(n))
    return *q;
  locations.push_back(n);
  return static_cast<Loc>(locations.size() - 1);
}

Loc OneATA::loc_id(const std::string &n) const {
  if (auto q = find_location(n))
    return *q;
  throw std::out_of_range("unknown location '" + n + "'");
}

std::optional<Loc> OneATA::find_location(const std::string &n) const {
  auto it = std::find(locations.begin(), locations.end(), n);
  if (it == locations.end())
    return std::nullopt;
  return static_cast<Loc>(it - locations.begin());
}

bool OneATA::has_letter(const std::string &a) const {
  return std::find(alphabet.begin(), alphabet.end(), a) != alphabet.end();
}

void OneATA::set_transition(Loc q, const std::string &a, std::vector<Clause> clauses) {
  delta_[{q, a}] = std::move(clauses);
}

const std::vector<Clause> *OneATA::transitions(Loc q, const std::string &a) const {
  auto it = delta_.find({q, a});
  return it == delta_.end() ? nullptr : &it->second;
}

void OneATA::validate() const {
  if (locations.empty())
    throw std::invalid_argument("automaton has no locations");
  if (alphabet.empty())
    throw std::invalid_argument("automaton has an empty alphabet");
  auto n = static_cast<Loc>(locations.size());
  auto check = [&](Loc q) {
    if (q < 0 || q >= n)
      throw std::invalid_argument("location id out of range");
  };
  check(initial);
  for (Loc q : accepting)
    check(q);
  for (const auto &[key, clauses] : delta_) {
    check(key.first);
    if (!has_letter(key.second))
      throw std::invalid_argument("transition on letter '" + key.second + "' outside the alphabet");
    for (const auto &c : clauses) {
      if (c.is_false && (c.guard || !c.has_no_atoms()))
        throw std::invalid_argument("false clause with atoms");
      for (const auto *s : {&c.now_states, &c.reset_states, &c.deactivated_states})
        for (Loc q : *s)
          check(q);
    }
  }
}

bool OneATA::operator==(const OneATA &o) const {
  return locations == o.locations && alphabet == o.alphabet && initial == o.initial &&
         accepting == o.accepting && delta_ == o.delta_;
}

TimedWord parse_timed_word(const std::string &text) {
  TimedWord w;
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  auto fail = [&](const std::string &msg) {
    throw std::invalid_argument("timed word, column " + std::to_string(i + 1) + ": " + msg);
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '(')
      fail("expected '('");
    ++i;
    skip();
    size_t start = i;
    while (i < text.size() && text[i] != ',' && !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    Rational d;
    try {
      d = parse_rational(text.substr(start, i - start));
    } catch (const std::invalid_argument &e) {
      i = start;
      fail(e.what());
    }
    if (d < 0)
      fail("negative delay");
    skip();
    if (i >= text.size() || text[i] != ',')
      fail("expected ','");
    ++i;
    skip();
    start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      ++i;
    if (i == start)
      fail("expected a letter");
    std::string letter = text.substr(start, i - start);
    skip();
    if (i >= text.size() || text[i] != ')')
      fail("expected ')'");
    ++i;
    skip();
    w.push_back({d, letter});
  }
  return w;
}

std::string to_string(const TimedWord &w) {
  std::string s;
  for (const auto &e : w)
    s += "(" + to_string(e.delay) + "," + e.letter + ")";
  return s;
}

std::string to_string(const Configuration &g, const OneATA &a) {
  std::string s = "{";
  bool first = true;
  for (const auto &st : g) {
    if (!first)
      s += ", ";
    first = false;
    s += "(" + a.loc_name(st.loc) + "," + (st.val ? to_string(*st.val) : std::string("bot")) + ")";
  }
  return s + "}";
}

std::optional<Configuration> minimal_model(const Clause &c, const std::optional<Rational> &v) {
  if (c.is_false)
    return std::nullopt;
  if (v && c.guard && !c.guard->contains(*v))
    return std::nullopt;
  Configuration m;
  for (Loc q : c.now_states)
    m.insert(State{q, v});
  for (Loc q : c.reset_states)
    m.insert(State{q, Rational(0)});
  for (Loc q : c.deactivated_states)
    m.insert(State{q, std::nullopt});
  return m;
}

Configuration time_elapse_config(const Configuration &g, const Rational &d) {
  Configuration r;
  for (const auto &s : g)
    r.insert(s.val ? State{s.loc, *s.val + d} : s);
  return r;
}

std::optional<Configuration> apply_combination(const Configuration &g,
                                               const std::vector<Clause> &clauses) {
  if (clauses.size() != g.size())
    throw std::invalid_argument("clause combination size mismatch");
  Configuration r;
  size_t j = 0;
  for (const auto &s : g) {
    auto m = minimal_model(clauses[j++], s.val);
    if (!m)
      return std::nullopt;
    r.insert(m->begin(), m->end());
  }
  return r;
}

std::vector<DiscreteStep> discrete_successors(const OneATA &a, const Configuration &g,
                                              const std::string &letter) {
  std::vector<const State *> states;
  std::vector<std::vector<std::pair<const Clause *, Configuration>>> options;
  for (const auto &s : g) {
    const auto *cl = a.transitions(s.loc, letter);
    if (!cl)
      return {};
    std::vector<std::pair<const Clause *, Configuration>> opts;
    for (const auto &c : *cl)
      if (auto m = minimal_model(c, s.val))
        opts.emplace_back(&c, std::move(*m));
    if (opts.empty())
      return {};
    options.push_back(std::move(opts));
  }
  std::vector<DiscreteStep> out;
  std::vector<size_t> idx(options.size(), 0);
  while (true) {
    DiscreteStep st;
    for (size_t j = 0; j < options.size(); ++j) {
      st.target.push_back(*options[j][idx[j]].first);
      st.result.insert(options[j][idx[j]].second.begin(), options[j][idx[j]].second.end());
    }
    out.push_back(std::move(st));
    size_t j = 0;
    while (j < options.size() && ++idx[j] == options[j].size())
      idx[j++] = 0;
    if (j == options.size())
      break;
  }
  return out;
}

Configuration initial_configuration(const OneATA &a) {
  return Configuration{State{a.initial, Rational(0)}};
}

bool is_accepting(const OneATA &a, const Configuration &g) {
  return std::all_of(g.begin(), g.end(), [&](const State &s) { return a.is_accepting(s.loc); });
}

std::set<Configuration> reachable_configurations(const OneATA &a, const TimedWord &w) {
  std::set<Configuration> frontier{initial_configuration(a)};
  for (const auto &ev : w) {
    std::set<Configuration> next;
    for (const auto &g : frontier)
      for (auto &st : discrete_successors(a, time_elapse_config(g, ev.delay), ev.letter))
        next.insert(std::move(st.result));
    frontier = std::move(next);
    if (frontier.empty())
      break;
  }
  return frontier;
}

bool accepts(const OneATA &a, const TimedWord &w) {
  for (const auto &g : reachable_configurations(a, w))
    if (is_accepting(a, g))
      return true;
  return false;
}

size_t config_width(const Configuration &g) {
  return static_cast<size_t>(std::count_if(g.begin(), g.end(), [](const State &s) { return s.active(); }));
}

long long max_constant(const OneATA &a) {
  long long m = 0;
  for (const auto &[key, clauses] : a.delta())
    for (const auto &c : clauses)
      if (c.guard)
        m = std::max(m, c.guard->max_constant());
  return m;
}

size_t observed_width(const OneATA &a, size_t max_depth, const std::vector<Rational> &delays,
                      size_t config_cap) {
  std::set<Configuration> level{initial_configuration(a)};
  size_t best = 1;
  for (size_t depth = 0; depth < max_depth && !level.empty(); ++depth) {
    std::set<Configuration> next;
    for (const auto &g : level)
      for (const auto &d : delays) {
        auto ge = time_elapse_config(g, d);
        for (const auto &letter : a.alphabet)
          for (auto &st : discrete_successors(a, ge, letter)) {
            best = std::max(best, config_width(st.result));
            next.insert(std::move(st.result));
            if (next.size() > config_cap)
              throw std::runtime_error("observed_width: configuration cap exceeded");
          }
      }
    level = std::move(next);
  }
  return best;
}

} // namespace oneata
