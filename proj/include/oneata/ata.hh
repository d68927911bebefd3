#pragma once

#include "oneata/formula.hh"
#include "oneata/rational.hh"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oneata {

/// One-clock alternating timed automaton with DNF transitions.
class OneATA {
public:
  std::string name = "A";
  std::vector<std::string> locations;
  std::vector<std::string> alphabet;
  Loc initial = 0;
  std::set<Loc> accepting;

  Loc add_location(const std::string &n);
  /// Id of a location; throws std::out_of_range when absent.
  Loc loc_id(const std::string &n) const;
  std::optional<Loc> find_location(const std::string &n) const;
  const std::string &loc_name(Loc q) const { return locations.at(static_cast<size_t>(q)); }

  bool has_letter(const std::string &a) const;
  bool is_accepting(Loc q) const { return accepting.count(q) != 0; }

  void set_transition(Loc q, const std::string &a, std::vector<Clause> clauses);
  /// nullptr when delta(q,a) is undefined.
  const std::vector<Clause> *transitions(Loc q, const std::string &a) const;
  const std::map<std::pair<Loc, std::string>, std::vector<Clause>> &delta() const { return delta_; }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  bool operator==(const OneATA &o) const;

private:
  std::map<std::pair<Loc, std::string>, std::vector<Clause>> delta_;
};

struct State {
  Loc loc = 0;
  std::optional<Rational> val; // nullopt = inactive

  bool active() const { return val.has_value(); }
  bool operator==(const State &) const = default;
  bool operator<(const State &o) const {
    if (loc != o.loc)
      return loc < o.loc;
    if (val.has_value() != o.val.has_value())
      return !val.has_value();
    return val && *val < *o.val;
  }
};

using Configuration = std::set<State>;

struct TimedEvent {
  Rational delay;
  std::string letter;
  bool operator==(const TimedEvent &) const = default;
};
using TimedWord = std::vector<TimedEvent>;

TimedWord parse_timed_word(const std::string &text);
std::string to_string(const TimedWord &w);
std::string to_string(const Configuration &g, const OneATA &a);

/// nullopt models NoModel.
std::optional<Configuration> minimal_model(const Clause &c, const std::optional<Rational> &v);

Configuration time_elapse_config(const Configuration &g, const Rational &d);

struct DiscreteStep {
  std::vector<Clause> target; // one clause per state of g, in set order
  Configuration result;
};
std::vector<DiscreteStep> discrete_successors(const OneATA &a, const Configuration &g,
                                              const std::string &letter);

/// Applies a fixed clause per state (states in set order); nullopt when a model is missing.
std::optional<Configuration> apply_combination(const Configuration &g,
                                               const std::vector<Clause> &clauses);

Configuration initial_configuration(const OneATA &a);
bool is_accepting(const OneATA &a, const Configuration &g);
bool accepts(const OneATA &a, const TimedWord &w);

/// All configurations reachable by reading w (explicit semantics).
std::set<Configuration> reachable_configurations(const OneATA &a, const TimedWord &w);

size_t config_width(const Configuration &g);
long long max_constant(const OneATA &a);
size_t observed_width(const OneATA &a, size_t max_depth, const std::vector<Rational> &delays,
                      size_t config_cap = 200000);

} // namespace oneata
