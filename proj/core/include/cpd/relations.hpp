#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cpd/state_space.hpp"

namespace cpd {

/// The bisimulation action set B of a partial bisimulation check.
class ActionFilter {
 public:
  enum class Kind { all, none, uncontrollable, listed };

  static ActionFilter all() { return ActionFilter(Kind::all); }
  static ActionFilter none() { return ActionFilter(Kind::none); }
  static ActionFilter uncontrollable() { return ActionFilter(Kind::uncontrollable); }
  static ActionFilter listed(std::vector<Action> actions);

  bool contains(const Signature& sig, const Action& a) const;
  Kind kind() const { return kind_; }
  const std::vector<Action>& actions() const { return actions_; }

  /// Subset test; `listed` sets are compared against the other kinds by
  /// enumerating the labels that occur in `labels`.
  bool subset_of(const ActionFilter& other, const Signature& sig, const std::vector<Action>& labels) const;

 private:
  explicit ActionFilter(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<Action> actions_;
};

using StatePair = std::pair<StateId, StateId>;

/// One round of a distinguishing play: the attacker moves on one side, the
/// defender answers with an equally labeled move on the other.
struct PlayRound {
  StatePair from;
  bool attacker_left = true;
  Action action;
  StatePair to;
};

struct Counterexample {
  enum class Clause { termination, forward, backward };

  std::vector<PlayRound> rounds;
  StatePair final_pair;
  Clause clause = Clause::termination;
  /// For forward/backward: the attacker's unanswerable move from final_pair.
  Action action;
  StateId attacker_target = 0;
};

struct RelationResult {
  bool holds = false;
  std::vector<StatePair> witness;          // when holds
  std::optional<Counterexample> counterexample;  // when not

  explicit operator bool() const { return holds; }
};

/// Greatest partial bisimulation between two spaces with bisimulation action set B.
RelationResult partial_bisim(const StateSpace& left, const StateSpace& right, const ActionFilter& b);
/// partial_bisim with B = all actions, in both directions.
RelationResult bisimilar(const StateSpace& left, const StateSpace& right);
/// partial_bisim with B = ∅.
RelationResult simulated_by(const StateSpace& left, const StateSpace& right);

/// Human-readable rendering of a counterexample.
std::string render_counterexample(const StateSpace& left, const StateSpace& right, const Counterexample& cx);

/// Checks the relation for every initial valuation in the product of the
/// declared domains (the environment-universal reading). Exponential in the
/// number of variables.
RelationResult partial_bisim_all_environments(std::shared_ptr<const Signature> sig, const Term& left,
                                              const Term& right, const ActionFilter& b,
                                              const ExploreOptions& opts = {});

}  // namespace cpd
