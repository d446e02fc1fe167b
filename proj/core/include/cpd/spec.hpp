#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpd/expr.hpp"
#include "cpd/signature.hpp"
#include "cpd/term.hpp"

namespace cpd {

/// Data-based control requirement.
///  - event_implies:        a ⇒ φ       (a may only occur where φ holds)
///  - state_excludes_event: φ ⇒ ¬a      (no a-transition where φ holds)
///  - invariant:            φ           (φ holds in every reachable state)
struct Requirement {
  enum class Kind { event_implies, state_excludes_event, invariant };

  Kind kind = Kind::invariant;
  Action action;  // unused for invariants
  BoolExpr formula;

  static Requirement event_implies(Action a, BoolExpr phi) { return {Kind::event_implies, a, std::move(phi)}; }
  static Requirement state_excludes_event(BoolExpr phi, Action a) {
    return {Kind::state_excludes_event, a, std::move(phi)};
  }
  static Requirement invariant(BoolExpr phi) { return {Kind::invariant, Action{}, std::move(phi)}; }

  friend bool operator==(const Requirement& a, const Requirement& b) {
    return a.kind == b.kind && (a.kind == Kind::invariant || a.action == b.action) && a.formula == b.formula;
  }
};

std::string to_string(const Requirement& r, const Signature& sig);

/// A parsed `.cpd` file: declarations, named processes (references expanded),
/// the plant and optional supervisor, the encapsulation set of the supervised
/// composition, and the requirements.
struct SystemSpec {
  std::shared_ptr<const Signature> signature = std::make_shared<Signature>();
  std::map<std::string, Term> processes;
  std::vector<std::string> process_order;  // declaration order
  std::string plant;
  std::optional<std::string> supervisor;
  /// Declared encapsulation set; when absent the supervised composition blocks
  /// `incomplete(c, 2)` for every controllable channel c.
  std::optional<ActionSet> encapsulation;
  std::vector<Requirement> requirements;

  const Signature& sig() const { return *signature; }
  const Term& plant_term() const;
  /// Throws ModelError when no supervisor is declared.
  const Term& supervisor_term() const;
  ActionSet supervised_encapsulation() const;

  /// Adds or replaces a named process, keeping declaration order.
  void set_process(const std::string& name, Term t);

  friend bool operator==(const SystemSpec& a, const SystemSpec& b);
};

}  // namespace cpd
