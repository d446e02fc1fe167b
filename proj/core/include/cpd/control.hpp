#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpd/relations.hpp"
#include "cpd/spec.hpp"
#include "cpd/state_space.hpp"

namespace cpd {

/// Single-configuration satisfaction. The exclusion forms consult the
/// configuration's own steps.
bool satisfies(const Signature& sig, const Configuration& c, const Requirement& r);

/// Same check on an explored state, using the space's transition labels.
bool satisfies(const StateSpace& ss, StateId s, const Requirement& r);

struct RequirementViolation {
  StateId state = 0;
  std::size_t requirement = 0;  // index into the checked list
};

struct RequirementReport {
  bool holds = true;
  std::vector<RequirementViolation> violations;  // ordered by state
  /// Shortest trail to the violating state closest to the initial state,
  /// followed by the offending transition for event requirements.
  std::vector<Transition> trace;
  std::optional<RequirementViolation> first;

  explicit operator bool() const { return holds; }
};

/// Every reachable state of `ss` satisfies every requirement.
RequirementReport satisfies_globally(const StateSpace& ss, const std::vector<Requirement>& rs);

struct ControlOptions {
  ExploreOptions explore;
  /// Check requirements and nonblocking on the encapsulated composition
  /// (off: the raw parallel composition of plant and supervisor).
  bool encapsulated = true;
};

/// Root of the supervised plant, encapsulated with the spec's H.
Configuration supervised_plant(const SystemSpec& spec, bool encapsulated = true);

struct ControllabilityReport {
  RelationResult relation;
  StateSpace supervised;
  StateSpace plant;  // the renamed plant

  explicit operator bool() const { return relation.holds; }
};

/// Renamed plant: the plant's space with controllable receives completed.
StateSpace renamed_plant_space(const SystemSpec& spec, const ExploreOptions& opts = {});

/// The supervised plant is partially bisimilar to the renamed plant with
/// B = the uncontrollable actions.
ControllabilityReport check_controllability(const SystemSpec& spec, const ControlOptions& opts = {});

struct NonblockingReport {
  bool holds = true;
  std::vector<StateId> blocking;  // reachable, not coreachable
  std::vector<Transition> trace;  // into the first blocking state

  explicit operator bool() const { return holds; }
};

NonblockingReport check_nonblocking(const StateSpace& ss);

std::string render(const RequirementReport& r, const StateSpace& ss, const std::vector<Requirement>& rs);
std::string render(const NonblockingReport& r, const StateSpace& ss);
std::string render(const ControllabilityReport& r);
std::string render_trace(const StateSpace& ss, const std::vector<Transition>& trace);

std::string to_json(const RequirementReport& r, const StateSpace& ss, const std::vector<Requirement>& rs);
std::string to_json(const NonblockingReport& r, const StateSpace& ss);
std::string to_json(const ControllabilityReport& r);

}  // namespace cpd
