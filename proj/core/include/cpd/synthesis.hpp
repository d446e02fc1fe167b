#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cpd/control.hpp"
#include "cpd/spec.hpp"
#include "cpd/state_space.hpp"

namespace cpd {

/// Guard-based supervisor (Σ_c φ_c -> c! . 1 + ψ -> 1)*.
struct SupervisorSpec {
  std::map<ChannelId, BoolExpr> guards;  // one per controllable channel
  BoolExpr termination_guard = BoolExpr::constant(true);
};

/// State-level outcome of the forbidden-state fixpoint on the renamed plant.
struct ControlMap {
  StateSpace plant;                             // renamed plant space E
  std::vector<bool> bad;
  std::vector<std::vector<ChannelId>> forbidden;  // per state, sorted; meaningful for good states
  std::vector<bool> supervised;                 // reachable under the map
  std::size_t iterations = 0;

  bool allowed(StateId s, ChannelId c) const;
  std::size_t bad_count() const;
  std::size_t supervised_count() const;
};

/// Forbidden-state fixpoint: invariant violations and uncontrollable
/// requirement violations seed BAD; controllable requirement violations are
/// forbidden (state, channel) pairs; BAD is closed under uncontrollable
/// predecessors and non-coreachability. Throws SynthesisError(no_supervisor)
/// when the initial state is bad.
ControlMap compute_control_map(StateSpace plant, const std::vector<Requirement>& rs);

/// Subgraph of `plant` reachable when controllable transitions from `s` on
/// channel c are kept iff allowed(s, c). Uncontrollable transitions are kept.
/// `origin` (if given) receives the plant state of every kept state.
StateSpace restrict_space(const StateSpace& plant, const std::function<bool(StateId, ChannelId)>& allowed,
                          std::vector<StateId>* origin = nullptr);

/// The supervised space induced by a control map.
StateSpace supervised_space(const ControlMap& map);

struct GuardStats {
  ChannelId channel = 0;
  std::size_t on = 0;   // care valuations where the channel is allowed
  std::size_t off = 0;  // care valuations where it is forbidden
  std::size_t cubes = 0;
};

struct SynthesisResult {
  SupervisorSpec supervisor;
  ControlMap map;
  std::vector<GuardStats> guard_stats;
};

struct SynthesisOptions {
  ExploreOptions explore;
};

/// Maximally permissive guard supervisor for the spec's plant and requirements.
/// Throws SynthesisError (no_supervisor, not_observer_complete) or
/// BudgetExceeded.
SynthesisResult synthesize(const SystemSpec& spec, const SynthesisOptions& opts = {});

/// Guards from a control map: two-level minimization of the allowed
/// valuations against the forbidden ones; other valuations are don't-cares.
SupervisorSpec extract_guards(const ControlMap& map, std::vector<GuardStats>* stats = nullptr);

/// Minimal sum-of-products over multi-valued literals separating `on` from
/// `off`. Throws ModelError if the sets intersect.
BoolExpr minimize_guard(const Signature& sig, const std::vector<Valuation>& on, const std::vector<Valuation>& off);

/// (Σ_c φ_c -> c! . 1 + ψ -> 1)*, channels in declaration order.
Term emit_supervisor(const Signature& sig, const SupervisorSpec& sup);

/// Copy of `spec` with `sup` declared as its supervisor under `name`.
SystemSpec with_supervisor(const SystemSpec& spec, const SupervisorSpec& sup, const std::string& name = "S");

struct VerificationReport {
  StateSpace supervised;
  RequirementReport requirements;
  ControllabilityReport controllability;
  NonblockingReport nonblocking;

  bool passed() const { return requirements.holds && controllability.relation.holds && nonblocking.holds; }
};

/// Requirements, controllability and nonblocking of the supervised plant.
VerificationReport verify(const SystemSpec& spec, const ControlOptions& opts = {});
VerificationReport verify_synthesis(const SystemSpec& spec, const SupervisorSpec& sup, const ControlOptions& opts = {});

std::string render(const SupervisorSpec& sup, const Signature& sig);
std::string render(const VerificationReport& r, const SystemSpec& spec);
std::string to_json(const SynthesisResult& result, const VerificationReport& verification, const SystemSpec& spec);

}  // namespace cpd
