#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpd/signature.hpp"
#include "cpd/sos.hpp"

namespace cpd {

using StateId = std::uint32_t;

struct Transition {
  StateId source = 0;
  Action action;
  StateId target = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Explored reachable graph. States are numbered in BFS order; outgoing
/// transitions of a state are contiguous and ordered by action.
class StateSpace {
 public:
  StateSpace() = default;
  StateSpace(std::shared_ptr<const Signature> sig, std::vector<Configuration> states,
             std::vector<Transition> transitions, StateId initial);

  const Signature& sig() const { return *sig_; }
  std::shared_ptr<const Signature> signature() const { return sig_; }
  std::size_t size() const { return states_.size(); }
  StateId initial() const { return initial_; }
  const Configuration& state(StateId s) const { return states_.at(s); }
  const std::vector<Configuration>& states() const { return states_; }
  const Valuation& alpha(StateId s) const { return states_[s].env.alpha; }
  bool marked(StateId s) const { return marked_[s]; }
  std::size_t marked_count() const;

  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Outgoing transitions of `s`.
  std::span<const Transition> out(StateId s) const {
    return {transitions_.data() + offsets_[s], transitions_.data() + offsets_[s + 1]};
  }
  /// Incoming transitions (sources) of `s`, as indices into transitions().
  const std::vector<std::uint32_t>& in(StateId s) const { return incoming_[s]; }

  /// Same graph with each label passed through `f`.
  template <class F>
  StateSpace relabeled(F&& f) const {
    auto ts = transitions_;
    for (auto& t : ts) t.action = f(t.action);
    return StateSpace(sig_, states_, std::move(ts), initial_);
  }

 private:
  std::shared_ptr<const Signature> sig_;
  std::vector<Configuration> states_;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::uint32_t>> incoming_;
  std::vector<bool> marked_;
  StateId initial_ = 0;
};

struct ExploreOptions {
  std::size_t budget = 1'000'000;
  /// Keep the just-updated set rho in state identity (off: term and alpha only).
  bool rho_in_identity = false;
};

/// Breadth-first closure of the transition relation from `root`. Terms are
/// canonicalized. Throws BudgetExceeded instead of truncating.
StateSpace explore(std::shared_ptr<const Signature> sig, const Configuration& root, const ExploreOptions& opts = {});

/// States from which a marked state is reachable.
std::vector<bool> coreachable(const StateSpace& ss);
/// States reachable from the initial state.
std::vector<bool> reachable(const StateSpace& ss);

/// Shortest action trail from the initial state to `target` (empty if target is
/// initial, nullopt if unreachable).
std::optional<std::vector<Transition>> shortest_trace(const StateSpace& ss, StateId target);

/// Semantic counterpart of xi_rename: completes the controllable receives on
/// every transition label.
StateSpace xi_relabel(const StateSpace& ss);

enum class ExportFormat { dot, json };
std::string export_space(const StateSpace& ss, ExportFormat format);

}  // namespace cpd
