#pragma once

#include <vector>

#include "cpd/signature.hpp"
#include "cpd/term.hpp"

namespace cpd {

/// Data environment (alpha, rho): a total valuation plus the variables written
/// by the transition that produced it.
struct Environment {
  Valuation alpha;
  std::vector<VarId> rho;  // sorted, unique

  /// Initial environment: declared initial values, rho = every variable.
  static Environment initial(const Signature& sig);

  friend bool operator==(const Environment&, const Environment&) = default;
};

struct Configuration {
  Term term;
  Environment env;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct Step {
  Action action;
  Configuration target;

  friend bool operator==(const Step&, const Step&) = default;
};

struct StepOptions {
  /// Build targets with the canonical constructors (source assumed canonical).
  bool canonical = false;
  /// Reject targets whose updated variables leave their declared domains.
  bool check_domains = true;
};

/// Termination option of a configuration.
bool terminates(const Term& t, const Valuation& alpha);
inline bool terminates(const Configuration& c) { return terminates(c.term, c.env.alpha); }

/// Every transition derivable from `c`, without duplicates, ordered by action
/// (channel name, senders, receivers) and then by target.
/// Throws ModelError if an update stores a value outside a variable's domain.
std::vector<Step> step(const Signature& sig, const Configuration& c, const StepOptions& opts = {});

/// Renaming that completes the controllable receives of a plant: each c?_n
/// with c controllable becomes c!?_n, in prefixes and in encapsulation sets.
/// Throws ModelError if `t` is not a plant term.
Term xi_rename(const Signature& sig, const Term& t);

/// Label map of the renaming, applied to a single transition label.
Action xi_label(const Signature& sig, const Action& a);

}  // namespace cpd
