#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cpd/expr.hpp"
#include "cpd/signature.hpp"

namespace cpd {

struct Assignment {
  VarId var = 0;
  std::string name;
  DataExpr expr;
};

/// Partial variable update attached to an action prefix. Sorted by variable,
/// each variable at most once.
class UpdateMap {
 public:
  UpdateMap() = default;
  explicit UpdateMap(std::vector<Assignment> assignments);  // throws on duplicates

  bool empty() const { return assignments_.empty(); }
  std::size_t size() const { return assignments_.size(); }
  const std::vector<Assignment>& assignments() const { return assignments_; }
  auto begin() const { return assignments_.begin(); }
  auto end() const { return assignments_.end(); }

 private:
  std::vector<Assignment> assignments_;
};

int compare(const UpdateMap& a, const UpdateMap& b);

enum class TermKind : std::uint8_t { deadlock, termination, prefix, guard, encap, alt, seq, star, par };

/// Process term. Immutable; copies share structure and carry a cached hash.
class Term {
 public:
  Term();  // deadlock

  static Term deadlock();
  static Term termination();
  static Term prefix(Action a, UpdateMap f, Term body);
  static Term guard(BoolExpr phi, Term body);
  static Term encap(ActionSet blocked, Term body);
  static Term alt(Term lhs, Term rhs);
  static Term seq(Term lhs, Term rhs);
  static Term star(Term body);
  static Term par(Term lhs, Term rhs);

  TermKind kind() const { return node_->kind; }
  const Action& action() const { return node_->action; }
  const UpdateMap& update() const { return node_->update; }
  const BoolExpr& condition() const { return node_->condition; }
  const ActionSet& blocked() const { return node_->blocked; }
  /// Operand of prefix, guard, encap and star.
  const Term& body() const { return *node_->lhs; }
  const Term& lhs() const { return *node_->lhs; }
  const Term& rhs() const { return *node_->rhs; }

  std::size_t hash() const { return node_->hash; }
  bool same_node(const Term& o) const { return node_ == o.node_; }
  bool is(TermKind k) const { return kind() == k; }

 private:
  struct Node {
    TermKind kind = TermKind::deadlock;
    std::size_t hash = 0;
    Action action;
    UpdateMap update;
    BoolExpr condition;
    ActionSet blocked;
    std::shared_ptr<const Term> lhs, rhs;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

int compare(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) {
  return a.same_node(b) || (a.hash() == b.hash() && compare(a, b) == 0);
}
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Surface syntax of a term (the `.cpd` notation).
std::string to_string(const Term& t, const Signature& sig);

// Canonical forms: Alt and Seq are flattened and right-nested, Alt summands
// sorted and deduplicated with 0 summands dropped, 1 removed as a Seq operand.
// Every rewrite preserves bisimilarity.
Term canonicalize(const Term& t);
/// Seq of two canonical terms, kept canonical.
Term canonical_seq(const Term& lhs, const Term& rhs);
Term canonical_alt(const Term& lhs, const Term& rhs);

struct Classification {
  bool ok = true;
  std::vector<std::string> offending;  // rendered offending subterms
  explicit operator bool() const { return ok; }
};

/// Plant grammar: prefixes restricted to c?_n[f] (c controllable) or
/// u!_m?_n[f] (u uncontrollable); every operator allowed.
Classification classify_plant(const Term& t, const Signature& sig);
/// Supervisor grammar: 1, c![].S with c controllable, S+S, phi->S, S*.
Classification classify_supervisor(const Term& t, const Signature& sig);

/// Variables read by guards and update expressions, plus updated variables.
std::set<VarId> free_variables(const Term& t);

/// Number of nodes in the term tree.
std::size_t term_size(const Term& t);

}  // namespace cpd
