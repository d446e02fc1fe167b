#include "cpd/term.hpp"

#include <algorithm>

#include "cpd/error.hpp"

namespace cpd {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int cmp3(auto a, auto b) { return a < b ? -1 : (b < a ? 1 : 0); }

std::size_t hash_action(const Action& a) {
  return mix(mix(a.channel, a.senders), a.receivers);
}

std::size_t hash_update(const UpdateMap& f) {
  std::size_t h = 77;
  for (const auto& as : f) h = mix(mix(h, as.var), as.expr.hash());
  return h;
}

std::size_t hash_set(const ActionSet& s) {
  std::size_t h = 99;
  for (const auto& a : s.actions()) h = mix(h, hash_action(a));
  for (const auto& p : s.patterns()) h = mix(mix(h, p.channel), p.parties + 1000);
  return h;
}

}  // namespace

UpdateMap::UpdateMap(std::vector<Assignment> assignments) : assignments_(std::move(assignments)) {
  std::stable_sort(assignments_.begin(), assignments_.end(),
                   [](const Assignment& a, const Assignment& b) { return a.var < b.var; });
  for (std::size_t i = 1; i < assignments_.size(); ++i)
    if (assignments_[i].var == assignments_[i - 1].var)
      throw ModelError("variable '" + assignments_[i].name + "' updated twice in one map");
}

int compare(const UpdateMap& a, const UpdateMap& b) {
  if (int c = cmp3(a.size(), b.size())) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.assignments()[i];
    const auto& y = b.assignments()[i];
    if (int c = cmp3(x.var, y.var)) return c;
    if (int c = compare(x.expr, y.expr)) return c;
  }
  return 0;
}

Term::Term() : Term(deadlock()) {}

Term Term::deadlock() {
  static const Term t = [] {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::deadlock;
    n->hash = 0x0dead;
    return Term(std::move(n));
  }();
  return t;
}

Term Term::termination() {
  static const Term t = [] {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::termination;
    n->hash = 0x1111;
    return Term(std::move(n));
  }();
  return t;
}

Term Term::prefix(Action a, UpdateMap f, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::prefix;
  n->hash = mix(mix(mix(3, hash_action(a)), hash_update(f)), body.hash());
  n->action = a;
  n->update = std::move(f);
  n->lhs = std::make_shared<const Term>(std::move(body));
  return Term(std::move(n));
}

Term Term::guard(BoolExpr phi, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::guard;
  n->hash = mix(mix(4, phi.hash()), body.hash());
  n->condition = std::move(phi);
  n->lhs = std::make_shared<const Term>(std::move(body));
  return Term(std::move(n));
}

Term Term::encap(ActionSet blocked, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::encap;
  n->hash = mix(mix(5, hash_set(blocked)), body.hash());
  n->blocked = std::move(blocked);
  n->lhs = std::make_shared<const Term>(std::move(body));
  return Term(std::move(n));
}

namespace {
template <class Node>
std::shared_ptr<Node> make_binary(TermKind k, Term lhs, Term rhs) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->hash = mix(mix(static_cast<std::size_t>(k) * 31 + 7, lhs.hash()), rhs.hash());
  n->lhs = std::make_shared<const Term>(std::move(lhs));
  n->rhs = std::make_shared<const Term>(std::move(rhs));
  return n;
}
}  // namespace

Term Term::alt(Term lhs, Term rhs) { return Term(make_binary<Node>(TermKind::alt, std::move(lhs), std::move(rhs))); }
Term Term::seq(Term lhs, Term rhs) { return Term(make_binary<Node>(TermKind::seq, std::move(lhs), std::move(rhs))); }
Term Term::par(Term lhs, Term rhs) { return Term(make_binary<Node>(TermKind::par, std::move(lhs), std::move(rhs))); }

Term Term::star(Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::star;
  n->hash = mix(8, body.hash());
  n->lhs = std::make_shared<const Term>(std::move(body));
  return Term(std::move(n));
}

int compare(const Term& a, const Term& b) {
  if (a.same_node(b)) return 0;
  if (int c = cmp3(a.kind(), b.kind())) return c;
  // Hash first: cheap and still a total order together with the structural tie-break.
  if (int c = cmp3(a.hash(), b.hash())) return c;
  switch (a.kind()) {
    case TermKind::deadlock:
    case TermKind::termination: return 0;
    case TermKind::prefix:
      if (int c = cmp3(a.action(), b.action())) return c;
      if (int c = compare(a.update(), b.update())) return c;
      return compare(a.body(), b.body());
    case TermKind::guard:
      if (int c = compare(a.condition(), b.condition())) return c;
      return compare(a.body(), b.body());
    case TermKind::encap:
      if (int c = cmp3(a.blocked(), b.blocked())) return c;
      return compare(a.body(), b.body());
    case TermKind::star: return compare(a.body(), b.body());
    case TermKind::alt:
    case TermKind::seq:
    case TermKind::par:
      if (int c = compare(a.lhs(), b.lhs())) return c;
      return compare(a.rhs(), b.rhs());
  }
  return 0;
}

// ---------------------------------------------------------------- canonical forms

Term canonical_seq(const Term& lhs, const Term& rhs) {
  if (lhs.is(TermKind::termination)) return rhs;
  if (rhs.is(TermKind::termination)) return lhs;
  if (lhs.is(TermKind::seq)) return Term::seq(lhs.lhs(), canonical_seq(lhs.rhs(), rhs));
  return Term::seq(lhs, rhs);
}

namespace {
void collect_summands(const Term& t, std::vector<Term>& out) {
  if (t.is(TermKind::alt)) {
    collect_summands(t.lhs(), out);
    collect_summands(t.rhs(), out);
  } else if (!t.is(TermKind::deadlock)) {
    out.push_back(t);
  }
}
}  // namespace

Term canonical_alt(const Term& lhs, const Term& rhs) {
  std::vector<Term> summands;
  collect_summands(lhs, summands);
  collect_summands(rhs, summands);
  std::sort(summands.begin(), summands.end());
  summands.erase(std::unique(summands.begin(), summands.end()), summands.end());
  if (summands.empty()) return Term::deadlock();
  Term acc = summands.back();
  for (auto it = summands.rbegin() + 1; it != summands.rend(); ++it) acc = Term::alt(*it, acc);
  return acc;
}

Term canonicalize(const Term& t) {
  switch (t.kind()) {
    case TermKind::deadlock:
    case TermKind::termination: return t;
    case TermKind::prefix: return Term::prefix(t.action(), t.update(), canonicalize(t.body()));
    case TermKind::guard: return Term::guard(t.condition(), canonicalize(t.body()));
    case TermKind::encap: return Term::encap(t.blocked(), canonicalize(t.body()));
    case TermKind::star: return Term::star(canonicalize(t.body()));
    case TermKind::par: return Term::par(canonicalize(t.lhs()), canonicalize(t.rhs()));
    case TermKind::seq: return canonical_seq(canonicalize(t.lhs()), canonicalize(t.rhs()));
    case TermKind::alt: return canonical_alt(canonicalize(t.lhs()), canonicalize(t.rhs()));
  }
  return t;
}

// ---------------------------------------------------------------- classifiers

namespace {

void classify(const Term& t, const Signature& sig, bool supervisor, Classification& out) {
  auto reject = [&](const std::string& why) {
    out.ok = false;
    out.offending.push_back(to_string(t, sig) + "  (" + why + ")");
  };
  switch (t.kind()) {
    case TermKind::deadlock:
      if (supervisor) reject("deadlock is not a supervisor term");
      return;
    case TermKind::termination: return;
    case TermKind::prefix: {
      const Action& a = t.action();
      if (supervisor) {
        if (!sig.controllable(a)) reject("supervisor prefix on an uncontrollable channel");
        else if (a.senders != 1 || a.receivers != 0) reject("supervisor prefix must be c!");
        else if (!t.update().empty()) reject("supervisor prefix updates variables");
      } else if (sig.controllable(a) && (a.senders != 0 || a.receivers == 0)) {
        reject("plant may only receive on a controllable channel");
      } else if (a.senders + a.receivers == 0) {
        reject("action without parties");
      }
      classify(t.body(), sig, supervisor, out);
      return;
    }
    case TermKind::guard:
    case TermKind::star: classify(t.body(), sig, supervisor, out); return;
    case TermKind::encap:
      if (supervisor) {
        reject("encapsulation is not a supervisor term");
        return;
      }
      classify(t.body(), sig, supervisor, out);
      return;
    case TermKind::alt:
      classify(t.lhs(), sig, supervisor, out);
      classify(t.rhs(), sig, supervisor, out);
      return;
    case TermKind::seq:
    case TermKind::par:
      if (supervisor) {
        reject(t.is(TermKind::seq) ? "sequential composition is not a supervisor term"
                                   : "parallel composition is not a supervisor term");
        return;
      }
      classify(t.lhs(), sig, supervisor, out);
      classify(t.rhs(), sig, supervisor, out);
      return;
  }
}

void collect_free(const Term& t, std::set<VarId>& out) {
  switch (t.kind()) {
    case TermKind::deadlock:
    case TermKind::termination: return;
    case TermKind::prefix:
      for (const auto& as : t.update()) {
        out.insert(as.var);
        collect_variables(as.expr, out);
      }
      collect_free(t.body(), out);
      return;
    case TermKind::guard:
      collect_variables(t.condition(), out);
      collect_free(t.body(), out);
      return;
    case TermKind::encap:
    case TermKind::star: collect_free(t.body(), out); return;
    default:
      collect_free(t.lhs(), out);
      collect_free(t.rhs(), out);
  }
}

}  // namespace

Classification classify_plant(const Term& t, const Signature& sig) {
  Classification c;
  classify(t, sig, false, c);
  return c;
}

Classification classify_supervisor(const Term& t, const Signature& sig) {
  Classification c;
  classify(t, sig, true, c);
  return c;
}

std::set<VarId> free_variables(const Term& t) {
  std::set<VarId> out;
  collect_free(t, out);
  return out;
}

std::size_t term_size(const Term& t) {
  switch (t.kind()) {
    case TermKind::deadlock:
    case TermKind::termination: return 1;
    case TermKind::prefix:
    case TermKind::guard:
    case TermKind::encap:
    case TermKind::star: return 1 + term_size(t.body());
    default: return 1 + term_size(t.lhs()) + term_size(t.rhs());
  }
}

}  // namespace cpd
