#include "cpd/sos.hpp"

#include <algorithm>
#include <sstream>

#include "cpd/error.hpp"

namespace cpd {

Environment Environment::initial(const Signature& sig) {
  Environment env;
  env.alpha = sig.initial_valuation();
  env.rho.resize(env.alpha.size());
  for (std::size_t i = 0; i < env.rho.size(); ++i) env.rho[i] = static_cast<VarId>(i);
  return env;
}

bool terminates(const Term& t, const Valuation& alpha) {
  switch (t.kind()) {
    case TermKind::deadlock:
    case TermKind::prefix: return false;
    case TermKind::termination:
    case TermKind::star: return true;
    case TermKind::alt: return terminates(t.lhs(), alpha) || terminates(t.rhs(), alpha);
    case TermKind::seq:
    case TermKind::par: return terminates(t.lhs(), alpha) && terminates(t.rhs(), alpha);
    case TermKind::guard: return eval_bool(alpha, t.condition()) && terminates(t.body(), alpha);
    case TermKind::encap: return terminates(t.body(), alpha);
  }
  return false;
}

namespace {

struct Derivation {
  Action action;
  Term target;
  Valuation alpha;
  std::vector<VarId> rho;
};

bool agree_on_overlap(const Derivation& l, const Derivation& r) {
  auto i = l.rho.begin();
  auto j = r.rho.begin();
  while (i != l.rho.end() && j != r.rho.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      if (l.alpha[*i] != r.alpha[*i]) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

class Deriver {
 public:
  explicit Deriver(bool canonical) : canonical_(canonical) {}

  void derive(const Term& t, const Valuation& alpha, std::vector<Derivation>& out) const {
    switch (t.kind()) {
      case TermKind::deadlock:
      case TermKind::termination: return;
      case TermKind::prefix: {
        Derivation d{t.action(), t.body(), alpha, {}};
        d.rho.reserve(t.update().size());
        for (const auto& as : t.update()) {
          d.alpha[as.var] = eval_data(alpha, as.expr);
          d.rho.push_back(as.var);
        }
        out.push_back(std::move(d));
        return;
      }
      case TermKind::alt:
        derive(t.lhs(), alpha, out);
        derive(t.rhs(), alpha, out);
        return;
      case TermKind::seq: {
        const std::size_t first = out.size();
        derive(t.lhs(), alpha, out);
        for (std::size_t i = first; i < out.size(); ++i) out[i].target = seq(out[i].target, t.rhs());
        if (terminates(t.lhs(), alpha)) derive(t.rhs(), alpha, out);
        return;
      }
      case TermKind::star: {
        const std::size_t first = out.size();
        derive(t.body(), alpha, out);
        for (std::size_t i = first; i < out.size(); ++i) out[i].target = seq(out[i].target, t);
        return;
      }
      case TermKind::guard:
        if (eval_bool(alpha, t.condition())) derive(t.body(), alpha, out);
        return;
      case TermKind::encap: {
        std::vector<Derivation> inner;
        derive(t.body(), alpha, inner);
        for (auto& d : inner) {
          if (t.blocked().contains(d.action)) continue;
          d.target = Term::encap(t.blocked(), std::move(d.target));
          out.push_back(std::move(d));
        }
        return;
      }
      case TermKind::par: derive_par(t, alpha, out); return;
    }
  }

 private:
  Term seq(const Term& a, const Term& b) const {
    return canonical_ ? canonical_seq(a, b) : Term::seq(a, b);
  }

  void derive_par(const Term& t, const Valuation& alpha, std::vector<Derivation>& out) const {
    std::vector<Derivation> left, right;
    derive(t.lhs(), alpha, left);
    derive(t.rhs(), alpha, right);
    // interleaving, including same-channel actions
    for (const auto& d : left) out.push_back(Derivation{d.action, Term::par(d.target, t.rhs()), d.alpha, d.rho});
    for (const auto& d : right) out.push_back(Derivation{d.action, Term::par(t.lhs(), d.target), d.alpha, d.rho});
    // synchronization on a common channel
    for (const auto& l : left) {
      for (const auto& r : right) {
        if (l.action.channel != r.action.channel) continue;
        if (!agree_on_overlap(l, r)) continue;
        Derivation d;
        d.action = Action{l.action.channel, l.action.senders + r.action.senders,
                          l.action.receivers + r.action.receivers};
        d.target = Term::par(l.target, r.target);
        d.alpha = l.alpha;
        for (VarId x : r.rho)
          if (!std::binary_search(l.rho.begin(), l.rho.end(), x)) d.alpha[x] = r.alpha[x];
        std::set_union(l.rho.begin(), l.rho.end(), r.rho.begin(), r.rho.end(), std::back_inserter(d.rho));
        out.push_back(std::move(d));
      }
    }
  }

  bool canonical_;
};

}  // namespace

std::vector<Step> step(const Signature& sig, const Configuration& c, const StepOptions& opts) {
  std::vector<Derivation> ds;
  Deriver(opts.canonical).derive(c.term, c.env.alpha, ds);

  std::vector<Step> steps;
  steps.reserve(ds.size());
  for (auto& d : ds) {
    if (opts.check_domains) {
      for (VarId x : d.rho) {
        const auto& decl = sig.variable(x);
        if (!decl.domain.contains(d.alpha[x])) {
          std::ostringstream os;
          os << "update stores " << d.alpha[x] << " into '" << decl.name << "' (domain "
             << decl.domain.render(decl.domain.lo) << ".." << decl.domain.render(decl.domain.hi)
             << ") on transition " << sig.render(d.action) << " from " << sig.render(c.env.alpha);
          throw ModelError(os.str());
        }
      }
    }
    steps.push_back(Step{d.action, Configuration{std::move(d.target), Environment{std::move(d.alpha), std::move(d.rho)}}});
  }

  std::sort(steps.begin(), steps.end(), [&](const Step& a, const Step& b) {
    if (a.action != b.action) return sig.action_less(a.action, b.action);
    if (int c = compare(a.target.term, b.target.term)) return c < 0;
    if (a.target.env.alpha != b.target.env.alpha) return a.target.env.alpha < b.target.env.alpha;
    return a.target.env.rho < b.target.env.rho;
  });
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

Action xi_label(const Signature& sig, const Action& a) {
  if (sig.controllable(a) && a.senders == 0) return Action{a.channel, 1, a.receivers};
  return a;
}

namespace {

ActionSet xi_rename_set(const Signature& sig, const ActionSet& h) {
  std::vector<Action> actions;
  for (const auto& a : h.actions()) {
    if (!sig.controllable(a)) actions.push_back(a);
    // Plant transitions on controllable channels never carry senders, so an
    // element c!_m?_n with m > 0 blocks nothing and is dropped.
    else if (a.senders == 0) actions.push_back(xi_label(sig, a));
  }
  std::vector<IncompletePattern> patterns;
  for (const auto& p : h.patterns()) {
    // c?_n is blocked iff n is not k; its renaming c!?_n has n+1 parties.
    if (sig.controllable(p.channel)) patterns.push_back(IncompletePattern{p.channel, p.parties + 1});
    else patterns.push_back(p);
  }
  return ActionSet(std::move(actions), std::move(patterns));
}

Term xi(const Signature& sig, const Term& t) {
  switch (t.kind()) {
    case TermKind::deadlock:
    case TermKind::termination: return t;
    case TermKind::prefix: return Term::prefix(xi_label(sig, t.action()), t.update(), xi(sig, t.body()));
    case TermKind::guard: return Term::guard(t.condition(), xi(sig, t.body()));
    case TermKind::encap: return Term::encap(xi_rename_set(sig, t.blocked()), xi(sig, t.body()));
    case TermKind::star: return Term::star(xi(sig, t.body()));
    case TermKind::alt: return Term::alt(xi(sig, t.lhs()), xi(sig, t.rhs()));
    case TermKind::seq: return Term::seq(xi(sig, t.lhs()), xi(sig, t.rhs()));
    case TermKind::par: return Term::par(xi(sig, t.lhs()), xi(sig, t.rhs()));
  }
  return t;
}

}  // namespace

Term xi_rename(const Signature& sig, const Term& t) {
  if (auto c = classify_plant(t, sig); !c) {
    std::string msg = "renaming applies to plant terms only:";
    for (const auto& o : c.offending) msg += "\n  " + o;
    throw ModelError(msg);
  }
  return xi(sig, t);
}

}  // namespace cpd
