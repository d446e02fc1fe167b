#include "cpd/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "cpd/error.hpp"
#include "report_json.hpp"

namespace cpd {

// ---------------------------------------------------------------- control map

bool ControlMap::allowed(StateId s, ChannelId c) const {
  if (bad[s]) return false;
  const auto& f = forbidden[s];
  return !std::binary_search(f.begin(), f.end(), c);
}

std::size_t ControlMap::bad_count() const { return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), true)); }

std::size_t ControlMap::supervised_count() const {
  return static_cast<std::size_t>(std::count(supervised.begin(), supervised.end(), true));
}

namespace {

bool violates_event(const Requirement& r, const Valuation& alpha) {
  const bool phi = eval_bool(alpha, r.formula);
  return r.kind == Requirement::Kind::event_implies ? !phi : phi;
}

}  // namespace

ControlMap compute_control_map(StateSpace plant, const std::vector<Requirement>& rs) {
  const Signature& sig = plant.sig();
  const std::size_t n = plant.size();
  ControlMap map;
  map.bad.assign(n, false);
  std::vector<std::set<ChannelId>> forbidden(n);

  for (StateId s = 0; s < n; ++s) {
    for (const auto& r : rs) {
      if (r.kind == Requirement::Kind::invariant) {
        if (!eval_bool(plant.alpha(s), r.formula)) map.bad[s] = true;
        continue;
      }
      if (!violates_event(r, plant.alpha(s))) continue;
      for (const auto& t : plant.out(s)) {
        if (t.action != r.action) continue;
        if (sig.controllable(t.action)) forbidden[s].insert(t.action.channel);
        else map.bad[s] = true;
      }
    }
  }

  const auto& ts = plant.transitions();
  bool changed = true;
  while (changed) {
    changed = false;
    ++map.iterations;

    // Uncontrollable backward closure.
    std::deque<StateId> work;
    for (StateId s = 0; s < n; ++s)
      if (map.bad[s]) work.push_back(s);
    while (!work.empty()) {
      const StateId s = work.front();
      work.pop_front();
      for (auto ti : plant.in(s)) {
        const auto& t = ts[ti];
        if (map.bad[t.source] || sig.controllable(t.action)) continue;
        map.bad[t.source] = true;
        work.push_back(t.source);
      }
    }

    // A channel leading into BAD is disabled as a whole.
    for (const auto& t : ts)
      if (!map.bad[t.source] && map.bad[t.target] && sig.controllable(t.action))
        forbidden[t.source].insert(t.action.channel);

    auto edge_ok = [&](const Transition& t) {
      if (map.bad[t.source] || map.bad[t.target]) return false;
      return !sig.controllable(t.action) || !forbidden[t.source].count(t.action.channel);
    };

    std::vector<bool> co(n, false);
    for (StateId s = 0; s < n; ++s)
      if (!map.bad[s] && plant.marked(s)) {
        co[s] = true;
        work.push_back(s);
      }
    while (!work.empty()) {
      const StateId s = work.front();
      work.pop_front();
      for (auto ti : plant.in(s)) {
        const auto& t = ts[ti];
        if (co[t.source] || !edge_ok(t)) continue;
        co[t.source] = true;
        work.push_back(t.source);
      }
    }
    for (StateId s = 0; s < n; ++s)
      if (!map.bad[s] && !co[s]) {
        map.bad[s] = true;
        changed = true;
      }
  }

  if (map.bad[plant.initial()]) {
    std::ostringstream os;
    os << "no supervisor exists: initial state " << sig.render(plant.alpha(plant.initial())) << " is bad ("
       << map.bad_count() << " of " << n << " states bad)";
    throw SynthesisError(SynthesisError::Kind::no_supervisor, os.str());
  }

  map.forbidden.resize(n);
  for (StateId s = 0; s < n; ++s) map.forbidden[s].assign(forbidden[s].begin(), forbidden[s].end());
  map.plant = std::move(plant);

  map.supervised.assign(n, false);
  std::deque<StateId> work{map.plant.initial()};
  map.supervised[map.plant.initial()] = true;
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    for (const auto& t : map.plant.out(s)) {
      if (map.supervised[t.target]) continue;
      if (sig.controllable(t.action) && !map.allowed(s, t.action.channel)) continue;
      map.supervised[t.target] = true;
      work.push_back(t.target);
    }
  }
  return map;
}

StateSpace restrict_space(const StateSpace& plant, const std::function<bool(StateId, ChannelId)>& allowed,
                          std::vector<StateId>* origin) {
  const Signature& sig = plant.sig();
  constexpr StateId kNone = ~StateId{0};
  std::vector<StateId> renum(plant.size(), kNone);
  std::vector<StateId> orig;
  std::vector<Configuration> states;
  std::vector<Transition> transitions;
  auto visit = [&](StateId s) {
    if (renum[s] == kNone) {
      renum[s] = static_cast<StateId>(orig.size());
      orig.push_back(s);
      states.push_back(plant.state(s));
    }
    return renum[s];
  };
  visit(plant.initial());
  for (std::size_t k = 0; k < orig.size(); ++k) {
    const StateId s = orig[k];
    for (const auto& t : plant.out(s)) {
      if (sig.controllable(t.action) && !allowed(s, t.action.channel)) continue;
      const StateId dst = visit(t.target);
      transitions.push_back(Transition{static_cast<StateId>(k), t.action, dst});
    }
  }
  if (origin) *origin = orig;
  return StateSpace(plant.signature(), std::move(states), std::move(transitions), 0);
}

StateSpace supervised_space(const ControlMap& map) {
  return restrict_space(map.plant, [&](StateId s, ChannelId c) { return map.allowed(s, c); });
}

// ---------------------------------------------------------------- guards

namespace {

// Multi-valued cube: per variable, the admitted domain offsets.
using Cube = std::vector<std::vector<bool>>;

struct CubeSpace {
  std::vector<Value> lo;
  std::vector<std::size_t> size;

  explicit CubeSpace(const Signature& sig) {
    for (const auto& v : sig.variables()) {
      lo.push_back(v.domain.lo);
      size.push_back(static_cast<std::size_t>(v.domain.hi - v.domain.lo + 1));
    }
  }

  bool contains(const Cube& c, const Valuation& a) const {
    for (std::size_t v = 0; v < c.size(); ++v)
      if (!c[v][static_cast<std::size_t>(a[v] - lo[v])]) return false;
    return true;
  }
  bool hits(const Cube& c, const std::vector<Valuation>& set) const {
    return std::any_of(set.begin(), set.end(), [&](const Valuation& a) { return contains(c, a); });
  }
  static bool full(const std::vector<bool>& lit) { return std::all_of(lit.begin(), lit.end(), [](bool b) { return b; }); }
  static std::size_t literals(const Cube& c) {
    return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](const auto& lit) { return !full(lit); }));
  }

  Cube expand(const Valuation& minterm, const std::vector<std::size_t>& order, const std::vector<Valuation>& off) const {
    Cube c(lo.size());
    for (std::size_t v = 0; v < lo.size(); ++v) {
      c[v].assign(size[v], false);
      c[v][static_cast<std::size_t>(minterm[v] - lo[v])] = true;
    }
    // First drop whole variables, then widen the remaining literals value by value.
    for (auto v : order) {
      auto saved = c[v];
      c[v].assign(size[v], true);
      if (hits(c, off)) c[v] = std::move(saved);
    }
    for (auto v : order) {
      for (std::size_t k = 0; k < size[v]; ++k) {
        if (c[v][k]) continue;
        c[v][k] = true;
        if (hits(c, off)) c[v][k] = false;
      }
    }
    return c;
  }
};

BoolExpr literal_expr(const VariableDecl& decl, VarId id, Value lo, const std::vector<bool>& lit) {
  auto var = DataExpr::variable(id, decl.name);
  auto value = [&](std::size_t k) {
    const Value v = lo + static_cast<Value>(k);
    return decl.domain.is_enum() ? DataExpr::literal(v, decl.domain.render(v)) : DataExpr::literal(v);
  };
  std::vector<std::size_t> in, out;
  for (std::size_t k = 0; k < lit.size(); ++k) (lit[k] ? in : out).push_back(k);
  std::optional<BoolExpr> e;
  if (in.size() <= out.size()) {
    for (auto k : in) {
      auto atom = BoolExpr::compare(CmpOp::eq, var, value(k));
      e = e ? BoolExpr::disjunction(*e, atom) : atom;
    }
  } else {
    for (auto k : out) {
      auto atom = BoolExpr::compare(CmpOp::ne, var, value(k));
      e = e ? BoolExpr::conjunction(*e, atom) : atom;
    }
  }
  return *e;
}

}  // namespace

BoolExpr minimize_guard(const Signature& sig, const std::vector<Valuation>& on_in, const std::vector<Valuation>& off_in) {
  auto on = on_in, off = off_in;
  std::sort(on.begin(), on.end());
  on.erase(std::unique(on.begin(), on.end()), on.end());
  std::sort(off.begin(), off.end());
  off.erase(std::unique(off.begin(), off.end()), off.end());
  for (const auto& a : on)
    if (std::binary_search(off.begin(), off.end(), a))
      throw ModelError("guard minimization: valuation " + sig.render(a) + " is both allowed and forbidden");
  if (on.empty()) return BoolExpr::constant(false);
  if (off.empty()) return BoolExpr::constant(true);

  const CubeSpace cs(sig);
  const std::size_t nv = sig.variables().size();

  // Candidate cubes from every minterm under every rotation of the variable order.
  std::vector<Cube> candidates;
  for (const auto& m : on) {
    for (std::size_t r = 0; r < std::max<std::size_t>(nv, 1); ++r) {
      std::vector<std::size_t> order(nv);
      for (std::size_t v = 0; v < nv; ++v) order[v] = (v + r) % nv;
      candidates.push_back(cs.expand(m, order, off));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<std::vector<std::size_t>> covers(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (std::size_t k = 0; k < on.size(); ++k)
      if (cs.contains(candidates[c], on[k])) covers[c].push_back(k);

  // Greedy cover: most new minterms, then fewest literals.
  std::vector<bool> covered(on.size(), false);
  std::size_t remaining = on.size();
  std::vector<std::size_t> chosen;
  while (remaining > 0) {
    std::size_t best = candidates.size(), best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::size_t gain = 0;
      for (auto k : covers[c]) gain += covered[k] ? 0 : 1;
      if (gain == 0) continue;
      if (best == candidates.size() || gain > best_gain ||
          (gain == best_gain && CubeSpace::literals(candidates[c]) < CubeSpace::literals(candidates[best]))) {
        best = c;
        best_gain = gain;
      }
    }
    chosen.push_back(best);
    for (auto k : covers[best])
      if (!covered[k]) {
        covered[k] = true;
        --remaining;
      }
  }
  // Drop cubes made redundant by later picks.
  for (std::size_t i = chosen.size(); i-- > 0;) {
    std::vector<std::size_t> count(on.size(), 0);
    for (std::size_t j = 0; j < chosen.size(); ++j)
      if (j != i)
        for (auto k : covers[chosen[j]]) ++count[k];
    if (std::all_of(covers[chosen[i]].begin(), covers[chosen[i]].end(), [&](std::size_t k) { return count[k] > 0; }))
      chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(i));
  }

  std::optional<BoolExpr> result;
  for (auto c : chosen) {
    std::optional<BoolExpr> term;
    for (VarId v = 0; v < nv; ++v) {
      const auto& lit = candidates[c][v];
      if (CubeSpace::full(lit)) continue;
      auto e = literal_expr(sig.variable(v), v, cs.lo[v], lit);
      term = term ? BoolExpr::conjunction(*term, e) : e;
    }
    if (!term) return BoolExpr::constant(true);
    result = result ? BoolExpr::disjunction(*result, *term) : *term;
  }
  return *result;
}

SupervisorSpec extract_guards(const ControlMap& map, std::vector<GuardStats>* stats) {
  const StateSpace& e = map.plant;
  const Signature& sig = e.sig();
  SupervisorSpec sup;
  for (ChannelId c = 0; c < sig.channels().size(); ++c) {
    if (!sig.controllable(c)) continue;
    // valuation -> (verdict, witness state)
    std::map<Valuation, std::pair<bool, StateId>> care;
    for (StateId s = 0; s < e.size(); ++s) {
      if (!map.supervised[s]) continue;
      const auto out = e.out(s);
      if (std::none_of(out.begin(), out.end(), [&](const Transition& t) { return t.action.channel == c; })) continue;
      const bool ok = map.allowed(s, c);
      auto [it, fresh] = care.try_emplace(e.alpha(s), ok, s);
      if (!fresh && it->second.first != ok) {
        std::ostringstream os;
        const StateId a = ok ? s : it->second.second, b = ok ? it->second.second : s;
        os << "plant is not observer-complete: states " << a << " and " << b << " share valuation "
           << sig.render(e.alpha(s)) << " but " << sig.channel(c).name << " is allowed in " << a
           << " and forbidden in " << b;
        throw SynthesisError(SynthesisError::Kind::not_observer_complete, os.str());
      }
    }
    std::vector<Valuation> on, off;
    for (const auto& [alpha, verdict] : care) (verdict.first ? on : off).push_back(alpha);
    BoolExpr guard = minimize_guard(sig, on, off);
    if (stats) {
      GuardStats g{c, on.size(), off.size(), 0};
      // count top-level disjuncts
      std::size_t cubes = 0;
      std::vector<BoolExpr> stack{guard};
      while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        if (x.kind() == BoolExpr::Kind::disjunction) {
          stack.push_back(x.lhs());
          stack.push_back(x.rhs());
        } else if (!x.is_false()) {
          ++cubes;
        }
      }
      g.cubes = cubes;
      stats->push_back(g);
    }
    sup.guards.emplace(c, std::move(guard));
  }
  return sup;
}

SynthesisResult synthesize(const SystemSpec& spec, const SynthesisOptions& opts) {
  SynthesisResult result;
  result.map = compute_control_map(renamed_plant_space(spec, opts.explore), spec.requirements);
  result.supervisor = extract_guards(result.map, &result.guard_stats);
  return result;
}

Term emit_supervisor(const Signature& sig, const SupervisorSpec& sup) {
  std::optional<Term> body;
  auto add = [&](Term t) { body = body ? Term::alt(*body, t) : t; };
  for (ChannelId c = 0; c < sig.channels().size(); ++c) {
    if (!sig.controllable(c)) continue;
    auto it = sup.guards.find(c);
    const BoolExpr guard = it == sup.guards.end() ? BoolExpr::constant(false) : it->second;
    Term event = Term::prefix(Action{c, 1, 0}, UpdateMap{}, Term::termination());
    add(guard.is_true() ? event : Term::guard(guard, event));
  }
  add(sup.termination_guard.is_true() ? Term::termination() : Term::guard(sup.termination_guard, Term::termination()));
  return Term::star(*body);
}

SystemSpec with_supervisor(const SystemSpec& spec, const SupervisorSpec& sup, const std::string& name) {
  SystemSpec out = spec;
  std::string chosen = name;
  for (int k = 2; out.processes.count(chosen) && chosen != spec.supervisor.value_or(""); ++k)
    chosen = name + std::to_string(k);
  out.set_process(chosen, emit_supervisor(spec.sig(), sup));
  out.supervisor = chosen;
  return out;
}

VerificationReport verify(const SystemSpec& spec, const ControlOptions& opts) {
  VerificationReport r;
  r.controllability = check_controllability(spec, opts);
  r.supervised = opts.encapsulated ? r.controllability.supervised
                                   : explore(spec.signature, supervised_plant(spec, false), opts.explore);
  r.requirements = satisfies_globally(r.supervised, spec.requirements);
  r.nonblocking = check_nonblocking(r.supervised);
  return r;
}

VerificationReport verify_synthesis(const SystemSpec& spec, const SupervisorSpec& sup, const ControlOptions& opts) {
  return verify(with_supervisor(spec, sup), opts);
}

std::string render(const SupervisorSpec& sup, const Signature& sig) {
  std::ostringstream os;
  for (const auto& [c, g] : sup.guards) os << "  " << sig.channel(c).name << ": " << to_string(g) << '\n';
  os << "  termination: " << to_string(sup.termination_guard) << '\n';
  return os.str();
}

std::string render(const VerificationReport& r, const SystemSpec& spec) {
  return render(r.requirements, r.supervised, spec.requirements) + render(r.controllability) +
         render(r.nonblocking, r.supervised);
}

std::string to_json(const SynthesisResult& result, const VerificationReport& verification, const SystemSpec& spec) {
  const Signature& sig = spec.sig();
  detail::json guards = detail::json::array();
  for (const auto& g : result.guard_stats) {
    guards.push_back({{"channel", sig.channel(g.channel).name},
                      {"guard", to_string(result.supervisor.guards.at(g.channel))},
                      {"allowed_valuations", g.on},
                      {"forbidden_valuations", g.off},
                      {"cubes", g.cubes}});
  }
  detail::json j{{"guards", guards},
                 {"termination_guard", to_string(result.supervisor.termination_guard)},
                 {"plant_states", result.map.plant.size()},
                 {"bad_states", result.map.bad_count()},
                 {"supervised_states", result.map.supervised_count()},
                 {"iterations", result.map.iterations}};
  j["verification"] = {{"requirements", verification.requirements.holds},
                       {"controllability", verification.controllability.relation.holds},
                       {"nonblocking", verification.nonblocking.holds},
                       {"passed", verification.passed()}};
  return j.dump(2) + "\n";
}

}  // namespace cpd
