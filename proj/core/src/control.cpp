#include "cpd/control.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <sstream>
#include <tuple>

#include "report_json.hpp"

namespace cpd {

namespace {

bool excludes(bool phi_holds, bool has_step) { return !phi_holds || !has_step; }

}  // namespace

bool satisfies(const Signature& sig, const Configuration& c, const Requirement& r) {
  const bool phi = eval_bool(c.env.alpha, r.formula);
  if (r.kind == Requirement::Kind::invariant) return phi;
  auto has_step = [&] {
    for (const auto& s : step(sig, c))
      if (s.action == r.action) return true;
    return false;
  };
  // a => phi is the exclusion !phi => not a
  if (r.kind == Requirement::Kind::event_implies) return excludes(!phi, has_step());
  return excludes(phi, has_step());
}

bool satisfies(const StateSpace& ss, StateId s, const Requirement& r) {
  const bool phi = eval_bool(ss.alpha(s), r.formula);
  if (r.kind == Requirement::Kind::invariant) return phi;
  const auto out = ss.out(s);
  const bool has_step =
      std::any_of(out.begin(), out.end(), [&](const Transition& t) { return t.action == r.action; });
  if (r.kind == Requirement::Kind::event_implies) return excludes(!phi, has_step);
  return excludes(phi, has_step);
}

RequirementReport satisfies_globally(const StateSpace& ss, const std::vector<Requirement>& rs) {
  RequirementReport report;
  const auto seen = reachable(ss);
  for (StateId s = 0; s < ss.size(); ++s) {
    if (!seen[s]) continue;
    for (std::size_t k = 0; k < rs.size(); ++k)
      if (!satisfies(ss, s, rs[k])) report.violations.push_back({s, k});
  }
  if (report.violations.empty()) return report;
  report.holds = false;

  // BFS order: the violating state of least depth.
  std::vector<std::size_t> depth(ss.size(), SIZE_MAX);
  std::deque<StateId> work{ss.initial()};
  depth[ss.initial()] = 0;
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    for (const auto& t : ss.out(s))
      if (depth[t.target] == SIZE_MAX) {
        depth[t.target] = depth[s] + 1;
        work.push_back(t.target);
      }
  }
  auto best = std::min_element(report.violations.begin(), report.violations.end(),
                               [&](const auto& a, const auto& b) {
                                 return std::tie(depth[a.state], a.state, a.requirement) <
                                        std::tie(depth[b.state], b.state, b.requirement);
                               });
  report.first = *best;
  report.trace = *shortest_trace(ss, best->state);
  const Requirement& r = rs[best->requirement];
  if (r.kind != Requirement::Kind::invariant) {
    for (const auto& t : ss.out(best->state))
      if (t.action == r.action) {
        report.trace.push_back(t);
        break;
      }
  }
  return report;
}

Configuration supervised_plant(const SystemSpec& spec, bool encapsulated) {
  Term composed = Term::par(spec.plant_term(), spec.supervisor_term());
  if (encapsulated) composed = Term::encap(spec.supervised_encapsulation(), composed);
  return Configuration{composed, Environment::initial(spec.sig())};
}

StateSpace renamed_plant_space(const SystemSpec& spec, const ExploreOptions& opts) {
  return xi_relabel(explore(spec.signature, Configuration{spec.plant_term(), Environment::initial(spec.sig())}, opts));
}

ControllabilityReport check_controllability(const SystemSpec& spec, const ControlOptions& opts) {
  ControllabilityReport report;
  report.supervised = explore(spec.signature, supervised_plant(spec, true), opts.explore);
  report.plant = renamed_plant_space(spec, opts.explore);
  report.relation = partial_bisim(report.supervised, report.plant, ActionFilter::uncontrollable());
  return report;
}

NonblockingReport check_nonblocking(const StateSpace& ss) {
  NonblockingReport report;
  const auto seen = reachable(ss);
  const auto co = coreachable(ss);
  for (StateId s = 0; s < ss.size(); ++s)
    if (seen[s] && !co[s]) report.blocking.push_back(s);
  if (report.blocking.empty()) return report;
  report.holds = false;
  // Nearest blocking state.
  std::optional<std::vector<Transition>> shortest;
  for (StateId s : report.blocking) {
    auto t = shortest_trace(ss, s);
    if (t && (!shortest || t->size() < shortest->size())) shortest = std::move(t);
  }
  report.trace = std::move(*shortest);
  return report;
}

std::string render_trace(const StateSpace& ss, const std::vector<Transition>& trace) {
  const Signature& sig = ss.sig();
  std::ostringstream os;
  os << "  " << ss.initial() << ' ' << sig.render(ss.alpha(ss.initial())) << '\n';
  for (const auto& t : trace)
    os << "  --" << sig.render(t.action) << "--> " << t.target << ' ' << sig.render(ss.alpha(t.target)) << '\n';
  return os.str();
}

std::string render(const RequirementReport& r, const StateSpace& ss, const std::vector<Requirement>& rs) {
  std::ostringstream os;
  if (r.holds) {
    os << "requirements: pass (" << rs.size() << " requirement(s), " << ss.size() << " states)\n";
    return os.str();
  }
  os << "requirements: FAIL (" << r.violations.size() << " violation(s))\n";
  const std::size_t shown = std::min<std::size_t>(r.violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& v = r.violations[i];
    os << "  state " << v.state << ' ' << ss.sig().render(ss.alpha(v.state)) << " violates "
       << to_string(rs[v.requirement], ss.sig()) << '\n';
  }
  if (shown < r.violations.size()) os << "  ... " << r.violations.size() - shown << " more\n";
  os << "shortest violating trace (" << to_string(rs[r.first->requirement], ss.sig()) << "):\n"
     << render_trace(ss, r.trace);
  return os.str();
}

std::string render(const NonblockingReport& r, const StateSpace& ss) {
  std::ostringstream os;
  if (r.holds) {
    os << "nonblocking: pass (" << ss.size() << " states, " << ss.marked_count() << " marked)\n";
    return os.str();
  }
  os << "nonblocking: FAIL (" << r.blocking.size() << " blocking state(s))\n";
  os << "trace into blocking state " << r.blocking.front() << ":\n" << render_trace(ss, r.trace);
  return os.str();
}

std::string render(const ControllabilityReport& r) {
  std::ostringstream os;
  if (r.relation.holds) {
    os << "controllability: pass (supervised " << r.supervised.size() << " states, plant " << r.plant.size()
       << " states)\n";
    return os.str();
  }
  os << "controllability: FAIL (supervised plant is not partially bisimilar to the plant)\n"
     << render_counterexample(r.supervised, r.plant, *r.relation.counterexample);
  return os.str();
}

std::string to_json(const RequirementReport& r, const StateSpace& ss, const std::vector<Requirement>& rs) {
  detail::json j{{"check", "requirements"}, {"holds", r.holds}};
  detail::json vs = detail::json::array();
  for (const auto& v : r.violations)
    vs.push_back({{"state", v.state},
                  {"requirement", to_string(rs[v.requirement], ss.sig())},
                  {"alpha", detail::valuation_json(ss.sig(), ss.alpha(v.state))}});
  j["violations"] = vs;
  if (!r.holds) j["trace"] = detail::trace_json(ss, r.trace);
  return j.dump(2) + "\n";
}

std::string to_json(const NonblockingReport& r, const StateSpace& ss) {
  detail::json j{{"check", "nonblocking"}, {"holds", r.holds}, {"states", ss.size()}, {"marked", ss.marked_count()}};
  j["blocking"] = r.blocking;
  if (!r.holds) j["trace"] = detail::trace_json(ss, r.trace);
  return j.dump(2) + "\n";
}

std::string to_json(const ControllabilityReport& r) {
  detail::json j{{"check", "controllability"},
                 {"holds", r.relation.holds},
                 {"supervised_states", r.supervised.size()},
                 {"plant_states", r.plant.size()}};
  if (r.relation.counterexample)
    j["counterexample"] = detail::counterexample_json(r.supervised, r.plant, *r.relation.counterexample);
  return j.dump(2) + "\n";
}

}  // namespace cpd
