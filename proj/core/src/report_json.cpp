#include "report_json.hpp"

namespace cpd::detail {

json action_json(const Signature& sig, const Action& a) {
  return json{{"label", sig.render(a)}, {"channel", sig.channel(a.channel).name}, {"m", a.senders}, {"n", a.receivers}};
}

json valuation_json(const Signature& sig, const Valuation& alpha) {
  json j = json::object();
  for (std::size_t v = 0; v < sig.variables().size(); ++v) {
    const auto& decl = sig.variables()[v];
    if (decl.domain.is_enum()) j[decl.name] = decl.domain.render(alpha[v]);
    else j[decl.name] = alpha[v];
  }
  return j;
}

json trace_json(const StateSpace& ss, const std::vector<Transition>& trace) {
  json steps = json::array();
  for (const auto& t : trace) {
    steps.push_back({{"src", t.source}, {"action", ss.sig().render(t.action)}, {"dst", t.target},
                     {"alpha", valuation_json(ss.sig(), ss.alpha(t.target))}});
  }
  return steps;
}

json counterexample_json(const StateSpace& left, const StateSpace& right, const Counterexample& cx) {
  const Signature& sig = left.sig();
  json rounds = json::array();
  for (const auto& r : cx.rounds) {
    rounds.push_back({{"from", {r.from.first, r.from.second}},
                      {"attacker", r.attacker_left ? "left" : "right"},
                      {"action", sig.render(r.action)},
                      {"to", {r.to.first, r.to.second}}});
  }
  json j{{"rounds", rounds},
         {"final_pair", {cx.final_pair.first, cx.final_pair.second}},
         {"left_alpha", valuation_json(sig, left.alpha(cx.final_pair.first))},
         {"right_alpha", valuation_json(sig, right.alpha(cx.final_pair.second))}};
  switch (cx.clause) {
    case Counterexample::Clause::termination: j["clause"] = "termination"; break;
    case Counterexample::Clause::forward: j["clause"] = "forward"; break;
    case Counterexample::Clause::backward: j["clause"] = "backward"; break;
  }
  if (cx.clause != Counterexample::Clause::termination) j["unmatched"] = sig.render(cx.action);
  return j;
}

}  // namespace cpd::detail
