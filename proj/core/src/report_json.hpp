#pragma once

#include <nlohmann/json.hpp>

#include "cpd/relations.hpp"
#include "cpd/state_space.hpp"

namespace cpd::detail {

using json = nlohmann::ordered_json;

json action_json(const Signature& sig, const Action& a);
json valuation_json(const Signature& sig, const Valuation& alpha);
json trace_json(const StateSpace& ss, const std::vector<Transition>& trace);
json counterexample_json(const StateSpace& left, const StateSpace& right, const Counterexample& cx);

}  // namespace cpd::detail
