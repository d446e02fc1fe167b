#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cpd/spec.hpp"

namespace cpd {

/// Source text of the printing-process-function plant with `ops[i]`
/// maintenance operations for page counter i + 1, including the five
/// coordination requirements instantiated over the index sets.
/// Throws ModelError on an empty counter list or a zero operation count.
std::string ppf_source(const std::vector<std::size_t>& ops);

/// ppf_source parsed.
SystemSpec instantiate_ppf(std::size_t counters, const std::vector<std::size_t>& ops);

/// The hand-written guard supervisor of the single-counter, single-operation
/// case, as a `proc S = ...;` declaration followed by `supervisor S;`.
std::string ppf_1_1_supervisor_source();

}  // namespace cpd
