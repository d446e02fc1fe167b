#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpd/error.hpp"
#include "cpd/spec.hpp"

namespace cpd {

struct ParseResult {
  std::optional<SystemSpec> spec;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return spec.has_value() && diagnostics.empty(); }
};

/// Parses `.cpd` source. Collects diagnostics instead of throwing.
ParseResult try_parse(std::string_view source);
/// Parses `.cpd` source; throws ParseError with all diagnostics on failure.
SystemSpec parse(std::string_view source);

/// Renders a spec back to `.cpd` source; `parse(print(s)) == s`.
std::string print(const SystemSpec& spec);

// Fragment parsers over an existing signature. Process references resolve
// against `processes` when given.
Term parse_term(const Signature& sig, std::string_view text,
                const std::map<std::string, Term>* processes = nullptr);
BoolExpr parse_bool(const Signature& sig, std::string_view text);
Action parse_action(const Signature& sig, std::string_view text);
Requirement parse_requirement(const Signature& sig, std::string_view text);

std::string to_string(const ActionSet& h, const Signature& sig);

}  // namespace cpd
