#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpd {

/// Source position of a diagnostic. Lines and columns are 1-based.
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

/// Formats `file:line:col: message`.
std::string format_diagnostic(const std::string& file, const Diagnostic& d);

/// Raised for ill-formed models: unbound variables, out-of-domain updates,
/// misuse of an operation outside its precondition.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the parser. Carries every diagnostic collected before giving up.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Exploration hit its state budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t budget, std::size_t discovered);
  std::size_t budget() const { return budget_; }
  std::size_t discovered() const { return discovered_; }

 private:
  std::size_t budget_;
  std::size_t discovered_;
};

/// Synthesis could not produce a supervisor (initial state is bad, or the
/// plant's verdicts are not a function of the variable valuation).
class SynthesisError : public std::runtime_error {
 public:
  enum class Kind { no_supervisor, not_observer_complete };
  SynthesisError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace cpd
