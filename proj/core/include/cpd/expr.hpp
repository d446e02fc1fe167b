#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "cpd/signature.hpp"

namespace cpd {

enum class ArithOp : std::uint8_t { add, sub, mul };
enum class CmpOp : std::uint8_t { lt, le, eq, ne, ge, gt };

const char* to_string(ArithOp op);
const char* to_string(CmpOp op);

/// Integer expression over declared variables. Immutable; copies share structure.
class DataExpr {
 public:
  enum class Kind : std::uint8_t { literal, variable, negate, binary };

  DataExpr();  // literal 0

  /// `symbol` names an enumeration constant; it only affects printing.
  static DataExpr literal(Value v, std::string symbol = {});
  static DataExpr variable(VarId id, std::string name);
  static DataExpr negate(DataExpr e);
  static DataExpr binary(ArithOp op, DataExpr lhs, DataExpr rhs);

  Kind kind() const { return node_->kind; }
  Value value() const { return node_->value; }
  VarId var() const { return node_->var; }
  /// Variable name or enumeration symbol.
  const std::string& name() const { return node_->name; }
  ArithOp op() const { return node_->op; }
  const DataExpr& lhs() const { return *node_->lhs; }
  const DataExpr& rhs() const { return *node_->rhs; }
  std::size_t hash() const { return node_->hash; }
  bool same_node(const DataExpr& o) const { return node_ == o.node_; }

 private:
  struct Node {
    Kind kind = Kind::literal;
    ArithOp op = ArithOp::add;
    Value value = 0;
    VarId var = 0;
    std::size_t hash = 0;
    std::string name;
    std::shared_ptr<const DataExpr> lhs, rhs;
  };
  explicit DataExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Boolean formula: comparisons of data expressions under ¬, ∧, ∨, ⇒.
class BoolExpr {
 public:
  enum class Kind : std::uint8_t { constant, compare, negation, conjunction, disjunction, implication };

  BoolExpr();  // true

  static BoolExpr constant(bool b);
  static BoolExpr compare(CmpOp op, DataExpr lhs, DataExpr rhs);
  static BoolExpr negation(BoolExpr e);
  static BoolExpr conjunction(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr disjunction(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr implication(BoolExpr lhs, BoolExpr rhs);

  Kind kind() const { return node_->kind; }
  bool truth() const { return node_->truth; }
  CmpOp cmp() const { return node_->cmp; }
  const DataExpr& left_data() const { return node_->dl; }
  const DataExpr& right_data() const { return node_->dr; }
  const BoolExpr& operand() const { return *node_->lhs; }
  const BoolExpr& lhs() const { return *node_->lhs; }
  const BoolExpr& rhs() const { return *node_->rhs; }
  std::size_t hash() const { return node_->hash; }
  bool same_node(const BoolExpr& o) const { return node_ == o.node_; }

  bool is_true() const { return kind() == Kind::constant && truth(); }
  bool is_false() const { return kind() == Kind::constant && !truth(); }

 private:
  struct Node {
    Kind kind = Kind::constant;
    bool truth = true;
    CmpOp cmp = CmpOp::eq;
    std::size_t hash = 0;
    DataExpr dl, dr;
    std::shared_ptr<const BoolExpr> lhs, rhs;
  };
  explicit BoolExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Evaluates under `alpha`. Throws ModelError on a variable outside the valuation.
Value eval_data(const Valuation& alpha, const DataExpr& e);
bool eval_bool(const Valuation& alpha, const BoolExpr& phi);

/// Structural three-way comparison (total order used for canonical forms).
int compare(const DataExpr& a, const DataExpr& b);
int compare(const BoolExpr& a, const BoolExpr& b);
inline bool operator==(const DataExpr& a, const DataExpr& b) { return compare(a, b) == 0; }
inline bool operator==(const BoolExpr& a, const BoolExpr& b) { return compare(a, b) == 0; }

std::string to_string(const DataExpr& e);
std::string to_string(const BoolExpr& e);

void collect_variables(const DataExpr& e, std::set<VarId>& out);
void collect_variables(const BoolExpr& e, std::set<VarId>& out);

}  // namespace cpd
