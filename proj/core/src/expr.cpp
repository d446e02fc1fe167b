#include "cpd/expr.hpp"

#include <sstream>

#include "cpd/error.hpp"

namespace cpd {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}


int cmp3(auto a, auto b) { return a < b ? -1 : (b < a ? 1 : 0); }

}  // namespace

const char* to_string(ArithOp op) {
  switch (op) {
    case ArithOp::add: return "+";
    case ArithOp::sub: return "-";
    case ArithOp::mul: return "*";
  }
  return "?";
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "!=";
    case CmpOp::ge: return ">=";
    case CmpOp::gt: return ">";
  }
  return "?";
}

// ---------------------------------------------------------------- DataExpr

DataExpr::DataExpr() : DataExpr(literal(0)) {}

DataExpr DataExpr::literal(Value v, std::string symbol) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::literal;
  n->value = v;
  n->name = std::move(symbol);
  n->hash = mix(1, static_cast<std::size_t>(v));
  return DataExpr(std::move(n));
}

DataExpr DataExpr::variable(VarId id, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->var = id;
  n->name = std::move(name);
  n->hash = mix(2, id);
  return DataExpr(std::move(n));
}

DataExpr DataExpr::negate(DataExpr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->hash = mix(3, e.hash());
  n->lhs = std::make_shared<const DataExpr>(std::move(e));
  return DataExpr(std::move(n));
}

DataExpr DataExpr::binary(ArithOp op, DataExpr lhs, DataExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->op = op;
  n->hash = mix(mix(mix(4, static_cast<std::size_t>(op)), lhs.hash()), rhs.hash());
  n->lhs = std::make_shared<const DataExpr>(std::move(lhs));
  n->rhs = std::make_shared<const DataExpr>(std::move(rhs));
  return DataExpr(std::move(n));
}

Value eval_data(const Valuation& alpha, const DataExpr& e) {
  switch (e.kind()) {
    case DataExpr::Kind::literal: return e.value();
    case DataExpr::Kind::variable:
      if (e.var() >= alpha.size()) throw ModelError("unbound variable '" + e.name() + "'");
      return alpha[e.var()];
    case DataExpr::Kind::negate: return -eval_data(alpha, e.lhs());
    case DataExpr::Kind::binary: {
      const Value l = eval_data(alpha, e.lhs());
      const Value r = eval_data(alpha, e.rhs());
      switch (e.op()) {
        case ArithOp::add: return l + r;
        case ArithOp::sub: return l - r;
        case ArithOp::mul: return l * r;
      }
    }
  }
  return 0;
}

int compare(const DataExpr& a, const DataExpr& b) {
  if (a.same_node(b)) return 0;
  if (int c = cmp3(a.kind(), b.kind())) return c;
  switch (a.kind()) {
    case DataExpr::Kind::literal:
      if (int c = cmp3(a.value(), b.value())) return c;
      return cmp3(a.name(), b.name());
    case DataExpr::Kind::variable: return cmp3(a.var(), b.var());
    case DataExpr::Kind::negate: return compare(a.lhs(), b.lhs());
    case DataExpr::Kind::binary:
      if (int c = cmp3(a.op(), b.op())) return c;
      if (int c = compare(a.lhs(), b.lhs())) return c;
      return compare(a.rhs(), b.rhs());
  }
  return 0;
}

namespace {

int data_level(const DataExpr& e) {
  switch (e.kind()) {
    case DataExpr::Kind::binary: return e.op() == ArithOp::mul ? 2 : 1;
    case DataExpr::Kind::negate: return 3;
    default: return 4;
  }
}

void print(std::ostringstream& os, const DataExpr& e);

void print_at(std::ostringstream& os, const DataExpr& e, int min_level) {
  if (data_level(e) < min_level) {
    os << '(';
    print(os, e);
    os << ')';
  } else {
    print(os, e);
  }
}

void print(std::ostringstream& os, const DataExpr& e) {
  switch (e.kind()) {
    case DataExpr::Kind::literal:
      if (!e.name().empty()) os << e.name();
      else os << e.value();
      break;
    case DataExpr::Kind::variable: os << e.name(); break;
    case DataExpr::Kind::negate:
      os << '-';
      // `-3` reads back as a negative literal, so a negated literal keeps its parens.
      if (e.lhs().kind() == DataExpr::Kind::literal) {
        os << '(';
        print(os, e.lhs());
        os << ')';
      } else {
        print_at(os, e.lhs(), 3);
      }
      break;
    case DataExpr::Kind::binary: {
      const int lvl = data_level(e);
      print_at(os, e.lhs(), lvl);
      os << ' ' << to_string(e.op()) << ' ';
      print_at(os, e.rhs(), lvl + 1);
      break;
    }
  }
}

}  // namespace

std::string to_string(const DataExpr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

void collect_variables(const DataExpr& e, std::set<VarId>& out) {
  switch (e.kind()) {
    case DataExpr::Kind::literal: break;
    case DataExpr::Kind::variable: out.insert(e.var()); break;
    case DataExpr::Kind::negate: collect_variables(e.lhs(), out); break;
    case DataExpr::Kind::binary:
      collect_variables(e.lhs(), out);
      collect_variables(e.rhs(), out);
      break;
  }
}

// ---------------------------------------------------------------- BoolExpr

BoolExpr::BoolExpr() : BoolExpr(constant(true)) {}

BoolExpr BoolExpr::constant(bool b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->truth = b;
  n->hash = mix(11, b ? 1 : 0);
  return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::compare(CmpOp op, DataExpr lhs, DataExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::compare;
  n->cmp = op;
  n->hash = mix(mix(mix(12, static_cast<std::size_t>(op)), lhs.hash()), rhs.hash());
  n->dl = std::move(lhs);
  n->dr = std::move(rhs);
  return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::negation(BoolExpr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::negation;
  n->hash = mix(13, e.hash());
  n->lhs = std::make_shared<const BoolExpr>(std::move(e));
  return BoolExpr(std::move(n));
}

namespace {
template <class Node>
std::shared_ptr<Node> make_binary_bool(BoolExpr::Kind k, BoolExpr lhs, BoolExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->hash = mix(mix(mix(14, static_cast<std::size_t>(k)), lhs.hash()), rhs.hash());
  n->lhs = std::make_shared<const BoolExpr>(std::move(lhs));
  n->rhs = std::make_shared<const BoolExpr>(std::move(rhs));
  return n;
}
}  // namespace

BoolExpr BoolExpr::conjunction(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(make_binary_bool<Node>(Kind::conjunction, std::move(lhs), std::move(rhs)));
}

BoolExpr BoolExpr::disjunction(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(make_binary_bool<Node>(Kind::disjunction, std::move(lhs), std::move(rhs)));
}

BoolExpr BoolExpr::implication(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(make_binary_bool<Node>(Kind::implication, std::move(lhs), std::move(rhs)));
}

bool eval_bool(const Valuation& alpha, const BoolExpr& phi) {
  switch (phi.kind()) {
    case BoolExpr::Kind::constant: return phi.truth();
    case BoolExpr::Kind::compare: {
      const Value l = eval_data(alpha, phi.left_data());
      const Value r = eval_data(alpha, phi.right_data());
      switch (phi.cmp()) {
        case CmpOp::lt: return l < r;
        case CmpOp::le: return l <= r;
        case CmpOp::eq: return l == r;
        case CmpOp::ne: return l != r;
        case CmpOp::ge: return l >= r;
        case CmpOp::gt: return l > r;
      }
      return false;
    }
    case BoolExpr::Kind::negation: return !eval_bool(alpha, phi.operand());
    case BoolExpr::Kind::conjunction: return eval_bool(alpha, phi.lhs()) && eval_bool(alpha, phi.rhs());
    case BoolExpr::Kind::disjunction: return eval_bool(alpha, phi.lhs()) || eval_bool(alpha, phi.rhs());
    case BoolExpr::Kind::implication: return !eval_bool(alpha, phi.lhs()) || eval_bool(alpha, phi.rhs());
  }
  return false;
}

int compare(const BoolExpr& a, const BoolExpr& b) {
  if (a.same_node(b)) return 0;
  if (int c = cmp3(a.kind(), b.kind())) return c;
  switch (a.kind()) {
    case BoolExpr::Kind::constant: return cmp3(a.truth(), b.truth());
    case BoolExpr::Kind::compare:
      if (int c = cmp3(a.cmp(), b.cmp())) return c;
      if (int c = compare(a.left_data(), b.left_data())) return c;
      return compare(a.right_data(), b.right_data());
    case BoolExpr::Kind::negation: return compare(a.operand(), b.operand());
    default:
      if (int c = compare(a.lhs(), b.lhs())) return c;
      return compare(a.rhs(), b.rhs());
  }
}

namespace {

// implication < disjunction < conjunction < negation < atoms
int bool_level(const BoolExpr& e) {
  switch (e.kind()) {
    case BoolExpr::Kind::implication: return 1;
    case BoolExpr::Kind::disjunction: return 2;
    case BoolExpr::Kind::conjunction: return 3;
    case BoolExpr::Kind::negation: return 4;
    default: return 5;
  }
}

void print(std::ostringstream& os, const BoolExpr& e);

void print_at(std::ostringstream& os, const BoolExpr& e, int min_level) {
  if (bool_level(e) < min_level) {
    os << '(';
    print(os, e);
    os << ')';
  } else {
    print(os, e);
  }
}

void print(std::ostringstream& os, const BoolExpr& e) {
  switch (e.kind()) {
    case BoolExpr::Kind::constant: os << (e.truth() ? "true" : "false"); break;
    case BoolExpr::Kind::compare:
      print(os, e.left_data());
      os << ' ' << to_string(e.cmp()) << ' ';
      print(os, e.right_data());
      break;
    case BoolExpr::Kind::negation:
      os << '!';
      print_at(os, e.operand(), e.operand().kind() == BoolExpr::Kind::compare ? 6 : 4);
      break;
    case BoolExpr::Kind::implication:
      // right associative
      print_at(os, e.lhs(), 2);
      os << " => ";
      print_at(os, e.rhs(), 1);
      break;
    case BoolExpr::Kind::disjunction:
    case BoolExpr::Kind::conjunction: {
      const int lvl = bool_level(e);
      print_at(os, e.lhs(), lvl);
      os << (e.kind() == BoolExpr::Kind::conjunction ? " & " : " | ");
      print_at(os, e.rhs(), lvl + 1);
      break;
    }
  }
}

}  // namespace

std::string to_string(const BoolExpr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

void collect_variables(const BoolExpr& e, std::set<VarId>& out) {
  switch (e.kind()) {
    case BoolExpr::Kind::constant: break;
    case BoolExpr::Kind::compare:
      collect_variables(e.left_data(), out);
      collect_variables(e.right_data(), out);
      break;
    case BoolExpr::Kind::negation: collect_variables(e.operand(), out); break;
    default:
      collect_variables(e.lhs(), out);
      collect_variables(e.rhs(), out);
  }
}

}  // namespace cpd
