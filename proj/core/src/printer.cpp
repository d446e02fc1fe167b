#include <cctype>
#include <sstream>

#include "cpd/error.hpp"
#include "cpd/parser.hpp"
#include "cpd/spec.hpp"

namespace cpd {

namespace {

// par < alt < seq < prefix/guard < star < atom
int term_level(const Term& t) {
  switch (t.kind()) {
    case TermKind::par: return 1;
    case TermKind::alt: return 2;
    case TermKind::seq: return 3;
    case TermKind::prefix:
    case TermKind::guard: return 4;
    case TermKind::star: return 5;
    default: return 6;
  }
}

void print_term(std::ostringstream& os, const Term& t, const Signature& sig);

void print_at(std::ostringstream& os, const Term& t, const Signature& sig, int min_level) {
  if (term_level(t) < min_level) {
    os << '(';
    print_term(os, t, sig);
    os << ')';
  } else {
    print_term(os, t, sig);
  }
}

void print_update(std::ostringstream& os, const UpdateMap& f) {
  if (f.empty()) return;
  os << '[';
  bool first = true;
  for (const auto& as : f) {
    if (!first) os << ", ";
    first = false;
    os << as.name << " := " << to_string(as.expr);
  }
  os << ']';
}

void print_term(std::ostringstream& os, const Term& t, const Signature& sig) {
  switch (t.kind()) {
    case TermKind::deadlock: os << '0'; break;
    case TermKind::termination: os << '1'; break;
    case TermKind::prefix:
      os << sig.render(t.action());
      print_update(os, t.update());
      os << " . ";
      print_at(os, t.body(), sig, 4);
      break;
    case TermKind::guard: {
      // Implications and formulas opening with a number are parenthesized.
      const auto& phi = t.condition();
      const std::string text = to_string(phi);
      if (phi.kind() == BoolExpr::Kind::implication || std::isdigit(static_cast<unsigned char>(text[0])))
        os << '(' << text << ')';
      else
        os << text;
      os << " -> ";
      print_at(os, t.body(), sig, 4);
      break;
    }
    case TermKind::encap:
      os << "encap" << to_string(t.blocked(), sig) << '(';
      print_term(os, t.body(), sig);
      os << ')';
      break;
    case TermKind::star:
      print_at(os, t.body(), sig, 5);
      os << '*';
      break;
    case TermKind::alt:
      print_at(os, t.lhs(), sig, 2);
      os << " + ";
      print_at(os, t.rhs(), sig, 3);
      break;
    case TermKind::seq:
      print_at(os, t.lhs(), sig, 3);
      os << " . ";
      print_at(os, t.rhs(), sig, 4);
      break;
    case TermKind::par:
      print_at(os, t.lhs(), sig, 1);
      os << " || ";
      print_at(os, t.rhs(), sig, 2);
      break;
  }
}

}  // namespace

std::string to_string(const Term& t, const Signature& sig) {
  std::ostringstream os;
  print_term(os, t, sig);
  return os.str();
}

std::string to_string(const ActionSet& h, const Signature& sig) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& a : h.actions()) {
    if (!first) os << ", ";
    first = false;
    os << sig.render(a);
  }
  for (const auto& p : h.patterns()) {
    if (!first) os << ", ";
    first = false;
    os << "incomplete(" << sig.channel(p.channel).name << ", " << p.parties << ')';
  }
  os << '}';
  return os.str();
}

std::string to_string(const Requirement& r, const Signature& sig) {
  switch (r.kind) {
    case Requirement::Kind::invariant: return "invariant " + to_string(r.formula);
    case Requirement::Kind::event_implies:
      return "event " + sig.render(r.action) + " implies " + to_string(r.formula);
    case Requirement::Kind::state_excludes_event:
      return to_string(r.formula) + " disables " + sig.render(r.action);
  }
  return {};
}

std::string print(const SystemSpec& spec) {
  const Signature& sig = spec.sig();
  std::ostringstream os;
  for (auto cls : {Controllability::controllable, Controllability::uncontrollable}) {
    bool any = false;
    for (const auto& c : sig.channels()) {
      if (c.cls != cls) continue;
      os << (any ? ", " : (cls == Controllability::controllable ? "controllable " : "uncontrollable ")) << c.name;
      any = true;
    }
    if (any) os << ";\n";
  }
  for (const auto& v : sig.variables()) {
    os << "var " << v.name << " : ";
    if (v.domain.is_enum()) {
      os << '{';
      for (std::size_t i = 0; i < v.domain.enumerators.size(); ++i) os << (i ? ", " : "") << v.domain.enumerators[i];
      os << '}';
    } else {
      os << v.domain.lo << ".." << v.domain.hi;
    }
    os << " = " << v.domain.render(v.initial) << ";\n";
  }
  if (!sig.channels().empty() || !sig.variables().empty()) os << '\n';
  for (const auto& name : spec.process_order) {
    os << "proc " << name << " = " << to_string(spec.processes.at(name), sig) << ";\n";
  }
  os << '\n';
  if (!spec.plant.empty()) os << "plant " << spec.plant << ";\n";
  if (spec.supervisor) os << "supervisor " << *spec.supervisor << ";\n";
  if (spec.encapsulation) os << "encap " << to_string(*spec.encapsulation, sig) << ";\n";
  for (const auto& r : spec.requirements) os << "require " << to_string(r, sig) << ";\n";
  return os.str();
}

// ---------------------------------------------------------------- SystemSpec

const Term& SystemSpec::plant_term() const {
  auto it = processes.find(plant);
  if (it == processes.end()) throw ModelError("no plant declared");
  return it->second;
}

const Term& SystemSpec::supervisor_term() const {
  if (!supervisor) throw ModelError("no supervisor declared");
  auto it = processes.find(*supervisor);
  if (it == processes.end()) throw ModelError("unknown supervisor process '" + *supervisor + "'");
  return it->second;
}

ActionSet SystemSpec::supervised_encapsulation() const {
  if (encapsulation) return *encapsulation;
  std::vector<IncompletePattern> patterns;
  for (ChannelId c = 0; c < sig().channels().size(); ++c)
    if (sig().controllable(c)) patterns.push_back(IncompletePattern{c, 2});
  return ActionSet({}, std::move(patterns));
}

void SystemSpec::set_process(const std::string& name, Term t) {
  if (!processes.count(name)) process_order.push_back(name);
  processes.insert_or_assign(name, std::move(t));
}

bool operator==(const SystemSpec& a, const SystemSpec& b) {
  return *a.signature == *b.signature && a.processes == b.processes && a.process_order == b.process_order &&
         a.plant == b.plant && a.supervisor == b.supervisor && a.encapsulation == b.encapsulation &&
         a.requirements == b.requirements;
}

}  // namespace cpd
