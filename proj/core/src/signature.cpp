#include "cpd/signature.hpp"

#include <algorithm>
#include <sstream>

#include "cpd/error.hpp"

namespace cpd {

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  std::ostringstream os;
  os << file << ':' << d.pos.line << ':' << d.pos.column << ": " << d.message;
  return os.str();
}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) os << '\n';
    os << ds[i].pos.line << ':' << ds[i].pos.column << ": " << ds[i].message;
  }
  return os.str();
}
}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

BudgetExceeded::BudgetExceeded(std::size_t budget, std::size_t discovered)
    : std::runtime_error("state budget of " + std::to_string(budget) + " exceeded (" +
                         std::to_string(discovered) + " states discovered)"),
      budget_(budget),
      discovered_(discovered) {}

Domain Domain::enumeration(std::vector<std::string> names) {
  Domain d;
  d.lo = 0;
  d.hi = static_cast<Value>(names.size()) - 1;
  d.enumerators = std::move(names);
  return d;
}

std::string Domain::render(Value v) const {
  if (is_enum() && contains(v)) return enumerators[static_cast<std::size_t>(v)];
  return std::to_string(v);
}

ChannelId Signature::add_channel(Channel c) {
  if (channel_index_.count(c.name)) throw ModelError("channel '" + c.name + "' declared twice");
  const auto id = static_cast<ChannelId>(channels_.size());
  channel_index_.emplace(c.name, id);
  channels_.push_back(std::move(c));
  return id;
}

VarId Signature::add_variable(VariableDecl v) {
  if (variable_index_.count(v.name)) throw ModelError("variable '" + v.name + "' declared twice");
  if (v.domain.hi < v.domain.lo) throw ModelError("variable '" + v.name + "' has an empty domain");
  if (!v.domain.contains(v.initial))
    throw ModelError("initial value of '" + v.name + "' lies outside its domain");
  for (std::size_t i = 0; i < v.domain.enumerators.size(); ++i) {
    const auto& e = v.domain.enumerators[i];
    auto [it, fresh] = enumerators_.emplace(e, static_cast<Value>(i));
    if (!fresh && it->second != static_cast<Value>(i))
      throw ModelError("enumerator '" + e + "' used with two different positions");
  }
  const auto id = static_cast<VarId>(variables_.size());
  variable_index_.emplace(v.name, id);
  variables_.push_back(std::move(v));
  return id;
}

std::optional<ChannelId> Signature::find_channel(const std::string& name) const {
  if (auto it = channel_index_.find(name); it != channel_index_.end()) return it->second;
  return std::nullopt;
}

std::optional<VarId> Signature::find_variable(const std::string& name) const {
  if (auto it = variable_index_.find(name); it != variable_index_.end()) return it->second;
  return std::nullopt;
}

std::optional<Value> Signature::find_enumerator(const std::string& name) const {
  if (auto it = enumerators_.find(name); it != enumerators_.end()) return it->second;
  return std::nullopt;
}

Valuation Signature::initial_valuation() const {
  Valuation alpha;
  alpha.reserve(variables_.size());
  for (const auto& v : variables_) alpha.push_back(v.initial);
  return alpha;
}

namespace {
void render_party(std::ostringstream& os, char mark, std::uint32_t count) {
  if (count == 0) return;
  os << mark;
  if (count != 1) os << '_' << count;
}
}  // namespace

std::string Signature::render(const Action& a) const {
  std::ostringstream os;
  os << channel(a.channel).name;
  if (a.senders == 0 && a.receivers == 0) {
    os << "!_0?_0";
    return os.str();
  }
  render_party(os, '!', a.senders);
  render_party(os, '?', a.receivers);
  return os.str();
}

std::string Signature::render_compact(const Action& a) const {
  return channel(a.channel).name + "!" + std::to_string(a.senders) + "?" +
         std::to_string(a.receivers);
}

std::string Signature::render(const Valuation& alpha) const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < alpha.size() && i < variables_.size(); ++i) {
    if (i) os << ", ";
    os << variables_[i].name << '=' << variables_[i].domain.render(alpha[i]);
  }
  os << '}';
  return os.str();
}

bool Signature::action_less(const Action& a, const Action& b) const {
  if (a.channel != b.channel) return channel(a.channel).name < channel(b.channel).name;
  if (a.senders != b.senders) return a.senders < b.senders;
  return a.receivers < b.receivers;
}

ActionSet::ActionSet(std::vector<Action> actions, std::vector<IncompletePattern> patterns)
    : actions_(std::move(actions)), patterns_(std::move(patterns)) {
  std::sort(actions_.begin(), actions_.end());
  actions_.erase(std::unique(actions_.begin(), actions_.end()), actions_.end());
  std::sort(patterns_.begin(), patterns_.end());
  patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
}

bool ActionSet::contains(const Action& a) const {
  if (std::binary_search(actions_.begin(), actions_.end(), a)) return true;
  return std::any_of(patterns_.begin(), patterns_.end(),
                     [&](const IncompletePattern& p) { return p.matches(a); });
}

ActionSet ActionSet::united(const ActionSet& other) const {
  auto actions = actions_;
  actions.insert(actions.end(), other.actions_.begin(), other.actions_.end());
  auto patterns = patterns_;
  patterns.insert(patterns.end(), other.patterns_.begin(), other.patterns_.end());
  return ActionSet(std::move(actions), std::move(patterns));
}

}  // namespace cpd
