#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cpd {

using Value = std::int64_t;
using VarId = std::uint32_t;
using ChannelId = std::uint32_t;

/// A total assignment of values to the declared variables, indexed by VarId.
using Valuation = std::vector<Value>;

enum class Controllability : std::uint8_t { controllable, uncontrollable };

struct Channel {
  std::string name;
  Controllability cls = Controllability::controllable;

  friend bool operator==(const Channel&, const Channel&) = default;
};

/// Finite variable domain. Either an integer range [lo, hi] or an enumeration,
/// in which case the constants are encoded as 0..k-1.
struct Domain {
  Value lo = 0;
  Value hi = 0;
  std::vector<std::string> enumerators;

  static Domain range(Value lo, Value hi) { return Domain{lo, hi, {}}; }
  static Domain enumeration(std::vector<std::string> names);

  bool is_enum() const { return !enumerators.empty(); }
  bool contains(Value v) const { return v >= lo && v <= hi; }
  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  /// Symbolic name of a value (enumerator or decimal).
  std::string render(Value v) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct VariableDecl {
  std::string name;
  Domain domain;
  Value initial = 0;

  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

/// Communication action c!_m?_n: m senders and n receivers over channel c.
struct Action {
  ChannelId channel = 0;
  std::uint32_t senders = 0;
  std::uint32_t receivers = 0;

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

/// Declared channels and variables. Terms and expressions refer to them by index.
class Signature {
 public:
  ChannelId add_channel(Channel c);
  VarId add_variable(VariableDecl v);

  const std::vector<Channel>& channels() const { return channels_; }
  const std::vector<VariableDecl>& variables() const { return variables_; }
  const Channel& channel(ChannelId id) const { return channels_.at(id); }
  const VariableDecl& variable(VarId id) const { return variables_.at(id); }

  std::optional<ChannelId> find_channel(const std::string& name) const;
  std::optional<VarId> find_variable(const std::string& name) const;
  /// Value of an enumeration constant, if `name` is one.
  std::optional<Value> find_enumerator(const std::string& name) const;

  bool controllable(ChannelId id) const { return channel(id).cls == Controllability::controllable; }
  bool controllable(const Action& a) const { return controllable(a.channel); }

  /// Initial valuation from the declarations.
  Valuation initial_valuation() const;

  /// `c!_m?_n` with shorthand normalization (`c!`, `c?`, `c!?_2`, ...).
  std::string render(const Action& a) const;
  /// Label used in DOT output, `c!m?n`.
  std::string render_compact(const Action& a) const;
  std::string render(const Valuation& alpha) const;

  /// Orders actions by channel name, then sender and receiver counts.
  bool action_less(const Action& a, const Action& b) const;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.channels_ == b.channels_ && a.variables_ == b.variables_;
  }

 private:
  std::vector<Channel> channels_;
  std::vector<VariableDecl> variables_;
  std::map<std::string, ChannelId> channel_index_;
  std::map<std::string, VarId> variable_index_;
  std::map<std::string, Value> enumerators_;
};

/// Pattern blocking every c-action whose party count m+n is neither 0 nor k.
struct IncompletePattern {
  ChannelId channel = 0;
  std::uint32_t parties = 0;

  bool matches(const Action& a) const {
    const auto total = a.senders + a.receivers;
    return a.channel == channel && total != 0 && total != parties;
  }
  friend bool operator==(const IncompletePattern&, const IncompletePattern&) = default;
  friend auto operator<=>(const IncompletePattern&, const IncompletePattern&) = default;
};

/// Finite description of an encapsulation set H: explicit actions plus
/// channel-level `incomplete(c, k)` patterns.
class ActionSet {
 public:
  ActionSet() = default;
  ActionSet(std::vector<Action> actions, std::vector<IncompletePattern> patterns);

  bool contains(const Action& a) const;
  bool empty() const { return actions_.empty() && patterns_.empty(); }
  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<IncompletePattern>& patterns() const { return patterns_; }

  ActionSet united(const ActionSet& other) const;

  friend bool operator==(const ActionSet&, const ActionSet&) = default;
  friend auto operator<=>(const ActionSet&, const ActionSet&) = default;

 private:
  std::vector<Action> actions_;                // sorted, unique
  std::vector<IncompletePattern> patterns_;    // sorted, unique
};

}  // namespace cpd
