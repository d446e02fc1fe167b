#include "cpd/state_space.hpp"

#include <deque>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "cpd/error.hpp"

namespace cpd {

StateSpace::StateSpace(std::shared_ptr<const Signature> sig, std::vector<Configuration> states,
                       std::vector<Transition> transitions, StateId initial)
    : sig_(std::move(sig)), states_(std::move(states)), transitions_(std::move(transitions)), initial_(initial) {
  const std::size_t n = states_.size();
  std::stable_sort(transitions_.begin(), transitions_.end(),
                   [](const Transition& a, const Transition& b) { return a.source < b.source; });
  offsets_.assign(n + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.source + 1];
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  incoming_.assign(n, {});
  for (std::uint32_t i = 0; i < transitions_.size(); ++i) incoming_[transitions_[i].target].push_back(i);
  marked_.resize(n);
  for (std::size_t i = 0; i < n; ++i) marked_[i] = terminates(states_[i]);
}

std::size_t StateSpace::marked_count() const {
  return static_cast<std::size_t>(std::count(marked_.begin(), marked_.end(), true));
}

namespace {

struct StateKey {
  Term term;
  Valuation alpha;
  std::vector<VarId> rho;

  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    std::size_t h = k.term.hash();
    for (Value v : k.alpha) h = h * 1000003u ^ static_cast<std::size_t>(v);
    for (VarId x : k.rho) h = h * 31u ^ (x + 17u);
    return h;
  }
};

}  // namespace

StateSpace explore(std::shared_ptr<const Signature> sig, const Configuration& root, const ExploreOptions& opts) {
  if (opts.budget == 0) throw ModelError("state budget must be at least 1");
  std::vector<Configuration> states;
  std::vector<Transition> transitions;
  std::unordered_map<StateKey, StateId, StateKeyHash> index;

  auto intern = [&](Configuration c) -> StateId {
    StateKey key{c.term, c.env.alpha, opts.rho_in_identity ? c.env.rho : std::vector<VarId>{}};
    auto [it, fresh] = index.try_emplace(std::move(key), static_cast<StateId>(states.size()));
    if (fresh) {
      if (states.size() >= opts.budget) throw BudgetExceeded(opts.budget, states.size() + 1);
      states.push_back(std::move(c));
    }
    return it->second;
  };

  Configuration start{canonicalize(root.term), root.env};
  intern(std::move(start));
  const StepOptions step_opts{.canonical = true, .check_domains = true};
  for (StateId s = 0; s < states.size(); ++s) {
    auto steps = step(*sig, states[s], step_opts);
    for (auto& st : steps) {
      const StateId t = intern(std::move(st.target));
      transitions.push_back(Transition{s, st.action, t});
    }
  }
  // Same (action, target) reached through different rho collapses to one edge.
  std::vector<Transition> unique;
  unique.reserve(transitions.size());
  for (const auto& t : transitions) {
    if (!unique.empty() && unique.back().source == t.source) {
      bool dup = false;
      for (auto it = unique.rbegin(); it != unique.rend() && it->source == t.source; ++it) {
        if (it->action == t.action && it->target == t.target) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
    }
    unique.push_back(t);
  }
  return StateSpace(std::move(sig), std::move(states), std::move(unique), 0);
}

std::vector<bool> coreachable(const StateSpace& ss) {
  std::vector<bool> co(ss.size(), false);
  std::deque<StateId> work;
  for (StateId s = 0; s < ss.size(); ++s) {
    if (ss.marked(s)) {
      co[s] = true;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    for (auto ti : ss.in(s)) {
      const StateId p = ss.transitions()[ti].source;
      if (!co[p]) {
        co[p] = true;
        work.push_back(p);
      }
    }
  }
  return co;
}

std::vector<bool> reachable(const StateSpace& ss) {
  std::vector<bool> seen(ss.size(), false);
  if (ss.size() == 0) return seen;
  std::deque<StateId> work{ss.initial()};
  seen[ss.initial()] = true;
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    for (const auto& t : ss.out(s)) {
      if (!seen[t.target]) {
        seen[t.target] = true;
        work.push_back(t.target);
      }
    }
  }
  return seen;
}

std::optional<std::vector<Transition>> shortest_trace(const StateSpace& ss, StateId target) {
  constexpr std::uint32_t kNone = ~0u;
  std::vector<std::uint32_t> via(ss.size(), kNone);
  std::vector<bool> seen(ss.size(), false);
  std::deque<StateId> work{ss.initial()};
  seen[ss.initial()] = true;
  while (!work.empty() && !seen[target]) {
    const StateId s = work.front();
    work.pop_front();
    const auto out = ss.out(s);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto& t = out[k];
      if (seen[t.target]) continue;
      seen[t.target] = true;
      via[t.target] = static_cast<std::uint32_t>(&t - ss.transitions().data());
      work.push_back(t.target);
    }
  }
  if (!seen[target]) return std::nullopt;
  std::vector<Transition> trail;
  for (StateId s = target; s != ss.initial();) {
    const auto& t = ss.transitions()[via[s]];
    trail.push_back(t);
    s = t.source;
  }
  std::reverse(trail.begin(), trail.end());
  return trail;
}

StateSpace xi_relabel(const StateSpace& ss) {
  const Signature& sig = ss.sig();
  return ss.relabeled([&](const Action& a) { return xi_label(sig, a); });
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_space(const StateSpace& ss, ExportFormat format) {
  const Signature& sig = ss.sig();
  if (format == ExportFormat::dot) {
    std::ostringstream os;
    os << "digraph statespace {\n  rankdir=LR;\n  __init [shape=point];\n";
    for (StateId s = 0; s < ss.size(); ++s) {
      os << "  s" << s << " [label=\"" << s << "\\n" << dot_escape(sig.render(ss.alpha(s))) << "\"";
      if (ss.marked(s)) os << ", peripheries=2";
      os << "];\n";
    }
    os << "  __init -> s" << ss.initial() << ";\n";
    for (const auto& t : ss.transitions())
      os << "  s" << t.source << " -> s" << t.target << " [label=\"" << dot_escape(sig.render_compact(t.action))
         << "\"];\n";
    os << "}\n";
    return os.str();
  }
  nlohmann::ordered_json j;
  j["initial"] = ss.initial();
  auto& states = j["states"] = nlohmann::json::array();
  for (StateId s = 0; s < ss.size(); ++s) {
    nlohmann::ordered_json alpha = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < sig.variables().size(); ++v) {
      const auto& decl = sig.variables()[v];
      if (decl.domain.is_enum()) alpha[decl.name] = decl.domain.render(ss.alpha(s)[v]);
      else alpha[decl.name] = ss.alpha(s)[v];
    }
    states.push_back({{"id", s}, {"term", to_string(ss.state(s).term, sig)}, {"alpha", alpha}, {"marked", ss.marked(s)}});
  }
  auto& trans = j["transitions"] = nlohmann::json::array();
  for (const auto& t : ss.transitions())
    trans.push_back({{"src", t.source},
                     {"channel", sig.channel(t.action.channel).name},
                     {"m", t.action.senders},
                     {"n", t.action.receivers},
                     {"dst", t.target}});
  return j.dump(2) + "\n";
}

}  // namespace cpd
