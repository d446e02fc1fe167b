#include "cpd/relations.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace cpd {

ActionFilter ActionFilter::listed(std::vector<Action> actions) {
  ActionFilter f(Kind::listed);
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  f.actions_ = std::move(actions);
  return f;
}

bool ActionFilter::contains(const Signature& sig, const Action& a) const {
  switch (kind_) {
    case Kind::all: return true;
    case Kind::none: return false;
    case Kind::uncontrollable: return !sig.controllable(a);
    case Kind::listed: return std::binary_search(actions_.begin(), actions_.end(), a);
  }
  return false;
}

bool ActionFilter::subset_of(const ActionFilter& other, const Signature& sig, const std::vector<Action>& labels) const {
  return std::all_of(labels.begin(), labels.end(),
                     [&](const Action& a) { return !contains(sig, a) || other.contains(sig, a); });
}

namespace {

constexpr std::uint32_t kAlive = std::numeric_limits<std::uint32_t>::max();

struct PairGraph {
  std::vector<StatePair> pairs;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> preds;

  static std::uint64_t key(StateId p, StateId q) { return (std::uint64_t{p} << 32) | q; }

  std::uint32_t find(StateId p, StateId q) const {
    auto it = index.find(key(p, q));
    return it == index.end() ? kAlive : it->second;
  }
  std::uint32_t intern(StateId p, StateId q, std::deque<std::uint32_t>& work) {
    auto [it, fresh] = index.try_emplace(key(p, q), static_cast<std::uint32_t>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(p, q);
      preds.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  }
};

// Calls f(left transition, right transition) for every equally labeled pair.
template <class F>
void for_matching(std::span<const Transition> l, std::span<const Transition> r, F&& f) {
  for (const auto& a : l)
    for (const auto& b : r)
      if (a.action == b.action) f(a, b);
}

struct Removal {
  Counterexample::Clause clause;
  Action action;
  StateId attacker_target = 0;
};

}  // namespace

RelationResult partial_bisim(const StateSpace& left, const StateSpace& right, const ActionFilter& b) {
  const Signature& sig = left.sig();
  PairGraph g;
  {
    std::deque<std::uint32_t> work;
    g.intern(left.initial(), right.initial(), work);
    while (!work.empty()) {
      const std::uint32_t i = work.front();
      work.pop_front();
      const auto [p, q] = g.pairs[i];
      for_matching(left.out(p), right.out(q), [&](const Transition& x, const Transition& y) {
        const std::uint32_t j = g.intern(x.target, y.target, work);
        g.preds[j].push_back(i);
      });
    }
  }

  const std::size_t n = g.pairs.size();
  std::vector<std::uint32_t> removed_at(n, kAlive);
  std::vector<Removal> reason(n);
  std::uint32_t clock = 0;
  std::deque<std::uint32_t> work;
  std::vector<bool> queued(n, false);

  auto remove = [&](std::uint32_t i, Removal why) {
    removed_at[i] = clock++;
    reason[i] = why;
    for (auto pr : g.preds[i]) {
      if (removed_at[pr] == kAlive && !queued[pr]) {
        queued[pr] = true;
        work.push_back(pr);
      }
    }
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    const auto [p, q] = g.pairs[i];
    if (left.marked(p) != right.marked(q)) remove(i, {Counterexample::Clause::termination, {}, 0});
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (removed_at[i] == kAlive && !queued[i]) {
      queued[i] = true;
      work.push_back(i);
    }
  }

  auto alive = [&](StateId p, StateId q) {
    const auto j = g.find(p, q);
    return j != kAlive && removed_at[j] == kAlive;
  };

  while (!work.empty()) {
    const std::uint32_t i = work.front();
    work.pop_front();
    queued[i] = false;
    if (removed_at[i] != kAlive) continue;
    const auto [p, q] = g.pairs[i];
    std::optional<Removal> why;
    for (const auto& x : left.out(p)) {
      bool matched = false;
      for (const auto& y : right.out(q))
        if (y.action == x.action && alive(x.target, y.target)) {
          matched = true;
          break;
        }
      if (!matched) {
        why = Removal{Counterexample::Clause::forward, x.action, x.target};
        break;
      }
    }
    if (!why) {
      for (const auto& y : right.out(q)) {
        if (!b.contains(sig, y.action)) continue;
        bool matched = false;
        for (const auto& x : left.out(p))
          if (x.action == y.action && alive(x.target, y.target)) {
            matched = true;
            break;
          }
        if (!matched) {
          why = Removal{Counterexample::Clause::backward, y.action, y.target};
          break;
        }
      }
    }
    if (why) remove(i, *why);
  }

  RelationResult result;
  if (removed_at[0] == kAlive) {
    result.holds = true;
    for (std::uint32_t i = 0; i < n; ++i)
      if (removed_at[i] == kAlive) result.witness.push_back(g.pairs[i]);
    return result;
  }

  // Follow removal reasons backwards in time to build a distinguishing play.
  Counterexample cx;
  std::uint32_t cur = 0;
  for (;;) {
    const Removal& why = reason[cur];
    const auto [p, q] = g.pairs[cur];
    if (why.clause == Counterexample::Clause::termination) {
      cx.final_pair = g.pairs[cur];
      cx.clause = why.clause;
      break;
    }
    // Defender answers with the response whose pair died earliest.
    const bool attacker_left = why.clause == Counterexample::Clause::forward;
    std::uint32_t best = kAlive;
    StateId best_target = 0;
    const auto defender_moves = attacker_left ? right.out(q) : left.out(p);
    for (const auto& d : defender_moves) {
      if (d.action != why.action) continue;
      const auto j = attacker_left ? g.find(why.attacker_target, d.target) : g.find(d.target, why.attacker_target);
      if (j == kAlive) continue;
      if (best == kAlive || removed_at[j] < removed_at[best]) {
        best = j;
        best_target = d.target;
      }
    }
    if (best == kAlive) {
      cx.final_pair = g.pairs[cur];
      cx.clause = why.clause;
      cx.action = why.action;
      cx.attacker_target = why.attacker_target;
      break;
    }
    PlayRound round;
    round.from = g.pairs[cur];
    round.attacker_left = attacker_left;
    round.action = why.action;
    round.to = attacker_left ? StatePair{why.attacker_target, best_target} : StatePair{best_target, why.attacker_target};
    cx.rounds.push_back(round);
    cur = best;
  }
  result.counterexample = std::move(cx);
  return result;
}

RelationResult bisimilar(const StateSpace& left, const StateSpace& right) {
  auto forward = partial_bisim(left, right, ActionFilter::all());
  if (!forward) return forward;
  auto backward = partial_bisim(right, left, ActionFilter::all());
  if (!backward) {
    // Report in left/right orientation.
    RelationResult r;
    auto cx = *backward.counterexample;
    for (auto& round : cx.rounds) {
      std::swap(round.from.first, round.from.second);
      std::swap(round.to.first, round.to.second);
      round.attacker_left = !round.attacker_left;
    }
    std::swap(cx.final_pair.first, cx.final_pair.second);
    if (cx.clause == Counterexample::Clause::forward) cx.clause = Counterexample::Clause::backward;
    else if (cx.clause == Counterexample::Clause::backward) cx.clause = Counterexample::Clause::forward;
    r.counterexample = std::move(cx);
    return r;
  }
  return forward;
}

RelationResult simulated_by(const StateSpace& left, const StateSpace& right) {
  return partial_bisim(left, right, ActionFilter::none());
}

std::string render_counterexample(const StateSpace& left, const StateSpace& right, const Counterexample& cx) {
  const Signature& sig = left.sig();
  std::ostringstream os;
  os << "trail:";
  if (cx.rounds.empty()) os << " (empty)";
  for (const auto& r : cx.rounds) os << ' ' << sig.render(r.action);
  os << '\n';
  for (const auto& r : cx.rounds) {
    os << "  (" << r.from.first << ", " << r.from.second << ") --" << sig.render(r.action) << "--> ("
       << r.to.first << ", " << r.to.second << ")  attacker on " << (r.attacker_left ? "left" : "right") << '\n';
  }
  const auto [p, q] = cx.final_pair;
  os << "final pair (" << p << ", " << q << "): left " << sig.render(left.alpha(p)) << ", right "
     << sig.render(right.alpha(q)) << '\n';
  switch (cx.clause) {
    case Counterexample::Clause::termination:
      os << "violated: termination (left " << (left.marked(p) ? "terminates" : "does not terminate") << ", right "
         << (right.marked(q) ? "terminates" : "does not terminate") << ")\n";
      break;
    case Counterexample::Clause::forward:
      os << "violated: left move " << sig.render(cx.action) << " has no matching right move\n";
      break;
    case Counterexample::Clause::backward:
      os << "violated: right move " << sig.render(cx.action) << " (in B) has no matching left move\n";
      break;
  }
  return os.str();
}

RelationResult partial_bisim_all_environments(std::shared_ptr<const Signature> sig, const Term& left,
                                              const Term& right, const ActionFilter& b,
                                              const ExploreOptions& opts) {
  const auto& vars = sig->variables();
  Valuation alpha(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) alpha[i] = vars[i].domain.lo;
  for (;;) {
    Environment env;
    env.alpha = alpha;
    for (VarId v = 0; v < vars.size(); ++v) env.rho.push_back(v);
    auto l = explore(sig, Configuration{left, env}, opts);
    auto r = explore(sig, Configuration{right, env}, opts);
    auto res = partial_bisim(l, r, b);
    if (!res) return res;
    std::size_t k = 0;
    for (; k < vars.size() && alpha[k] == vars[k].domain.hi; ++k) alpha[k] = vars[k].domain.lo;
    if (k == vars.size()) break;
    ++alpha[k];
  }
  RelationResult ok;
  ok.holds = true;
  return ok;
}

}  // namespace cpd
