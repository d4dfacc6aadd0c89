#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ipcat/fat.hpp"
#include "ipcat/ipc.hpp"
#include "ipcat/rule.hpp"

// Reduction-graph search shared by both calculi. States are identified up
// to alpha-equivalence via their canonical keys.
namespace ipcat::rw {

struct IpcCalc {
  using Term = ipc::TermRef;
  static std::vector<Redex> redexes(const Term& t, RuleSet rs) {
    return ipc::redexes(t, rs);
  }
  static Term step_at(const Term& t, const Path& p, RuleId r) {
    return ipc::step_at(t, p, r);
  }
  static std::string key(const Term& t) { return ipc::alpha_key(t); }
  static bool alpha_eq(const Term& a, const Term& b) {
    return ipc::alpha_eq(a, b);
  }
};

struct FatCalc {
  using Term = fat::TermRef;
  static std::vector<Redex> redexes(const Term& t, RuleSet rs) {
    return fat::redexes(t, rs);
  }
  static Term step_at(const Term& t, const Path& p, RuleId r) {
    return fat::step_at(t, p, r);
  }
  static std::string key(const Term& t) { return fat::alpha_key(t); }
  static bool alpha_eq(const Term& a, const Term& b) {
    return fat::alpha_eq(a, b);
  }
};

template <class Calc>
struct Step {
  RuleId rule;
  Path pos;
  typename Calc::Term before, after;
};

template <class Calc>
struct Trace {
  typename Calc::Term start;
  std::vector<Step<Calc>> steps;

  const typename Calc::Term& end() const {
    return steps.empty() ? start : steps.back().after;
  }
};

inline constexpr int kDefaultMaxSteps = 12;
inline constexpr std::size_t kDefaultNodeBudget = 200000;
inline constexpr int kDefaultFuel = 10000;

// Breadth-first search for a reduction sequence from `from` to `to` of
// length at most max_steps; the witness is shortest. nullopt means not
// found within the bounds (never a refutation). node_budget caps visited
// states; traversal aborts to nullopt when exceeded.
template <class Calc>
std::optional<Trace<Calc>> reachable(const typename Calc::Term& from,
                                     const typename Calc::Term& to,
                                     RuleSet rules,
                                     int max_steps = kDefaultMaxSteps,
                                     std::size_t node_budget = kDefaultNodeBudget) {
  std::string target = Calc::key(to);
  if (Calc::key(from) == target) return Trace<Calc>{from, {}};
  if (max_steps <= 0) return std::nullopt;

  struct Node {
    typename Calc::Term term;
    int parent;
    RuleId rule;
    Path pos;
    int depth;
  };
  std::vector<Node> nodes;
  nodes.push_back({from, -1, RuleId::BetaImp, {}, 0});
  std::unordered_set<std::string> seen{Calc::key(from)};

  auto build = [&](int parentIdx, RuleId rule, const Path& pos,
                   typename Calc::Term last) {
    std::vector<Step<Calc>> steps;
    steps.push_back({rule, pos, nodes[parentIdx].term, std::move(last)});
    for (int i = parentIdx; nodes[i].parent >= 0; i = nodes[i].parent) {
      steps.push_back({nodes[i].rule, nodes[i].pos, nodes[nodes[i].parent].term,
                       nodes[i].term});
    }
    Trace<Calc> tr{from, {}};
    tr.steps.assign(steps.rbegin(), steps.rend());
    return tr;
  };

  for (std::size_t qi = 0; qi < nodes.size(); ++qi) {
    if (nodes[qi].depth >= max_steps) break;  // queue is depth-ordered
    auto rxs = Calc::redexes(nodes[qi].term, rules);
    for (const Redex& rx : rxs) {
      typename Calc::Term next = Calc::step_at(nodes[qi].term, rx.pos, rx.rule);
      std::string k = Calc::key(next);
      if (k == target)
        return build(static_cast<int>(qi), rx.rule, rx.pos, std::move(next));
      if (seen.insert(std::move(k)).second) {
        nodes.push_back({std::move(next), static_cast<int>(qi), rx.rule, rx.pos,
                         nodes[qi].depth + 1});
        if (nodes.size() > node_budget) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

template <class Calc>
struct NormalizeResult {
  typename Calc::Term term;
  int steps = 0;
  bool finished = false;  // false means fuel ran out
};

// Leftmost-outermost: always contracts the first redex in outside-in,
// left-to-right order.
template <class Calc>
NormalizeResult<Calc> normalize(const typename Calc::Term& t, RuleSet rules,
                                int fuel = kDefaultFuel) {
  NormalizeResult<Calc> out{t, 0, false};
  for (int i = 0; i < fuel; ++i) {
    auto rxs = Calc::redexes(out.term, rules);
    if (rxs.empty()) {
      out.finished = true;
      return out;
    }
    out.term = Calc::step_at(out.term, rxs.front().pos, rxs.front().rule);
    ++out.steps;
  }
  out.finished = Calc::redexes(out.term, rules).empty();
  return out;
}

// Normalizes both sides and compares. nullopt when fuel ran out before
// either normal form (inconclusive).
template <class Calc>
std::optional<bool> join_at_normal_form(const typename Calc::Term& a,
                                        const typename Calc::Term& b,
                                        RuleSet rules,
                                        int fuel = kDefaultFuel) {
  auto na = normalize<Calc>(a, rules, fuel);
  if (!na.finished) return std::nullopt;
  auto nb = normalize<Calc>(b, rules, fuel);
  if (!nb.finished) return std::nullopt;
  return Calc::alpha_eq(na.term, nb.term);
}

using IpcTrace = Trace<IpcCalc>;
using FatTrace = Trace<FatCalc>;

inline NormalizeResult<FatCalc> normalize_fat(const fat::TermRef& t,
                                              RuleSet rules,
                                              int fuel = kDefaultFuel) {
  return normalize<FatCalc>(t, rules, fuel);
}

}  // namespace ipcat::rw
