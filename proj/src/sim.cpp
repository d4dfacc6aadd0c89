#include "ipcat/sim.hpp"

#include <algorithm>
#include <unordered_set>

#include "ipcat/fresh.hpp"

namespace ipcat::sim {

std::string_view verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::SyntacticIdentity:
      return "syntactic_identity";
    case VerdictKind::Reached:
      return "reached";
    case VerdictKind::JoinedAtNormalForm:
      return "joined_at_normal_form";
    case VerdictKind::Failed:
      return "failed";
  }
  return "failed";
}

namespace {

bool is_commute(RuleId r) {
  return RuleSet::ipc_commute().contains(r);
}
bool is_plain_beta(RuleId r) {
  return r == RuleId::BetaImp || r == RuleId::BetaAnd;
}

// The two images agree outside the image of the rewritten position, so
// the witness search can be confined to the smallest differing subterm
// pair. Descends while exactly one child differs, renaming the right
// side's binders to the left side's so the comparison stays literal on
// free names. Gives up (keeping the current pair) on any ambiguity; the
// caller then falls back to searching the whole images.
struct Focus {
  Path path;
  fat::TermRef a, b;
};

Focus focus_difference(const fat::TermRef& a0, const fat::TermRef& b0) {
  Focus f{{}, a0, b0};
  for (;;) {
    const fat::TermRef a = f.a;
    const fat::TermRef b = f.b;
    if (a->node.index() != b->node.index()) return f;

    fat::TermRef bAligned = b;
    if (auto* la = fat::as<fat::Lam>(a)) {
      auto* lb = fat::as<fat::Lam>(b);
      if (!fat::type_eq(la->annot, lb->annot)) return f;
      if (la->bound != lb->bound) {
        if (fat::free_in(la->bound, lb->body)) return f;
        bAligned = fat::lam(la->bound, lb->annot,
                            fat::subst(fat::var(la->bound), lb->bound, lb->body));
      }
    } else if (auto* ta = fat::as<fat::TyLam>(a)) {
      auto* tb = fat::as<fat::TyLam>(b);
      if (ta->bound != tb->bound) {
        if (fat::type_free_in(ta->bound, tb->body)) return f;
        bAligned = fat::tylam(
            ta->bound, fat::subst_type_in_term(ta->bound, tb->bound, tb->body));
      }
    } else if (auto* pa = fat::as<fat::Proj>(a)) {
      if (pa->index != fat::as<fat::Proj>(b)->index) return f;
    } else if (auto* ya = fat::as<fat::TyApp>(a)) {
      if (ya->tyvar != fat::as<fat::TyApp>(b)->tyvar) return f;
    }

    int n = fat::child_count(a);
    int diff = -1;
    for (int i = 0; i < n; ++i) {
      if (!fat::alpha_eq(fat::child(a, i), fat::child(bAligned, i))) {
        if (diff >= 0) return f;  // two children differ, stop here
        diff = i;
      }
    }
    if (diff < 0) return f;  // alpha-equal after all, caller's guard
    f.path.push_back(diff);
    f.a = fat::child(a, diff);
    f.b = fat::child(bAligned, diff);
  }
}

fat::TermRef replace_at(const fat::TermRef& t, const Path& pos,
                        const fat::TermRef& sub, std::size_t d = 0) {
  if (d == pos.size()) return sub;
  return fat::with_child(t, pos[d],
                         replace_at(fat::child(t, pos[d]), pos, sub, d + 1));
}

// Subtrees of the target this large or larger can usually be carried
// over unchanged, so the search refuses to rewrite inside copies of
// them. Purely a pruning heuristic; failures fall back to blind search.
constexpr int kFreezeMinSize = 5;
constexpr std::size_t kBlindNodeBudget = 5000;

void collect_subtree_keys(const fat::TermRef& t,
                          std::unordered_set<std::string>& out) {
  if (fat::term_size(t) >= kFreezeMinSize) out.insert(fat::alpha_key(t));
  for (int i = 0; i < fat::child_count(t); ++i)
    collect_subtree_keys(fat::child(t, i), out);
}

// Preorder redexes as fat::redexes lists them, except that nodes whose
// subtree occurs in the target are skipped entirely.
void active_redexes(const fat::TermRef& t, RuleSet rules,
                    const std::unordered_set<std::string>& frozen, bool root,
                    Path& prefix, std::vector<Redex>& out) {
  if (!root && fat::term_size(t) >= kFreezeMinSize &&
      frozen.count(fat::alpha_key(t)))
    return;
  for (unsigned i = 0; i < kRuleCount; ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (is_fat_rule(r) && rules.contains(r) && fat::root_rewrite(r, t))
      out.push_back({prefix, r});
  }
  for (int i = 0; i < fat::child_count(t); ++i) {
    prefix.push_back(i);
    active_redexes(fat::child(t, i), rules, frozen, false, prefix, out);
    prefix.pop_back();
  }
}

constexpr std::size_t kMaxSpots = 16;
constexpr std::size_t kMaxJoinSpots = 64;
constexpr std::size_t kPrunedNodeBudget = 20000;
constexpr std::size_t kPrunedBudgetWork = 4'000'000;
constexpr std::size_t kPrunedMinNodes = 600;
constexpr int kBlindMaxFocus = 200;

// All maximal differing regions between the two terms, in path order.
// Same binder alignment as focus_difference, but a node with several
// differing children contributes each region separately; splitting
// stops at constructor or annotation mismatches.
void multi_focus(const fat::TermRef& a, const fat::TermRef& b, Path& prefix,
                 std::vector<Focus>& out, std::size_t cap) {
  if (out.size() >= cap) return;
  if (fat::alpha_eq(a, b)) return;

  bool split = a->node.index() == b->node.index();
  fat::TermRef bAligned = b;
  if (split) {
    if (auto* la = fat::as<fat::Lam>(a)) {
      auto* lb = fat::as<fat::Lam>(b);
      if (!fat::type_eq(la->annot, lb->annot)) {
        split = false;
      } else if (la->bound != lb->bound) {
        if (fat::free_in(la->bound, lb->body))
          split = false;
        else
          bAligned = fat::lam(
              la->bound, lb->annot,
              fat::subst(fat::var(la->bound), lb->bound, lb->body));
      }
    } else if (auto* ta = fat::as<fat::TyLam>(a)) {
      auto* tb = fat::as<fat::TyLam>(b);
      if (ta->bound != tb->bound) {
        if (fat::type_free_in(ta->bound, tb->body))
          split = false;
        else
          bAligned = fat::tylam(ta->bound, fat::subst_type_in_term(
                                               ta->bound, tb->bound, tb->body));
      }
    } else if (auto* pa = fat::as<fat::Proj>(a)) {
      if (pa->index != fat::as<fat::Proj>(b)->index) split = false;
    } else if (auto* ya = fat::as<fat::TyApp>(a)) {
      if (ya->tyvar != fat::as<fat::TyApp>(b)->tyvar) split = false;
    } else if (fat::as<fat::Var>(a)) {
      split = false;  // distinct free variables
    }
  }
  if (!split) {
    out.push_back({prefix, a, b});
    return;
  }
  for (int i = 0; i < fat::child_count(a); ++i) {
    prefix.push_back(i);
    multi_focus(fat::child(a, i), fat::child(bAligned, i), prefix, out, cap);
    prefix.pop_back();
  }
}

// Sum of the differing-region sizes, the chase's progress measure.
int difference_total(const fat::TermRef& a, const fat::TermRef& b) {
  std::vector<Focus> spots;
  Path prefix;
  multi_focus(a, b, prefix, spots, kMaxJoinSpots);
  int total = 0;
  for (const Focus& s : spots)
    total += fat::term_size(s.a) + fat::term_size(s.b);
  return total;
}

// Deterministic walk toward the target, no frontier. Each remaining
// witness step rewrites inside some differing region or at an ancestor
// of one (an elimination or expansion wrapper whose operand is the
// region), so the candidates per iteration are the first pruned redex
// of each region plus the applicable rules on the first region's
// ancestor spine. The plain mode takes the first candidate, which
// tracks the contraction cascades the translation produces. The
// lookahead mode instead takes the candidate that most shrinks the
// remaining difference; that is what finds wrapper collapses, where the
// regions are misaligned and the real step sits above them. Greedy
// either way; a wrong pick just falls through to the searches below.
std::optional<rw::FatTrace> chase(const fat::TermRef& from,
                                  const fat::TermRef& to, RuleSet rules,
                                  int max_steps, bool lookahead) {
  std::unordered_set<std::string> frozen;
  collect_subtree_keys(to, frozen);

  rw::FatTrace tr{from, {}};
  fat::TermRef cur = from;
  for (int n = 0; n < max_steps; ++n) {
    if (fat::alpha_eq(cur, to)) return tr;

    std::vector<Focus> spots;
    Path prefix;
    multi_focus(cur, to, prefix, spots, kMaxSpots);
    if (spots.empty()) return std::nullopt;

    std::vector<Redex> cands;
    for (const Focus& s : spots) {
      std::vector<Redex> inner;
      Path at = s.path;
      active_redexes(fat::subterm_at(cur, s.path), rules, frozen, true, at,
                     inner);
      if (!inner.empty()) cands.push_back(inner.front());
      if (!lookahead && !cands.empty()) break;
    }
    Path up = spots.front().path;
    while (!up.empty()) {
      up.pop_back();
      fat::TermRef anc = fat::subterm_at(cur, up);
      for (unsigned i = 0; i < kRuleCount; ++i) {
        RuleId r = static_cast<RuleId>(i);
        if (is_fat_rule(r) && rules.contains(r) && fat::root_rewrite(r, anc)) {
          cands.push_back({up, r});
          break;
        }
      }
      if (!lookahead && !cands.empty()) break;
    }
    if (cands.empty()) return std::nullopt;

    std::size_t pick = 0;
    if (lookahead) {
      int base = difference_total(cur, to);
      int bestDelta = 0;
      std::size_t best = cands.size();
      for (std::size_t i = 0; i < cands.size(); ++i) {
        fat::TermRef next = fat::step_at(cur, cands[i].pos, cands[i].rule);
        int delta = base - difference_total(next, to);
        if (delta > bestDelta) {
          bestDelta = delta;
          best = i;
        }
      }
      if (best == cands.size()) return std::nullopt;  // nothing shrinks
      pick = best;
    }

    fat::TermRef next = fat::step_at(cur, cands[pick].pos, cands[pick].rule);
    tr.steps.push_back({cands[pick].rule, cands[pick].pos, cur, next});
    cur = next;
  }
  return fat::alpha_eq(cur, to) ? std::optional(std::move(tr)) : std::nullopt;
}

// Breadth-first search over pruned redexes; FIFO order, so witnesses are
// shortest among those the pruning leaves visible.
std::optional<rw::FatTrace> reachable_pruned(const fat::TermRef& from,
                                             const fat::TermRef& to,
                                             RuleSet rules, int max_steps,
                                             std::size_t node_budget) {
  std::string target = fat::alpha_key(to);
  if (fat::alpha_key(from) == target) return rw::FatTrace{from, {}};
  if (max_steps <= 0) return std::nullopt;

  std::unordered_set<std::string> frozen;
  collect_subtree_keys(to, frozen);

  struct Node {
    fat::TermRef term;
    int parent;
    RuleId rule;
    Path pos;
    int depth;
  };
  std::vector<Node> nodes;
  nodes.push_back({from, -1, RuleId::BetaImp, {}, 0});
  std::unordered_set<std::string> seen{fat::alpha_key(from)};

  for (std::size_t qi = 0; qi < nodes.size(); ++qi) {
    if (nodes[qi].depth >= max_steps) continue;
    std::vector<Redex> rxs;
    Path prefix;
    active_redexes(nodes[qi].term, rules, frozen, true, prefix, rxs);
    for (const Redex& rx : rxs) {
      fat::TermRef next = fat::step_at(nodes[qi].term, rx.pos, rx.rule);
      std::string k = fat::alpha_key(next);
      if (k == target) {
        std::vector<rw::Step<rw::FatCalc>> steps;
        steps.push_back({rx.rule, rx.pos, nodes[qi].term, std::move(next)});
        for (std::size_t i = qi; nodes[i].parent >= 0;
             i = static_cast<std::size_t>(nodes[i].parent))
          steps.push_back({nodes[i].rule, nodes[i].pos,
                           nodes[nodes[i].parent].term, nodes[i].term});
        rw::FatTrace tr{from, {}};
        tr.steps.assign(steps.rbegin(), steps.rend());
        return tr;
      }
      if (seen.insert(std::move(k)).second) {
        nodes.push_back(
            {next, static_cast<int>(qi), rx.rule, rx.pos, nodes[qi].depth + 1});
        if (nodes.size() > node_budget) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

// Strategy ladder on one scope pair: the chase in both modes, then the
// pruned breadth-first search with a node budget scaled so its total
// work stays bounded on large scopes, then a small blind search as a
// safety net for cases the freezing loses.
std::optional<rw::FatTrace> ladder_at(const fat::TermRef& a,
                                      const fat::TermRef& b, RuleSet rules,
                                      int max_steps, std::size_t node_budget) {
  std::size_t size = static_cast<std::size_t>(fat::term_size(a)) +
                     static_cast<std::size_t>(fat::term_size(b));
  auto sub = chase(a, b, rules, max_steps, false);
  if (!sub) sub = chase(a, b, rules, max_steps, true);
  if (!sub) {
    std::size_t scaled = std::clamp(kPrunedBudgetWork / std::max<std::size_t>(size, 1),
                                    kPrunedMinNodes, kPrunedNodeBudget);
    sub = reachable_pruned(a, b, rules, max_steps,
                           std::min(node_budget, scaled));
  }
  if (!sub && size <= static_cast<std::size_t>(kBlindMaxFocus))
    sub = rw::reachable<rw::FatCalc>(a, b, rules, max_steps,
                                     std::min(node_budget, kBlindNodeBudget));
  return sub;
}

// Renames b's binder to a's so subterms can be compared and targeted on
// literal free names. nullopt when the nodes cannot be aligned at all:
// different constructors, annotation or index mismatch, distinct free
// variables, or a rename that would capture.
std::optional<fat::TermRef> align_binders(const fat::TermRef& a,
                                          const fat::TermRef& b) {
  if (a->node.index() != b->node.index()) return std::nullopt;
  if (auto* la = fat::as<fat::Lam>(a)) {
    auto* lb = fat::as<fat::Lam>(b);
    if (!fat::type_eq(la->annot, lb->annot)) return std::nullopt;
    if (la->bound == lb->bound) return b;
    if (fat::free_in(la->bound, lb->body)) return std::nullopt;
    return fat::lam(la->bound, lb->annot,
                    fat::subst(fat::var(la->bound), lb->bound, lb->body));
  }
  if (auto* ta = fat::as<fat::TyLam>(a)) {
    auto* tb = fat::as<fat::TyLam>(b);
    if (ta->bound == tb->bound) return b;
    if (fat::type_free_in(ta->bound, tb->body)) return std::nullopt;
    return fat::tylam(ta->bound,
                      fat::subst_type_in_term(ta->bound, tb->bound, tb->body));
  }
  if (auto* pa = fat::as<fat::Proj>(a)) {
    if (pa->index != fat::as<fat::Proj>(b)->index) return std::nullopt;
    return b;
  }
  if (auto* ya = fat::as<fat::TyApp>(a)) {
    if (ya->tyvar != fat::as<fat::TyApp>(b)->tyvar) return std::nullopt;
    return b;
  }
  if (fat::as<fat::Var>(a)) return std::nullopt;  // distinct free variables
  return b;
}

// Witnesses the difference by recursion on the differing spine: the
// ladder on the current subterm pair first, then child pairs one by one.
// Splicing per-child traces in sequence is sound because reduction is
// closed under contexts, and it is exactly what a duplicating
// translation needs: each copy of a contraction cascade is short even
// when their sum is not. A step that moves material across siblings is
// only found by the ladder at their common ancestor, so recursion stops
// where alignment fails. The assembled length still respects the
// caller's step bound, threaded through `remaining`.
bool witness_rec(const fat::TermRef& a, const fat::TermRef& b, Path& prefix,
                 rw::FatTrace& acc, fat::TermRef& cur, int& remaining,
                 RuleSet rules, std::size_t node_budget, bool try_here) {
  if (fat::alpha_eq(a, b)) return true;
  if (remaining <= 0) return false;
  if (try_here) {
    if (auto sub = ladder_at(a, b, rules, remaining, node_budget)) {
      for (const auto& st : sub->steps) {
        Path pos = prefix;
        pos.insert(pos.end(), st.pos.begin(), st.pos.end());
        fat::TermRef next = replace_at(cur, prefix, st.after);
        acc.steps.push_back({st.rule, std::move(pos), cur, next});
        cur = next;
      }
      remaining -= static_cast<int>(sub->steps.size());
      return true;
    }
  }
  auto bAligned = align_binders(a, b);
  if (!bAligned) return false;
  for (int i = 0; i < fat::child_count(a); ++i) {
    prefix.push_back(i);
    bool ok = witness_rec(fat::child(a, i), fat::child(*bAligned, i), prefix,
                          acc, cur, remaining, rules, node_budget, true);
    prefix.pop_back();
    if (!ok) return false;
  }
  return true;
}

std::optional<rw::FatTrace> witness_spotwise(const fat::TermRef& from,
                                             const fat::TermRef& to,
                                             RuleSet rules, int max_steps,
                                             std::size_t node_budget) {
  rw::FatTrace whole{from, {}};
  fat::TermRef cur = from;
  int remaining = max_steps;
  Path prefix;
  if (!witness_rec(from, to, prefix, whole, cur, remaining, rules, node_budget,
                   false))
    return std::nullopt;
  if (!fat::alpha_eq(cur, to)) return std::nullopt;
  return whole;
}

// Runs the ladder confined to the smallest differing subterm pair and
// splices witnesses found there back into the full image. Narrowing can
// cut the witness off from a wrapper it needs (an expanded region that
// only collapses against an eliminator above the focus, and only under
// the full rule set at that), so under `deep` a failed or unspliceable
// focus scope is retried on the whole images, and finally region by
// region.
std::optional<rw::FatTrace> find_witness(const fat::TermRef& from,
                                         const fat::TermRef& to, RuleSet rules,
                                         int max_steps, std::size_t node_budget,
                                         bool deep) {
  Focus f = focus_difference(from, to);
  if (auto sub = ladder_at(f.a, f.b, rules, max_steps, node_budget)) {
    if (f.path.empty()) return sub;
    rw::FatTrace whole{from, {}};
    fat::TermRef cur = from;
    for (const auto& s : sub->steps) {
      Path pos = f.path;
      pos.insert(pos.end(), s.pos.begin(), s.pos.end());
      fat::TermRef next = replace_at(from, f.path, s.after);
      whole.steps.push_back({s.rule, std::move(pos), cur, next});
      cur = next;
    }
    if (fat::alpha_eq(cur, to)) return whole;
  }
  if (!deep) return std::nullopt;
  if (!f.path.empty())
    if (auto sub = ladder_at(from, to, rules, max_steps, node_budget))
      return sub;
  return witness_spotwise(from, to, rules, max_steps, node_budget);
}

// Joins each differing region independently. Reduction is closed under
// contexts, so region-wise common reducts assemble into a common reduct
// of the whole images; far cheaper than normalizing them outright.
// False only means inconclusive (regions truncated, fuel out, or some
// region pair has distinct normal forms the surrounding context might
// still merge); the caller then decides on the whole images.
bool join_spotwise(const fat::TermRef& a, const fat::TermRef& b, int fuel) {
  std::vector<Focus> spots;
  Path prefix;
  multi_focus(a, b, prefix, spots, kMaxJoinSpots);
  if (spots.empty() || spots.size() >= kMaxJoinSpots) return false;
  for (const Focus& s : spots) {
    auto j = rw::join_at_normal_form<rw::FatCalc>(s.a, s.b, RuleSet::fat_all(),
                                                  fuel);
    if (!j.has_value() || !*j) return false;
  }
  return true;
}

// Typechecks every intermediate term of the witness under the translated
// context and checks the type never changes.
bool trace_preserves_types(const fat::Context& fctx, const rw::FatTrace& tr,
                           const fat::TypeRef& expected, std::string& why) {
  for (const auto& step : tr.steps) {
    try {
      fat::TypeRef ty = fat::typecheck(fctx, step.after);
      if (!fat::type_eq(ty, expected)) {
        why = "type changed after " + std::string(rule_name(step.rule)) +
              " at " + show_path(step.pos);
        return false;
      }
    } catch (const fat::TypeError& e) {
      why = "trace step stopped typechecking: " + std::string(e.what());
      return false;
    }
  }
  return true;
}

}  // namespace

SimReport check_simulation(const ipc::Context& ctx, const ipc::TermRef& t,
                           const Redex& redex, const SimOptions& opts) {
  SimReport r;
  r.redex = redex;
  r.before = t;
  r.head = ipc::is_head_step(t, redex.pos, redex.rule);

  ipc::TypeRef srcType = ipc::typecheck(ctx, t);

  try {
    r.after = ipc::step_at(t, redex.pos, redex.rule);
  } catch (const ipc::InvalidPosition& e) {
    r.verdict = {VerdictKind::Failed, 0, "", e.what()};
    return r;
  }

  if (opts.check_types) {
    try {
      ipc::TypeRef afterType = ipc::typecheck(ctx, r.after);
      if (!ipc::type_eq(srcType, afterType)) {
        r.verdict = {VerdictKind::Failed, 0, "",
                     "subject reduction broken: type changed"};
        return r;
      }
    } catch (const ipc::TypeError& e) {
      r.verdict = {VerdictKind::Failed, 0, "",
                   "subject reduction broken: " + std::string(e.what())};
      return r;
    }
  }

  r.img_before = trans::translate(t, opts.kind);
  r.img_after = trans::translate(r.after, opts.kind);

  fat::Context fctx = trans::rp_context(ctx);
  fat::TypeRef imgType = trans::rp_type(srcType);
  if (opts.check_types) {
    try {
      fat::TypeRef tb = fat::typecheck(fctx, r.img_before);
      fat::TypeRef ta = fat::typecheck(fctx, r.img_after);
      if (!fat::type_eq(tb, imgType) || !fat::type_eq(ta, imgType)) {
        r.verdict = {VerdictKind::Failed, 0, "",
                     "image type disagrees with translated source type"};
        return r;
      }
    } catch (const fat::TypeError& e) {
      r.verdict = {VerdictKind::Failed, 0, "",
                   "image does not typecheck: " + std::string(e.what())};
      return r;
    }
  }

  if (fat::alpha_eq(r.img_before, r.img_after)) {
    r.verdict = {VerdictKind::SyntacticIdentity, 0, "", ""};
    return r;
  }

  // Permutation steps have no further recourse under the optimized
  // translation: equality is the whole claim.
  if (is_commute(redex.rule) && opts.kind == trans::Kind::Optimized) {
    r.verdict = {VerdictKind::Failed, 0, "",
                 "commuting conversion image is not alpha-equal"};
    return r;
  }

  RuleSet rules = is_plain_beta(redex.rule) ? RuleSet::fat_beta()
                                            : RuleSet::fat_beta_eta();
  std::string rule_class = is_plain_beta(redex.rule) ? "beta" : "beta_eta";

  auto trace = find_witness(r.img_before, r.img_after, rules, opts.max_steps,
                            opts.node_budget, opts.deep_search);
  if (trace) {
    if (opts.check_types) {
      std::string why;
      if (!trace_preserves_types(fctx, *trace, imgType, why)) {
        r.verdict = {VerdictKind::Failed, 0, "", why};
        return r;
      }
    }
    int n = static_cast<int>(trace->steps.size());
    r.trace = std::move(trace);
    r.verdict = {VerdictKind::Reached, n, rule_class, ""};
    return r;
  }

  if (join_spotwise(r.img_before, r.img_after, opts.join_fuel)) {
    r.verdict = {VerdictKind::JoinedAtNormalForm, 0, rule_class,
                 "differing regions joined independently"};
    return r;
  }
  auto joined = rw::join_at_normal_form<rw::FatCalc>(
      r.img_before, r.img_after, RuleSet::fat_all(), opts.join_fuel);
  if (joined.has_value() && *joined) {
    r.verdict = {VerdictKind::JoinedAtNormalForm, 0, rule_class, ""};
    return r;
  }
  r.verdict = {VerdictKind::Failed, 0, rule_class,
               joined.has_value() ? "images have distinct normal forms"
                                  : "normalization fuel exhausted"};
  return r;
}

bool head_strict(const SimReport& r) {
  return r.head && r.verdict.kind == VerdictKind::Reached &&
         r.verdict.steps >= 1 && !fat::alpha_eq(r.img_before, r.img_after);
}

FuzzStats run_fuzz(const FuzzConfig& cfg) {
  FuzzStats stats;
  for (int i = 0; i < cfg.samples; ++i) {
    fresh::reset();
    gen::Gen g(gen::mix(cfg.seed, static_cast<std::uint64_t>(i)), cfg.gen);
    ipc::Context ctx;
    ipc::TypeRef goal;
    ipc::TermRef t = g.sample(ctx, goal);
    ++stats.samples;

    auto rxs = ipc::redexes(t, cfg.rules);
    if (static_cast<int>(rxs.size()) > cfg.max_redexes_per_term)
      rxs.resize(cfg.max_redexes_per_term);
    for (const Redex& rx : rxs) {
      SimReport rep = check_simulation(ctx, t, rx, cfg.sim);
      ++stats.redexes_checked;
      ++stats.by_rule[static_cast<unsigned>(rx.rule)];
      switch (rep.verdict.kind) {
        case VerdictKind::SyntacticIdentity:
          ++stats.identity;
          break;
        case VerdictKind::Reached:
          ++stats.reached;
          break;
        case VerdictKind::JoinedAtNormalForm:
          ++stats.joined;
          break;
        case VerdictKind::Failed:
          ++stats.failed;
          if (stats.failures.size() < 10)
            stats.failures.push_back(to_json(rep).dump());
          break;
      }
    }
  }
  return stats;
}

nlohmann::ordered_json to_json(const SimReport& r) {
  nlohmann::ordered_json j;
  j["rule"] = std::string(rule_name(r.redex.rule));
  j["pos"] = show_path(r.redex.pos);
  j["head"] = r.head;
  j["before"] = ipc::show(r.before);
  j["after"] = r.after ? ipc::show(r.after) : "";
  j["image_before"] = r.img_before ? fat::show(r.img_before) : "";
  j["image_after"] = r.img_after ? fat::show(r.img_after) : "";
  nlohmann::ordered_json v;
  v["kind"] = std::string(verdict_name(r.verdict.kind));
  if (r.verdict.kind == VerdictKind::Reached) {
    v["steps"] = r.verdict.steps;
    v["rule_class"] = r.verdict.rule_class;
  }
  if (!r.verdict.detail.empty()) v["detail"] = r.verdict.detail;
  j["verdict"] = v;
  if (r.trace) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : r.trace->steps) {
      nlohmann::ordered_json js;
      js["rule"] = std::string(rule_name(s.rule));
      js["pos"] = show_path(s.pos);
      js["term"] = fat::show(s.after);
      steps.push_back(std::move(js));
    }
    j["trace"] = std::move(steps);
  }
  return j;
}

nlohmann::ordered_json to_json(const FuzzStats& s) {
  nlohmann::ordered_json j;
  j["samples"] = s.samples;
  j["redexes_checked"] = s.redexes_checked;
  nlohmann::ordered_json by;
  for (unsigned i = 0; i < kRuleCount; ++i)
    if (s.by_rule[i] > 0)
      by[std::string(rule_name(static_cast<RuleId>(i)))] = s.by_rule[i];
  j["by_rule"] = by;
  j["syntactic_identity"] = s.identity;
  j["reached"] = s.reached;
  j["joined_at_normal_form"] = s.joined;
  j["failed"] = s.failed;
  if (!s.failures.empty()) {
    nlohmann::ordered_json fs = nlohmann::ordered_json::array();
    for (const auto& f : s.failures) fs.push_back(f);
    j["failures"] = fs;
  }
  return j;
}

}  // namespace ipcat::sim
