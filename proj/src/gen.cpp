#include "ipcat/gen.hpp"

#include <array>

namespace ipcat::gen {

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int Rng::below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % n); }

bool Rng::chance(int percent) { return below(100) < percent; }

int Rng::pick(const std::vector<int>& weights) {
  int total = 0;
  for (int w : weights) total += w;
  int roll = below(total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    roll -= weights[i];
    if (roll < 0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

namespace {
const std::array<const char*, 3> kAtomPool = {"A", "B", "C"};
}

ipc::TypeRef Gen::type(int depth) {
  const TypeWeights& w = cfg_.types;
  if (depth <= 0) {
    if (rng_.below(w.tvar + w.bottom) < w.tvar)
      return ipc::tvar(kAtomPool[rng_.below(3)]);
    return ipc::bot();
  }
  switch (rng_.pick({w.tvar, w.bottom, w.imp, w.conj, w.disj})) {
    case 0:
      return ipc::tvar(kAtomPool[rng_.below(3)]);
    case 1:
      return ipc::bot();
    case 2:
      return ipc::imp(type(depth - 1), type(depth - 1));
    case 3:
      return ipc::conj(type(depth - 1), type(depth - 1));
    default:
      return ipc::disj(type(depth - 1), type(depth - 1));
  }
}

ipc::Context Gen::context() {
  ipc::Context ctx;
  ctx.add("g0", ipc::bot());
  ctx.add("g1", ipc::disj(type(cfg_.type_depth - 1), type(cfg_.type_depth - 1)));
  ctx.add("g2", ipc::imp(type(cfg_.type_depth - 1), type(cfg_.type_depth - 1)));
  for (int i = 0; i < cfg_.extra_context_vars; ++i)
    ctx.add("g" + std::to_string(3 + i), type(cfg_.type_depth));
  return ctx;
}

std::string Gen::fresh_binder() { return "x" + std::to_string(next_id_++); }

// Smallest inhabitant, leaning on the guaranteed _|_ variable for atoms.
ipc::TermRef Gen::canonical(const ipc::Context& ctx, const ipc::TypeRef& goal) {
  for (auto it = ctx.decls().rbegin(); it != ctx.decls().rend(); ++it)
    if (ipc::type_eq(it->second, goal)) return ipc::var(it->first);
  if (auto* i = ipc::as<ipc::TImp>(goal)) {
    std::string x = fresh_binder();
    ipc::Context inner = ctx;
    inner.add(x, i->left);
    return ipc::lam(x, i->left, canonical(inner, i->right));
  }
  if (auto* a = ipc::as<ipc::TAnd>(goal))
    return ipc::pair(canonical(ctx, a->left), canonical(ctx, a->right));
  if (auto* o = ipc::as<ipc::TOr>(goal))
    return ipc::inj(1, canonical(ctx, o->left), o->left, o->right);
  for (const auto& [name, ty] : ctx.decls())
    if (ipc::as<ipc::TBot>(ty)) return ipc::abt(ipc::var(name), goal);
  throw std::logic_error("generator context lacks a _|_ variable");
}

ipc::TermRef Gen::case_of(const ipc::Context& ctx, const ipc::TypeRef& goal,
                          int depth) {
  // Prefer a disjunction already in scope so the scrutinee can be small.
  std::vector<ipc::TypeRef> inScope;
  for (const auto& [name, ty] : ctx.decls())
    if (ipc::as<ipc::TOr>(ty)) inScope.push_back(ty);
  ipc::TypeRef orType =
      !inScope.empty() && rng_.chance(70)
          ? inScope[rng_.below(static_cast<int>(inScope.size()))]
          : ipc::disj(type(1), type(1));
  auto* o = ipc::as<ipc::TOr>(orType);
  ipc::TermRef scrut = elim_feed(ctx, orType, depth - 1);
  std::string x = fresh_binder(), y = fresh_binder();
  ipc::Context lctx = ctx, rctx = ctx;
  lctx.add(x, o->left);
  rctx.add(y, o->right);
  return ipc::cse(scrut, x, o->left, term(lctx, goal, depth - 1), y, o->right,
                  term(rctx, goal, depth - 1), goal);
}

// Major premise of an elimination. The bias toward case and abort shapes
// is what seeds the permutation redexes.
ipc::TermRef Gen::elim_feed(const ipc::Context& ctx, const ipc::TypeRef& goal,
                            int depth) {
  if (depth > 0 && rng_.chance(cfg_.elim_feed_percent)) {
    if (rng_.below(2) == 0) return case_of(ctx, goal, depth);
    return ipc::abt(term(ctx, ipc::bot(), depth - 1), goal);
  }
  return term(ctx, goal, depth);
}

ipc::TermRef Gen::term(const ipc::Context& ctx, const ipc::TypeRef& goal,
                       int depth) {
  if (depth <= 0) return canonical(ctx, goal);

  std::vector<std::string> axioms;
  for (const auto& [name, ty] : ctx.decls())
    if (ipc::type_eq(ty, goal)) axioms.push_back(name);
  bool decomposable = ipc::as<ipc::TImp>(goal) || ipc::as<ipc::TAnd>(goal) ||
                      ipc::as<ipc::TOr>(goal);

  const MoveWeights& w = cfg_.moves;
  enum { Ax, Intro, BetaSeed, EtaSeed, AppElim, ProjElim, CaseElim, AbortElim };
  std::vector<int> moves, weights;
  auto offer = [&](int m, int weight) {
    moves.push_back(m);
    weights.push_back(weight);
  };
  if (!axioms.empty()) offer(Ax, w.axiom);
  if (decomposable) offer(Intro, w.intro);
  offer(BetaSeed, w.beta_seed);
  if (decomposable) offer(EtaSeed, w.eta_seed);
  offer(AppElim, w.app_elim);
  offer(ProjElim, w.proj_elim);
  offer(CaseElim, w.case_elim);
  offer(AbortElim, w.abort_elim);

  switch (moves[rng_.pick(weights)]) {
    case Ax:
      return ipc::var(axioms[rng_.below(static_cast<int>(axioms.size()))]);
    case Intro: {
      if (auto* i = ipc::as<ipc::TImp>(goal)) {
        std::string x = fresh_binder();
        ipc::Context inner = ctx;
        inner.add(x, i->left);
        return ipc::lam(x, i->left, term(inner, i->right, depth - 1));
      }
      if (auto* a = ipc::as<ipc::TAnd>(goal))
        return ipc::pair(term(ctx, a->left, depth - 1),
                         term(ctx, a->right, depth - 1));
      auto* o = ipc::as<ipc::TOr>(goal);
      int side = 1 + rng_.below(2);
      return ipc::inj(side, term(ctx, side == 1 ? o->left : o->right, depth - 1),
                      o->left, o->right);
    }
    case BetaSeed:
      switch (rng_.below(3)) {
        case 0: {
          ipc::TypeRef a = type(1);
          std::string x = fresh_binder();
          ipc::Context inner = ctx;
          inner.add(x, a);
          ipc::TermRef body = term(inner, goal, depth - 1);
          return ipc::app(ipc::lam(x, a, body), term(ctx, a, depth - 1));
        }
        case 1: {
          ipc::TypeRef other = type(1);
          if (rng_.below(2) == 0)
            return ipc::proj(1, ipc::pair(term(ctx, goal, depth - 1),
                                          term(ctx, other, depth - 1)));
          return ipc::proj(2, ipc::pair(term(ctx, other, depth - 1),
                                        term(ctx, goal, depth - 1)));
        }
        default: {
          ipc::TypeRef a = type(1), b = type(1);
          int side = 1 + rng_.below(2);
          ipc::TermRef arg = term(ctx, side == 1 ? a : b, depth - 1);
          std::string x = fresh_binder(), y = fresh_binder();
          ipc::Context lctx = ctx, rctx = ctx;
          lctx.add(x, a);
          rctx.add(y, b);
          return ipc::cse(ipc::inj(side, arg, a, b), x, a,
                          term(lctx, goal, depth - 1), y, b,
                          term(rctx, goal, depth - 1), goal);
        }
      }
    case EtaSeed: {
      // The subject is generated first, in the outer context, so the new
      // binder cannot occur free in it and the eta redex is genuine.
      ipc::TermRef m = term(ctx, goal, depth - 1);
      if (auto* i = ipc::as<ipc::TImp>(goal)) {
        std::string x = fresh_binder();
        return ipc::lam(x, i->left, ipc::app(m, ipc::var(x)));
      }
      if (ipc::as<ipc::TAnd>(goal))
        return ipc::pair(ipc::proj(1, m), ipc::proj(2, m));
      auto* o = ipc::as<ipc::TOr>(goal);
      std::string x = fresh_binder(), y = fresh_binder();
      return ipc::cse(m, x, o->left,
                      ipc::inj(1, ipc::var(x), o->left, o->right), y, o->right,
                      ipc::inj(2, ipc::var(y), o->left, o->right), goal);
    }
    case AppElim: {
      ipc::TypeRef a = type(1);
      ipc::TermRef f = elim_feed(ctx, ipc::imp(a, goal), depth - 1);
      return ipc::app(f, term(ctx, a, depth - 1));
    }
    case ProjElim: {
      ipc::TypeRef other = type(1);
      if (rng_.below(2) == 0)
        return ipc::proj(1, elim_feed(ctx, ipc::conj(goal, other), depth - 1));
      return ipc::proj(2, elim_feed(ctx, ipc::conj(other, goal), depth - 1));
    }
    case CaseElim:
      return case_of(ctx, goal, depth);
    default:
      return ipc::abt(elim_feed(ctx, ipc::bot(), depth - 1), goal);
  }
}

ipc::TermRef Gen::sample(ipc::Context& ctxOut, ipc::TypeRef& goalOut) {
  ctxOut = context();
  goalOut = type(cfg_.type_depth);
  return term(ctxOut, goalOut, cfg_.depth);
}

}  // namespace ipcat::gen
