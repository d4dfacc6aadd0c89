#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ipcat/ipc.hpp"

// Seeded random source terms, type directed so every sample typechecks by
// construction. The moves are tuned to plant redexes of every rule class:
// beta and eta seeds build them outright, and eliminations draw their
// major premise from a case or abort with a configurable bias, which is
// what produces the permutation redex chains.
namespace ipcat::gen {

// splitmix64 step, used to derive independent per-sample seeds.
std::uint64_t mix(std::uint64_t seed, std::uint64_t index);

// Thin wrapper over mt19937_64. Draws are reduced by modulo, which keeps
// the stream identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  int below(int n);
  bool chance(int percent);
  int pick(const std::vector<int>& weights);

 private:
  std::mt19937_64 eng_;
};

struct TypeWeights {
  // Conjunction weight kept low: each /\ leaf in a case result type multiplies
  // the duplication done by the optimized case translation, and with it the
  // length of reduction witnesses.
  int tvar = 7, bottom = 1, imp = 4, conj = 2, disj = 4;
};

struct MoveWeights {
  int axiom = 3;
  int intro = 4;
  int beta_seed = 3;
  int eta_seed = 2;
  int app_elim = 3;
  int proj_elim = 2;
  int case_elim = 4;
  int abort_elim = 2;
};

struct GenConfig {
  int depth = 4;
  int type_depth = 2;
  int extra_context_vars = 2;  // beyond the three guaranteed ones
  int elim_feed_percent = 40;  // bias toward case/abort major premises
  TypeWeights types;
  MoveWeights moves;
};

// One generator instance per sample. Binder names are x0, x1, ... from a
// local counter, disjoint from the g context names and from the w/z/X
// names the translation invents, so nothing ever needs renaming.
class Gen {
 public:
  Gen(std::uint64_t seed, GenConfig cfg) : rng_(seed), cfg_(cfg) {}

  ipc::TypeRef type(int depth);
  // g0 : _|_, g1 : some disjunction and g2 : some implication are always
  // present; term() relies on the _|_ variable for its fallback.
  ipc::Context context();
  ipc::TermRef term(const ipc::Context& ctx, const ipc::TypeRef& goal,
                    int depth);
  // Full pipeline: context, goal type, term of that type.
  ipc::TermRef sample(ipc::Context& ctxOut, ipc::TypeRef& goalOut);

  Rng& rng() { return rng_; }

 private:
  std::string fresh_binder();
  ipc::TermRef canonical(const ipc::Context& ctx, const ipc::TypeRef& goal);
  ipc::TermRef elim_feed(const ipc::Context& ctx, const ipc::TypeRef& goal,
                         int depth);
  ipc::TermRef case_of(const ipc::Context& ctx, const ipc::TypeRef& goal,
                       int depth);

  Rng rng_;
  GenConfig cfg_;
  int next_id_ = 0;
};

}  // namespace ipcat::gen
