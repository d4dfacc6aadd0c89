#pragma once

#include <string>
#include <vector>

#include "ipcat/fat.hpp"
#include "ipcat/ipc.hpp"

// Translation of source proofs into the atomic polymorphic calculus.
// Disjunction and absurdity become their polymorphic second-order
// encodings; the Optimized kind routes every elimination through the
// contracting applicators below, which is what collapses the source
// commuting conversions to syntactic identity.
namespace ipcat::trans {

enum class Kind { Optimized, Baseline };

// An argument for a chain of eliminations: a term, a projection side, or
// an (atomic) type variable.
struct AtArg {
  enum class K { Term, Proj, TypeVar };
  K k;
  fat::TermRef term;  // K::Term
  int index = 0;      // K::Proj
  std::string tyvar;  // K::TypeVar

  static AtArg term_arg(fat::TermRef t);
  static AtArg proj_arg(int index);
  static AtArg type_var(std::string name);
};

// Type translation: atoms map to themselves, _|_ to forall X. X, and
// A \/ B to forall X. ((A -> X) /\ (B -> X)) -> X with X fresh.
fat::TypeRef rp_type(const ipc::TypeRef& a);
fat::Context rp_context(const ipc::Context& ctx);

// m @ u: contracts on the nose when the head constructor matches
// (lambda applied to a term, pair projected, type abstraction
// instantiated), otherwise builds the plain elimination.
fat::TermRef at_apply(const fat::TermRef& m, const AtArg& u);

// Expanded constructors. exp_lam(x, A, m) is \w:A. (\x:A. m) w with w
// fresh; the inner redex blocks at_apply from digging into m. exp_pair
// is the analogous <p.1, p.2> over p = <m, n>.
fat::TermRef exp_lam(const std::string& x, const fat::TypeRef& annot,
                     const fat::TermRef& m);
fat::TermRef exp_pair(const fat::TermRef& m, const fat::TermRef& n);

// Injection witness /\X. \w:(a -> X) /\ (b -> X). w.i m, X and w fresh.
fat::TermRef inj_hat(int index, const fat::TermRef& m, const fat::TypeRef& a,
                     const fat::TypeRef& b);

// Case witness, by recursion on the result type c. Kind selects whether
// branch eliminations go through at_apply or the plain constructors.
fat::TermRef case_opt(const fat::TermRef& m, const std::string& x,
                      const fat::TypeRef& xAnnot, const fat::TermRef& p,
                      const std::string& y, const fat::TypeRef& yAnnot,
                      const fat::TermRef& q, const fat::TypeRef& c, Kind kind);

// Absurdity witness, by recursion on the result type.
fat::TermRef abort_opt(const fat::TermRef& m, const fat::TypeRef& a,
                       Kind kind);

// Whole-term translation. Accepts open terms; annotations carry all the
// type information needed.
fat::TermRef translate(const ipc::TermRef& t, Kind kind);

// Bounded probes of the elimination-chain predicates. Each enumerates
// every argument vector over pool up to maxLen and inspects the chain
// results; they under-approximate the unbounded predicates.
std::vector<AtArg> default_pool();
// No chain result is the variable z.
bool is_z_special_bounded(const fat::TermRef& p, const std::string& z,
                          const std::vector<AtArg>& pool, int maxLen);
// Any chain result that is a variable is free in p.
bool is_var_special_bounded(const fat::TermRef& p,
                            const std::vector<AtArg>& pool, int maxLen);
// Any chain result that is a pair has components with equal free vars.
bool is_pair_special_bounded(const fat::TermRef& p,
                             const std::vector<AtArg>& pool, int maxLen);

}  // namespace ipcat::trans
