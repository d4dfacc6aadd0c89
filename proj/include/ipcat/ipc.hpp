#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ipcat/rule.hpp"

// Source calculus: full intuitionistic propositional logic as a typed
// lambda calculus with pairs, sums and an empty type. Terms are immutable
// shared trees; equality everywhere means alpha-equivalence.
namespace ipcat::ipc {

// ---------------------------------------------------------------- formulas

struct Type;
using TypeRef = std::shared_ptr<const Type>;

struct TVar {
  std::string name;
};
struct TBot {};
struct TImp {
  TypeRef left, right;
};
struct TAnd {
  TypeRef left, right;
};
struct TOr {
  TypeRef left, right;
};

struct Type {
  std::variant<TVar, TBot, TImp, TAnd, TOr> node;
};

TypeRef tvar(std::string name);
TypeRef bot();
TypeRef imp(TypeRef l, TypeRef r);
TypeRef conj(TypeRef l, TypeRef r);
TypeRef disj(TypeRef l, TypeRef r);

template <class T>
const T* as(const TypeRef& t) {
  return std::get_if<T>(&t->node);
}

// Types have no binders, so equality is plain structural equality.
bool type_eq(const TypeRef& a, const TypeRef& b);
std::string show(const TypeRef& t);

// ------------------------------------------------------------------- terms

struct Term;
using TermRef = std::shared_ptr<const Term>;

struct Var {
  std::string name;
};
struct Lam {
  std::string bound;
  TypeRef annot;
  TermRef body;
};
struct App {
  TermRef fun, arg;
};
struct Pair {
  TermRef fst, snd;
};
struct Proj {
  int index;  // 1 or 2
  TermRef arg;
};
struct Inj {
  int index;  // 1 = inl, 2 = inr
  TermRef arg;
  TypeRef left, right;
};
struct Case {
  TermRef scrut;
  std::string x;
  TypeRef xAnnot;
  TermRef left;
  std::string y;
  TypeRef yAnnot;
  TermRef right;
  TypeRef result;
};
struct Abort {
  TermRef arg;
  TypeRef result;
};

struct Term {
  std::variant<Var, Lam, App, Pair, Proj, Inj, Case, Abort> node;
};

TermRef var(std::string name);
TermRef lam(std::string x, TypeRef annot, TermRef body);
TermRef app(TermRef fun, TermRef arg);
TermRef pair(TermRef fst, TermRef snd);
TermRef proj(int index, TermRef arg);
TermRef inj(int index, TermRef arg, TypeRef left, TypeRef right);
TermRef cse(TermRef scrut, std::string x, TypeRef xAnnot, TermRef left,
            std::string y, TypeRef yAnnot, TermRef right, TypeRef result);
TermRef abt(TermRef arg, TypeRef result);

template <class T>
const T* as(const TermRef& t) {
  return std::get_if<T>(&t->node);
}

std::set<std::string> free_vars(const TermRef& t);
bool free_in(const std::string& x, const TermRef& t);
int term_size(const TermRef& t);

// [n/x]m. Capture-avoiding; renames a binder only when it would capture a
// free variable of n, choosing the first unused name so the function is
// pure (independent of the global fresh counter).
TermRef subst(const TermRef& n, const std::string& x, const TermRef& m);

bool alpha_eq(const TermRef& a, const TermRef& b);
// Canonical spelling: two terms get the same key iff they are alpha-equal.
std::string alpha_key(const TermRef& t);

std::string show(const TermRef& t);

// ----------------------------------------------------------------- typing

class Context {
 public:
  // Throws std::invalid_argument if the name is already declared.
  void add(std::string name, TypeRef type);
  const TypeRef* lookup(const std::string& name) const;
  const std::vector<std::pair<std::string, TypeRef>>& decls() const {
    return decls_;
  }

 private:
  std::vector<std::pair<std::string, TypeRef>> decls_;
};

struct TypeError : std::runtime_error {
  enum class Kind { UnboundVariable, TypeMismatch };
  TypeError(Kind k, Path p, const std::string& msg)
      : std::runtime_error(msg), kind(k), pos(std::move(p)) {}
  Kind kind;
  Path pos;
};

TypeRef typecheck(const Context& ctx, const TermRef& t);

// -------------------------------------------------------------- reduction

struct InvalidPosition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int child_count(const TermRef& t);
TermRef child(const TermRef& t, int i);  // throws InvalidPosition
TermRef with_child(const TermRef& t, int i, TermRef c);
TermRef subterm_at(const TermRef& t, const Path& pos);

// Tries one rule at the root. nullopt means the term is not a redex for
// that rule; it is a signal, not an error. Rules that move binders over
// new material (pi_imp, pi_or) freshen the binders first when needed.
std::optional<TermRef> root_rewrite(RuleId rule, const TermRef& t);

// All redexes among the given rules, outside-in and left-to-right; rules
// at the same position come in enumeration order.
std::vector<Redex> redexes(const TermRef& t, RuleSet rules);

TermRef step_at(const TermRef& t, const Path& pos, RuleId rule);

// True iff rule is a beta rule and the position is reachable from the
// root through head positions only: body of a lambda, function side of an
// application, either pair component, the argument of an injection or
// abort, and the scrutinee of a case. Projections, application arguments
// and case branches are not head positions.
bool is_head_step(const TermRef& t, const Path& pos, RuleId rule);

}  // namespace ipcat::ipc
