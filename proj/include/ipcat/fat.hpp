#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ipcat/rule.hpp"

// Target calculus: System F restricted to atomic universal instantiation.
// Types are X, A -> B, A /\ B and forall X. A; a type application argument
// is always a type variable, which the syntax enforces. Type equality is
// alpha-equivalence (forall binds).
namespace ipcat::fat {

// ---------------------------------------------------------------- types

struct Type;
using TypeRef = std::shared_ptr<const Type>;

struct TVar {
  std::string name;
};
struct TImp {
  TypeRef left, right;
};
struct TAnd {
  TypeRef left, right;
};
struct TForall {
  std::string bound;
  TypeRef body;
};

struct Type {
  std::variant<TVar, TImp, TAnd, TForall> node;
};

TypeRef tvar(std::string name);
TypeRef imp(TypeRef l, TypeRef r);
TypeRef conj(TypeRef l, TypeRef r);
TypeRef forall(std::string bound, TypeRef body);

template <class T>
const T* as(const TypeRef& t) {
  return std::get_if<T>(&t->node);
}

bool type_eq(const TypeRef& a, const TypeRef& b);  // alpha-equivalence
std::set<std::string> free_type_vars(const TypeRef& t);
// [y/x]a where y is a type variable name.
TypeRef subst_type(const std::string& y, const std::string& x,
                   const TypeRef& a);
std::string show(const TypeRef& t);

// ---------------------------------------------------------------- terms

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
struct TyLam {
  std::string bound;
  TermRef body;
};
struct TyApp {
  TermRef fun;
  std::string tyvar;  // atomic instantiation only
};

struct Term {
  std::variant<Var, Lam, App, Pair, Proj, TyLam, TyApp> node;
};

TermRef var(std::string name);
TermRef lam(std::string x, TypeRef annot, TermRef body);
TermRef app(TermRef fun, TermRef arg);
TermRef pair(TermRef fst, TermRef snd);
TermRef proj(int index, TermRef arg);
TermRef tylam(std::string bound, TermRef body);
TermRef tyapp(TermRef fun, std::string tyvar);

template <class T>
const T* as(const TermRef& t) {
  return std::get_if<T>(&t->node);
}

std::set<std::string> free_vars(const TermRef& t);
bool free_in(const std::string& x, const TermRef& t);
// Free type variables of annotations and type applications.
std::set<std::string> free_type_vars(const TermRef& t);
bool type_free_in(const std::string& x, const TermRef& t);
int term_size(const TermRef& t);

// [n/x]m. Renames both term binders capturing a free variable of n and
// type binders capturing a free type variable of n.
TermRef subst(const TermRef& n, const std::string& x, const TermRef& m);
// [y/X]m on all annotations and type applications.
TermRef subst_type_in_term(const std::string& y, const std::string& x,
                           const TermRef& m);

bool alpha_eq(const TermRef& a, const TermRef& b);
std::string alpha_key(const TermRef& t);
std::string type_key(const TypeRef& t);

std::string show(const TermRef& t);

// ---------------------------------------------------------------- typing

class Context {
 public:
  void add(std::string name, TypeRef type);
  const TypeRef* lookup(const std::string& name) const;
  const std::vector<std::pair<std::string, TypeRef>>& decls() const {
    return decls_;
  }

 private:
  std::vector<std::pair<std::string, TypeRef>> decls_;
};

struct TypeError : std::runtime_error {
  enum class Kind {
    UnboundVariable,
    TypeMismatch,
    ForallProvisoViolated,
    NonAtomicInstantiation,
  };
  TypeError(Kind k, Path p, const std::string& msg)
      : std::runtime_error(msg), kind(k), pos(std::move(p)) {}
  Kind kind;
  Path pos;
};

// Syntax-directed. A type abstraction /\X. M is checked literally: if X is
// free in some context type the proviso fails, no silent renaming.
TypeRef typecheck(const Context& ctx, const TermRef& t);

// -------------------------------------------------------------- reduction

struct InvalidPosition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int child_count(const TermRef& t);
TermRef child(const TermRef& t, int i);
TermRef with_child(const TermRef& t, int i, TermRef c);
TermRef subterm_at(const TermRef& t, const Path& pos);

std::optional<TermRef> root_rewrite(RuleId rule, const TermRef& t);
std::vector<Redex> redexes(const TermRef& t, RuleSet rules);
TermRef step_at(const TermRef& t, const Path& pos, RuleId rule);

}  // namespace ipcat::fat
