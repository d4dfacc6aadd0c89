#include "ipcat/fat.hpp"

#include <algorithm>

namespace ipcat::fat {

// ---------------------------------------------------------------- types

TypeRef tvar(std::string name) {
  return std::make_shared<Type>(Type{TVar{std::move(name)}});
}
TypeRef imp(TypeRef l, TypeRef r) {
  return std::make_shared<Type>(Type{TImp{std::move(l), std::move(r)}});
}
TypeRef conj(TypeRef l, TypeRef r) {
  return std::make_shared<Type>(Type{TAnd{std::move(l), std::move(r)}});
}
TypeRef forall(std::string bound, TypeRef body) {
  return std::make_shared<Type>(
      Type{TForall{std::move(bound), std::move(body)}});
}

namespace {

struct APair {
  std::string a, b;
};

bool atvar_eq(const std::string& a, const std::string& b,
              const std::vector<APair>& env) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    bool ma = it->a == a;
    bool mb = it->b == b;
    if (ma || mb) return ma && mb;
  }
  return a == b;
}

bool type_aeq(const TypeRef& a, const TypeRef& b, std::vector<APair>& env) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* v = as<TVar>(a)) return atvar_eq(v->name, as<TVar>(b)->name, env);
  if (auto* i = as<TImp>(a)) {
    auto* j = as<TImp>(b);
    return type_aeq(i->left, j->left, env) && type_aeq(i->right, j->right, env);
  }
  if (auto* i = as<TAnd>(a)) {
    auto* j = as<TAnd>(b);
    return type_aeq(i->left, j->left, env) && type_aeq(i->right, j->right, env);
  }
  auto* f = as<TForall>(a);
  auto* g = as<TForall>(b);
  env.push_back({f->bound, g->bound});
  bool ok = type_aeq(f->body, g->body, env);
  env.pop_back();
  return ok;
}

void collect_ftv(const TypeRef& t, std::vector<std::string>& bound,
                 std::set<std::string>& out) {
  if (auto* v = as<TVar>(t)) {
    if (std::find(bound.rbegin(), bound.rend(), v->name) == bound.rend())
      out.insert(v->name);
    return;
  }
  if (auto* i = as<TImp>(t)) {
    collect_ftv(i->left, bound, out);
    collect_ftv(i->right, bound, out);
    return;
  }
  if (auto* i = as<TAnd>(t)) {
    collect_ftv(i->left, bound, out);
    collect_ftv(i->right, bound, out);
    return;
  }
  auto* f = as<TForall>(t);
  bound.push_back(f->bound);
  collect_ftv(f->body, bound, out);
  bound.pop_back();
}

std::string strip_digits(const std::string& s) {
  std::size_t end = s.size();
  while (end > 0 && s[end - 1] >= '0' && s[end - 1] <= '9') --end;
  return end == 0 ? std::string("v") : s.substr(0, end);
}

std::string rename_candidate(const std::string& old,
                             const std::set<std::string>& avoid) {
  std::string prefix = strip_digits(old);
  for (int k = 0;; ++k) {
    std::string c = prefix + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

}  // namespace

bool type_eq(const TypeRef& a, const TypeRef& b) {
  if (a.get() == b.get()) return true;
  std::vector<APair> env;
  return type_aeq(a, b, env);
}

std::set<std::string> free_type_vars(const TypeRef& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_ftv(t, bound, out);
  return out;
}

TypeRef subst_type(const std::string& y, const std::string& x,
                   const TypeRef& a) {
  if (!free_type_vars(a).count(x)) return a;
  if (auto* v = as<TVar>(a)) return v->name == x ? tvar(y) : a;
  if (auto* i = as<TImp>(a))
    return imp(subst_type(y, x, i->left), subst_type(y, x, i->right));
  if (auto* i = as<TAnd>(a))
    return conj(subst_type(y, x, i->left), subst_type(y, x, i->right));
  auto* f = as<TForall>(a);
  // x is free in a, so f->bound != x
  if (f->bound == y) {
    std::set<std::string> avoid = free_type_vars(f->body);
    avoid.insert(y);
    avoid.insert(x);
    std::string nb = rename_candidate(f->bound, avoid);
    return forall(nb, subst_type(y, x, subst_type(nb, f->bound, f->body)));
  }
  return forall(f->bound, subst_type(y, x, f->body));
}

namespace {

// Precedence: -> and forall are 1, /\ is 3, atoms 4.
void show_type(const TypeRef& t, int prec, std::string& out) {
  if (auto* v = as<TVar>(t)) {
    out += v->name;
    return;
  }
  if (auto* i = as<TImp>(t)) {
    bool wrap = prec > 1;
    if (wrap) out += '(';
    show_type(i->left, 2, out);
    out += " -> ";
    show_type(i->right, 1, out);
    if (wrap) out += ')';
    return;
  }
  if (auto* a = as<TAnd>(t)) {
    bool wrap = prec > 3;
    if (wrap) out += '(';
    show_type(a->left, 3, out);
    out += " /\\ ";
    show_type(a->right, 4, out);
    if (wrap) out += ')';
    return;
  }
  auto* f = as<TForall>(t);
  bool wrap = prec > 1;
  if (wrap) out += '(';
  out += "forall ";
  out += f->bound;
  out += ". ";
  show_type(f->body, 1, out);
  if (wrap) out += ')';
}

void key_tvar(const std::string& name, const std::vector<std::string>& env,
              std::string& out) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (*it == name) {
      out += '%';
      out += std::to_string(env.rend() - it - 1);
      return;
    }
  }
  out += name;
}

void key_type(const TypeRef& t, std::vector<std::string>& tenv,
              std::string& out) {
  if (auto* v = as<TVar>(t)) {
    key_tvar(v->name, tenv, out);
    return;
  }
  if (auto* i = as<TImp>(t)) {
    out += "(-> ";
    key_type(i->left, tenv, out);
    out += ' ';
    key_type(i->right, tenv, out);
    out += ')';
    return;
  }
  if (auto* i = as<TAnd>(t)) {
    out += "(& ";
    key_type(i->left, tenv, out);
    out += ' ';
    key_type(i->right, tenv, out);
    out += ')';
    return;
  }
  auto* f = as<TForall>(t);
  out += "(A ";
  tenv.push_back(f->bound);
  key_type(f->body, tenv, out);
  tenv.pop_back();
  out += ')';
}

}  // namespace

std::string show(const TypeRef& t) {
  std::string out;
  show_type(t, 0, out);
  return out;
}

std::string type_key(const TypeRef& t) {
  std::string out;
  std::vector<std::string> tenv;
  key_type(t, tenv, out);
  return out;
}

// ---------------------------------------------------------------- terms

TermRef var(std::string name) {
  return std::make_shared<Term>(Term{Var{std::move(name)}});
}
TermRef lam(std::string x, TypeRef annot, TermRef body) {
  return std::make_shared<Term>(
      Term{Lam{std::move(x), std::move(annot), std::move(body)}});
}
TermRef app(TermRef fun, TermRef arg) {
  return std::make_shared<Term>(Term{App{std::move(fun), std::move(arg)}});
}
TermRef pair(TermRef fst, TermRef snd) {
  return std::make_shared<Term>(Term{Pair{std::move(fst), std::move(snd)}});
}
TermRef proj(int index, TermRef arg) {
  return std::make_shared<Term>(Term{Proj{index, std::move(arg)}});
}
TermRef tylam(std::string bound, TermRef body) {
  return std::make_shared<Term>(Term{TyLam{std::move(bound), std::move(body)}});
}
TermRef tyapp(TermRef fun, std::string tyvar) {
  return std::make_shared<Term>(Term{TyApp{std::move(fun), std::move(tyvar)}});
}

namespace {

void collect_free_term(const TermRef& t, std::vector<std::string>& bound,
                       std::set<std::string>& out) {
  if (auto* v = as<Var>(t)) {
    if (std::find(bound.rbegin(), bound.rend(), v->name) == bound.rend())
      out.insert(v->name);
    return;
  }
  if (auto* l = as<Lam>(t)) {
    bound.push_back(l->bound);
    collect_free_term(l->body, bound, out);
    bound.pop_back();
    return;
  }
  if (auto* a = as<App>(t)) {
    collect_free_term(a->fun, bound, out);
    collect_free_term(a->arg, bound, out);
    return;
  }
  if (auto* p = as<Pair>(t)) {
    collect_free_term(p->fst, bound, out);
    collect_free_term(p->snd, bound, out);
    return;
  }
  if (auto* p = as<Proj>(t)) {
    collect_free_term(p->arg, bound, out);
    return;
  }
  if (auto* l = as<TyLam>(t)) {
    collect_free_term(l->body, bound, out);
    return;
  }
  collect_free_term(as<TyApp>(t)->fun, bound, out);
}

void collect_ftv_term(const TermRef& t, std::vector<std::string>& tbound,
                      std::set<std::string>& out) {
  if (as<Var>(t)) return;
  if (auto* l = as<Lam>(t)) {
    collect_ftv(l->annot, tbound, out);
    collect_ftv_term(l->body, tbound, out);
    return;
  }
  if (auto* a = as<App>(t)) {
    collect_ftv_term(a->fun, tbound, out);
    collect_ftv_term(a->arg, tbound, out);
    return;
  }
  if (auto* p = as<Pair>(t)) {
    collect_ftv_term(p->fst, tbound, out);
    collect_ftv_term(p->snd, tbound, out);
    return;
  }
  if (auto* p = as<Proj>(t)) {
    collect_ftv_term(p->arg, tbound, out);
    return;
  }
  if (auto* l = as<TyLam>(t)) {
    tbound.push_back(l->bound);
    collect_ftv_term(l->body, tbound, out);
    tbound.pop_back();
    return;
  }
  auto* a = as<TyApp>(t);
  collect_ftv_term(a->fun, tbound, out);
  if (std::find(tbound.rbegin(), tbound.rend(), a->tyvar) == tbound.rend())
    out.insert(a->tyvar);
}

}  // namespace

std::set<std::string> free_vars(const TermRef& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free_term(t, bound, out);
  return out;
}

bool free_in(const std::string& x, const TermRef& t) {
  if (auto* v = as<Var>(t)) return v->name == x;
  if (auto* l = as<Lam>(t)) return l->bound != x && free_in(x, l->body);
  if (auto* a = as<App>(t)) return free_in(x, a->fun) || free_in(x, a->arg);
  if (auto* p = as<Pair>(t)) return free_in(x, p->fst) || free_in(x, p->snd);
  if (auto* p = as<Proj>(t)) return free_in(x, p->arg);
  if (auto* l = as<TyLam>(t)) return free_in(x, l->body);
  return free_in(x, as<TyApp>(t)->fun);
}

std::set<std::string> free_type_vars(const TermRef& t) {
  std::set<std::string> out;
  std::vector<std::string> tbound;
  collect_ftv_term(t, tbound, out);
  return out;
}

bool type_free_in(const std::string& x, const TermRef& t) {
  return free_type_vars(t).count(x) != 0;
}

int term_size(const TermRef& t) {
  int n = 1;
  for (int i = 0; i < child_count(t); ++i) n += term_size(child(t, i));
  return n;
}

// ------------------------------------------------------------ substitution

namespace {

struct SubstTerm {
  const TermRef& n;
  const std::string& x;
  std::set<std::string> nFree;
  std::set<std::string> nTyFree;

  TermRef go(const TermRef& m) {
    if (!free_in(x, m)) return m;
    if (as<Var>(m)) return n;
    if (auto* l = as<Lam>(m)) {
      std::string b = l->bound;
      TermRef body = l->body;
      if (nFree.count(b)) {
        std::set<std::string> avoid = nFree;
        auto bf = free_vars(body);
        avoid.insert(bf.begin(), bf.end());
        avoid.insert(x);
        b = rename_candidate(l->bound, avoid);
        body = subst(var(b), l->bound, body);
      }
      return lam(b, l->annot, go(body));
    }
    if (auto* a = as<App>(m)) return app(go(a->fun), go(a->arg));
    if (auto* p = as<Pair>(m)) return pair(go(p->fst), go(p->snd));
    if (auto* p = as<Proj>(m)) return proj(p->index, go(p->arg));
    if (auto* l = as<TyLam>(m)) {
      std::string b = l->bound;
      TermRef body = l->body;
      if (nTyFree.count(b)) {
        // the type binder would capture a free type variable of n
        std::set<std::string> avoid = nTyFree;
        auto bf = free_type_vars(body);
        avoid.insert(bf.begin(), bf.end());
        b = rename_candidate(l->bound, avoid);
        body = subst_type_in_term(b, l->bound, body);
      }
      return tylam(b, go(body));
    }
    auto* a = as<TyApp>(m);
    return tyapp(go(a->fun), a->tyvar);
  }
};

}  // namespace

TermRef subst(const TermRef& n, const std::string& x, const TermRef& m) {
  SubstTerm s{n, x, free_vars(n), free_type_vars(n)};
  return s.go(m);
}

TermRef subst_type_in_term(const std::string& y, const std::string& x,
                           const TermRef& m) {
  if (!type_free_in(x, m)) return m;
  if (as<Var>(m)) return m;
  if (auto* l = as<Lam>(m))
    return lam(l->bound, subst_type(y, x, l->annot),
               subst_type_in_term(y, x, l->body));
  if (auto* a = as<App>(m))
    return app(subst_type_in_term(y, x, a->fun),
               subst_type_in_term(y, x, a->arg));
  if (auto* p = as<Pair>(m))
    return pair(subst_type_in_term(y, x, p->fst),
                subst_type_in_term(y, x, p->snd));
  if (auto* p = as<Proj>(m))
    return proj(p->index, subst_type_in_term(y, x, p->arg));
  if (auto* l = as<TyLam>(m)) {
    // x is free in m, so l->bound != x
    if (l->bound == y) {
      std::set<std::string> avoid = free_type_vars(l->body);
      avoid.insert(y);
      avoid.insert(x);
      std::string nb = rename_candidate(l->bound, avoid);
      return tylam(nb, subst_type_in_term(
                           y, x, subst_type_in_term(nb, l->bound, l->body)));
    }
    return tylam(l->bound, subst_type_in_term(y, x, l->body));
  }
  auto* a = as<TyApp>(m);
  return tyapp(subst_type_in_term(y, x, a->fun),
               a->tyvar == x ? y : a->tyvar);
}

// ------------------------------------------------------- alpha equivalence

namespace {

bool term_aeq(const TermRef& a, const TermRef& b, std::vector<APair>& env,
              std::vector<APair>& tenv) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* v = as<Var>(a)) return atvar_eq(v->name, as<Var>(b)->name, env);
  if (auto* l = as<Lam>(a)) {
    auto* r = as<Lam>(b);
    if (!type_aeq(l->annot, r->annot, tenv)) return false;
    env.push_back({l->bound, r->bound});
    bool ok = term_aeq(l->body, r->body, env, tenv);
    env.pop_back();
    return ok;
  }
  if (auto* l = as<App>(a)) {
    auto* r = as<App>(b);
    return term_aeq(l->fun, r->fun, env, tenv) &&
           term_aeq(l->arg, r->arg, env, tenv);
  }
  if (auto* l = as<Pair>(a)) {
    auto* r = as<Pair>(b);
    return term_aeq(l->fst, r->fst, env, tenv) &&
           term_aeq(l->snd, r->snd, env, tenv);
  }
  if (auto* l = as<Proj>(a)) {
    auto* r = as<Proj>(b);
    return l->index == r->index && term_aeq(l->arg, r->arg, env, tenv);
  }
  if (auto* l = as<TyLam>(a)) {
    auto* r = as<TyLam>(b);
    tenv.push_back({l->bound, r->bound});
    bool ok = term_aeq(l->body, r->body, env, tenv);
    tenv.pop_back();
    return ok;
  }
  auto* l = as<TyApp>(a);
  auto* r = as<TyApp>(b);
  return atvar_eq(l->tyvar, r->tyvar, tenv) &&
         term_aeq(l->fun, r->fun, env, tenv);
}

void key_term(const TermRef& t, std::vector<std::string>& env,
              std::vector<std::string>& tenv, std::string& out) {
  if (auto* v = as<Var>(t)) {
    out += "(v ";
    key_tvar(v->name, env, out);
    out += ')';
    return;
  }
  if (auto* l = as<Lam>(t)) {
    out += "(\\ ";
    key_type(l->annot, tenv, out);
    out += ' ';
    env.push_back(l->bound);
    key_term(l->body, env, tenv, out);
    env.pop_back();
    out += ')';
    return;
  }
  if (auto* a = as<App>(t)) {
    out += "(@ ";
    key_term(a->fun, env, tenv, out);
    out += ' ';
    key_term(a->arg, env, tenv, out);
    out += ')';
    return;
  }
  if (auto* p = as<Pair>(t)) {
    out += "(, ";
    key_term(p->fst, env, tenv, out);
    out += ' ';
    key_term(p->snd, env, tenv, out);
    out += ')';
    return;
  }
  if (auto* p = as<Proj>(t)) {
    out += p->index == 1 ? "(p1 " : "(p2 ";
    key_term(p->arg, env, tenv, out);
    out += ')';
    return;
  }
  if (auto* l = as<TyLam>(t)) {
    out += "(/\\ ";
    tenv.push_back(l->bound);
    key_term(l->body, env, tenv, out);
    tenv.pop_back();
    out += ')';
    return;
  }
  auto* a = as<TyApp>(t);
  out += "(@t ";
  key_term(a->fun, env, tenv, out);
  out += ' ';
  key_tvar(a->tyvar, tenv, out);
  out += ')';
}

}  // namespace

bool alpha_eq(const TermRef& a, const TermRef& b) {
  if (a.get() == b.get()) return true;
  std::vector<APair> env, tenv;
  return term_aeq(a, b, env, tenv);
}

std::string alpha_key(const TermRef& t) {
  std::string out;
  std::vector<std::string> env, tenv;
  key_term(t, env, tenv, out);
  return out;
}

// ---------------------------------------------------------------- printing

namespace {

void show_term(const TermRef& t, int prec, std::string& out) {
  if (auto* v = as<Var>(t)) {
    out += v->name;
    return;
  }
  if (auto* l = as<Lam>(t)) {
    bool wrap = prec > 0;
    if (wrap) out += '(';
    out += '\\';
    out += l->bound;
    out += ':';
    show_type(l->annot, 0, out);
    out += ". ";
    show_term(l->body, 0, out);
    if (wrap) out += ')';
    return;
  }
  if (auto* l = as<TyLam>(t)) {
    bool wrap = prec > 0;
    if (wrap) out += '(';
    out += "/\\";
    out += l->bound;
    out += ". ";
    show_term(l->body, 0, out);
    if (wrap) out += ')';
    return;
  }
  if (auto* a = as<App>(t)) {
    bool wrap = prec > 1;
    if (wrap) out += '(';
    show_term(a->fun, 1, out);
    out += ' ';
    show_term(a->arg, 2, out);
    if (wrap) out += ')';
    return;
  }
  if (auto* p = as<Pair>(t)) {
    out += '<';
    show_term(p->fst, 0, out);
    out += ", ";
    show_term(p->snd, 0, out);
    out += '>';
    return;
  }
  if (auto* p = as<Proj>(t)) {
    bool wrap = prec > 2;
    if (wrap) out += '(';
    show_term(p->arg, 2, out);
    out += p->index == 1 ? ".1" : ".2";
    if (wrap) out += ')';
    return;
  }
  auto* a = as<TyApp>(t);
  bool wrap = prec > 2;
  if (wrap) out += '(';
  show_term(a->fun, 2, out);
  out += " [";
  out += a->tyvar;
  out += ']';
  if (wrap) out += ')';
}

}  // namespace

std::string show(const TermRef& t) {
  std::string out;
  show_term(t, 0, out);
  return out;
}

// ---------------------------------------------------------------- typing

void Context::add(std::string name, TypeRef type) {
  if (lookup(name) != nullptr)
    throw std::invalid_argument("duplicate declaration: " + name);
  decls_.emplace_back(std::move(name), std::move(type));
}

const TypeRef* Context::lookup(const std::string& name) const {
  for (auto it = decls_.rbegin(); it != decls_.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

namespace {

struct Checker {
  std::vector<std::pair<std::string, TypeRef>> env;
  Path pos;

  [[noreturn]] void mismatch(const std::string& rule, const std::string& what) {
    throw TypeError(TypeError::Kind::TypeMismatch, pos,
                    rule + ": " + what + " at " + show_path(pos));
  }

  TypeRef check(const TermRef& t) {
    if (auto* v = as<Var>(t)) {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == v->name) return it->second;
      }
      throw TypeError(TypeError::Kind::UnboundVariable, pos,
                      "unbound variable " + v->name + " at " + show_path(pos));
    }
    if (auto* l = as<Lam>(t)) {
      env.emplace_back(l->bound, l->annot);
      TypeRef body = sub(l->body, 0);
      env.pop_back();
      return imp(l->annot, body);
    }
    if (auto* a = as<App>(t)) {
      TypeRef tf = sub(a->fun, 0);
      auto* fi = as<TImp>(tf);
      if (!fi) mismatch("Imp-E", "expected a function, got " + show(tf));
      TypeRef ta = sub(a->arg, 1);
      if (!type_eq(ta, fi->left))
        mismatch("Imp-E",
                 "argument has " + show(ta) + ", expected " + show(fi->left));
      return fi->right;
    }
    if (auto* p = as<Pair>(t)) return conj(sub(p->fst, 0), sub(p->snd, 1));
    if (auto* p = as<Proj>(t)) {
      TypeRef ta = sub(p->arg, 0);
      auto* ai = as<TAnd>(ta);
      if (!ai)
        mismatch(p->index == 1 ? "And-E1" : "And-E2",
                 "expected a conjunction, got " + show(ta));
      return p->index == 1 ? ai->left : ai->right;
    }
    if (auto* l = as<TyLam>(t)) {
      for (const auto& [name, ty] : env) {
        if (free_type_vars(ty).count(l->bound))
          throw TypeError(TypeError::Kind::ForallProvisoViolated, pos,
                          "cannot generalize " + l->bound + ": free in the type of " +
                              name + " at " + show_path(pos));
      }
      TypeRef body = sub(l->body, 0);
      return forall(l->bound, body);
    }
    auto* a = as<TyApp>(t);
    TypeRef tf = sub(a->fun, 0);
    auto* fo = as<TForall>(tf);
    if (!fo) mismatch("All-E", "expected a universal type, got " + show(tf));
    return subst_type(a->tyvar, fo->bound, fo->body);
  }

  TypeRef sub(const TermRef& t, int i) {
    pos.push_back(i);
    TypeRef r = check(t);
    pos.pop_back();
    return r;
  }
};

}  // namespace

TypeRef typecheck(const Context& ctx, const TermRef& t) {
  Checker ch;
  ch.env = ctx.decls();
  return ch.check(t);
}

// -------------------------------------------------------------- reduction

int child_count(const TermRef& t) {
  if (as<Var>(t)) return 0;
  if (as<App>(t) || as<Pair>(t)) return 2;
  return 1;  // lam, proj, tylam, tyapp
}

TermRef child(const TermRef& t, int i) {
  if (auto* l = as<Lam>(t)) {
    if (i == 0) return l->body;
  } else if (auto* a = as<App>(t)) {
    if (i == 0) return a->fun;
    if (i == 1) return a->arg;
  } else if (auto* p = as<Pair>(t)) {
    if (i == 0) return p->fst;
    if (i == 1) return p->snd;
  } else if (auto* p = as<Proj>(t)) {
    if (i == 0) return p->arg;
  } else if (auto* l = as<TyLam>(t)) {
    if (i == 0) return l->body;
  } else if (auto* a = as<TyApp>(t)) {
    if (i == 0) return a->fun;
  }
  throw InvalidPosition("no child " + std::to_string(i));
}

TermRef with_child(const TermRef& t, int i, TermRef c) {
  if (auto* l = as<Lam>(t)) {
    if (i == 0) return lam(l->bound, l->annot, std::move(c));
  } else if (auto* a = as<App>(t)) {
    if (i == 0) return app(std::move(c), a->arg);
    if (i == 1) return app(a->fun, std::move(c));
  } else if (auto* p = as<Pair>(t)) {
    if (i == 0) return pair(std::move(c), p->snd);
    if (i == 1) return pair(p->fst, std::move(c));
  } else if (auto* p = as<Proj>(t)) {
    if (i == 0) return proj(p->index, std::move(c));
  } else if (auto* l = as<TyLam>(t)) {
    if (i == 0) return tylam(l->bound, std::move(c));
  } else if (auto* a = as<TyApp>(t)) {
    if (i == 0) return tyapp(std::move(c), a->tyvar);
  }
  throw InvalidPosition("no child " + std::to_string(i));
}

TermRef subterm_at(const TermRef& t, const Path& pos) {
  TermRef cur = t;
  for (int i : pos) cur = child(cur, i);
  return cur;
}

std::optional<TermRef> root_rewrite(RuleId rule, const TermRef& t) {
  switch (rule) {
    case RuleId::BetaImpF: {
      auto* a = as<App>(t);
      if (!a) return std::nullopt;
      auto* l = as<Lam>(a->fun);
      if (!l) return std::nullopt;
      return subst(a->arg, l->bound, l->body);
    }
    case RuleId::BetaAndF: {
      auto* p = as<Proj>(t);
      if (!p) return std::nullopt;
      auto* pr = as<Pair>(p->arg);
      if (!pr) return std::nullopt;
      return p->index == 1 ? pr->fst : pr->snd;
    }
    case RuleId::BetaAll: {
      auto* a = as<TyApp>(t);
      if (!a) return std::nullopt;
      auto* l = as<TyLam>(a->fun);
      if (!l) return std::nullopt;
      return subst_type_in_term(a->tyvar, l->bound, l->body);
    }
    case RuleId::EtaImpF: {
      auto* l = as<Lam>(t);
      if (!l) return std::nullopt;
      auto* a = as<App>(l->body);
      if (!a) return std::nullopt;
      auto* v = as<Var>(a->arg);
      if (!v || v->name != l->bound) return std::nullopt;
      if (free_in(l->bound, a->fun)) return std::nullopt;
      return a->fun;
    }
    case RuleId::EtaAndF: {
      auto* p = as<Pair>(t);
      if (!p) return std::nullopt;
      auto* p1 = as<Proj>(p->fst);
      auto* p2 = as<Proj>(p->snd);
      if (!p1 || !p2 || p1->index != 1 || p2->index != 2) return std::nullopt;
      if (!alpha_eq(p1->arg, p2->arg)) return std::nullopt;
      return p1->arg;
    }
    case RuleId::EtaAll: {
      auto* l = as<TyLam>(t);
      if (!l) return std::nullopt;
      auto* a = as<TyApp>(l->body);
      if (!a) return std::nullopt;
      if (a->tyvar != l->bound) return std::nullopt;
      if (type_free_in(l->bound, a->fun)) return std::nullopt;
      return a->fun;
    }
    default:
      return std::nullopt;
  }
}

namespace {

void collect_redexes(const TermRef& t, RuleSet rules, Path& cur,
                     std::vector<Redex>& out) {
  for (unsigned i = 0; i < kRuleCount; ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (!is_fat_rule(r) || !rules.contains(r)) continue;
    if (root_rewrite(r, t)) out.push_back({cur, r});
  }
  for (int i = 0; i < child_count(t); ++i) {
    cur.push_back(i);
    collect_redexes(child(t, i), rules, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Redex> redexes(const TermRef& t, RuleSet rules) {
  std::vector<Redex> out;
  Path cur;
  collect_redexes(t, rules, cur, out);
  return out;
}

TermRef step_at(const TermRef& t, const Path& pos, RuleId rule) {
  if (pos.empty()) {
    auto r = root_rewrite(rule, t);
    if (!r)
      throw InvalidPosition(std::string(rule_name(rule)) +
                            " does not apply at root");
    return *r;
  }
  Path rest(pos.begin() + 1, pos.end());
  return with_child(t, pos[0], step_at(child(t, pos[0]), rest, rule));
}

}  // namespace ipcat::fat
