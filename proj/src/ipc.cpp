#include "ipcat/ipc.hpp"

#include <algorithm>

namespace ipcat::ipc {

// ---------------------------------------------------------------- formulas

TypeRef tvar(std::string name) {
  return std::make_shared<Type>(Type{TVar{std::move(name)}});
}
TypeRef bot() { return std::make_shared<Type>(Type{TBot{}}); }
TypeRef imp(TypeRef l, TypeRef r) {
  return std::make_shared<Type>(Type{TImp{std::move(l), std::move(r)}});
}
TypeRef conj(TypeRef l, TypeRef r) {
  return std::make_shared<Type>(Type{TAnd{std::move(l), std::move(r)}});
}
TypeRef disj(TypeRef l, TypeRef r) {
  return std::make_shared<Type>(Type{TOr{std::move(l), std::move(r)}});
}

bool type_eq(const TypeRef& a, const TypeRef& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* v = as<TVar>(a)) return v->name == as<TVar>(b)->name;
  if (as<TBot>(a)) return true;
  if (auto* i = as<TImp>(a)) {
    auto* j = as<TImp>(b);
    return type_eq(i->left, j->left) && type_eq(i->right, j->right);
  }
  if (auto* i = as<TAnd>(a)) {
    auto* j = as<TAnd>(b);
    return type_eq(i->left, j->left) && type_eq(i->right, j->right);
  }
  auto* i = as<TOr>(a);
  auto* j = as<TOr>(b);
  return type_eq(i->left, j->left) && type_eq(i->right, j->right);
}

namespace {

// Precedence: -> is 1 (right associative), \/ is 2, /\ is 3, atoms 4.
void show_type(const TypeRef& t, int prec, std::string& out) {
  if (auto* v = as<TVar>(t)) {
    out += v->name;
    return;
  }
  if (as<TBot>(t)) {
    out += "_|_";
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
  if (auto* o = as<TOr>(t)) {
    bool wrap = prec > 2;
    if (wrap) out += '(';
    show_type(o->left, 2, out);
    out += " \\/ ";
    show_type(o->right, 3, out);
    if (wrap) out += ')';
    return;
  }
  auto* a = as<TAnd>(t);
  bool wrap = prec > 3;
  if (wrap) out += '(';
  show_type(a->left, 3, out);
  out += " /\\ ";
  show_type(a->right, 4, out);
  if (wrap) out += ')';
}

}  // namespace

std::string show(const TypeRef& t) {
  std::string out;
  show_type(t, 0, out);
  return out;
}

// ------------------------------------------------------------------- terms

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
TermRef inj(int index, TermRef arg, TypeRef left, TypeRef right) {
  return std::make_shared<Term>(
      Term{Inj{index, std::move(arg), std::move(left), std::move(right)}});
}
TermRef cse(TermRef scrut, std::string x, TypeRef xAnnot, TermRef left,
            std::string y, TypeRef yAnnot, TermRef right, TypeRef result) {
  return std::make_shared<Term>(
      Term{Case{std::move(scrut), std::move(x), std::move(xAnnot),
                std::move(left), std::move(y), std::move(yAnnot),
                std::move(right), std::move(result)}});
}
TermRef abt(TermRef arg, TypeRef result) {
  return std::make_shared<Term>(Term{Abort{std::move(arg), std::move(result)}});
}

namespace {

void collect_free(const TermRef& t, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  if (auto* v = as<Var>(t)) {
    if (std::find(bound.rbegin(), bound.rend(), v->name) == bound.rend())
      out.insert(v->name);
    return;
  }
  if (auto* l = as<Lam>(t)) {
    bound.push_back(l->bound);
    collect_free(l->body, bound, out);
    bound.pop_back();
    return;
  }
  if (auto* a = as<App>(t)) {
    collect_free(a->fun, bound, out);
    collect_free(a->arg, bound, out);
    return;
  }
  if (auto* p = as<Pair>(t)) {
    collect_free(p->fst, bound, out);
    collect_free(p->snd, bound, out);
    return;
  }
  if (auto* p = as<Proj>(t)) {
    collect_free(p->arg, bound, out);
    return;
  }
  if (auto* i = as<Inj>(t)) {
    collect_free(i->arg, bound, out);
    return;
  }
  if (auto* c = as<Case>(t)) {
    collect_free(c->scrut, bound, out);
    bound.push_back(c->x);
    collect_free(c->left, bound, out);
    bound.pop_back();
    bound.push_back(c->y);
    collect_free(c->right, bound, out);
    bound.pop_back();
    return;
  }
  auto* a = as<Abort>(t);
  collect_free(a->arg, bound, out);
}

}  // namespace

std::set<std::string> free_vars(const TermRef& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

bool free_in(const std::string& x, const TermRef& t) {
  if (auto* v = as<Var>(t)) return v->name == x;
  if (auto* l = as<Lam>(t)) return l->bound != x && free_in(x, l->body);
  if (auto* a = as<App>(t)) return free_in(x, a->fun) || free_in(x, a->arg);
  if (auto* p = as<Pair>(t)) return free_in(x, p->fst) || free_in(x, p->snd);
  if (auto* p = as<Proj>(t)) return free_in(x, p->arg);
  if (auto* i = as<Inj>(t)) return free_in(x, i->arg);
  if (auto* c = as<Case>(t)) {
    return free_in(x, c->scrut) || (c->x != x && free_in(x, c->left)) ||
           (c->y != x && free_in(x, c->right));
  }
  return free_in(x, as<Abort>(t)->arg);
}

int term_size(const TermRef& t) {
  int n = 1;
  for (int i = 0; i < child_count(t); ++i) n += term_size(child(t, i));
  return n;
}

// ------------------------------------------------------------ substitution

namespace {

std::string strip_digits(const std::string& s) {
  std::size_t end = s.size();
  while (end > 0 && s[end - 1] >= '0' && s[end - 1] <= '9') --end;
  return end == 0 ? std::string("v") : s.substr(0, end);
}

// First prefix+k (k = 0, 1, ...) outside avoid. Keeps subst a pure
// function of its arguments, so traces replay byte-for-byte.
std::string rename_candidate(const std::string& old,
                             const std::set<std::string>& avoid) {
  std::string prefix = strip_digits(old);
  for (int k = 0;; ++k) {
    std::string c = prefix + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

struct Subst {
  const TermRef& n;
  const std::string& x;

  // Binder b scoping over body is about to be crossed. Returns the new
  // name and body, renaming only when b would capture a free var of n.
  std::pair<std::string, TermRef> cross(const std::string& b,
                                        const TermRef& body) {
    if (!free_in(b, n)) return {b, body};
    std::set<std::string> avoid = free_vars(n);
    auto bodyFree = free_vars(body);
    avoid.insert(bodyFree.begin(), bodyFree.end());
    avoid.insert(x);
    std::string nb = rename_candidate(b, avoid);
    return {nb, subst(var(nb), b, body)};
  }

  TermRef go(const TermRef& m) {
    if (!free_in(x, m)) return m;
    if (as<Var>(m)) return n;  // free_in guarantees the name is x
    if (auto* l = as<Lam>(m)) {
      auto [b, body] = cross(l->bound, l->body);
      return lam(b, l->annot, go(body));
    }
    if (auto* a = as<App>(m)) return app(go(a->fun), go(a->arg));
    if (auto* p = as<Pair>(m)) return pair(go(p->fst), go(p->snd));
    if (auto* p = as<Proj>(m)) return proj(p->index, go(p->arg));
    if (auto* i = as<Inj>(m)) return inj(i->index, go(i->arg), i->left, i->right);
    if (auto* c = as<Case>(m)) {
      TermRef scrut = go(c->scrut);
      std::string bx = c->x;
      TermRef left = c->left;
      if (c->x != x && free_in(x, c->left)) {
        auto [b, body] = cross(c->x, c->left);
        bx = b;
        left = go(body);
      }
      std::string by = c->y;
      TermRef right = c->right;
      if (c->y != x && free_in(x, c->right)) {
        auto [b, body] = cross(c->y, c->right);
        by = b;
        right = go(body);
      }
      return cse(scrut, bx, c->xAnnot, left, by, c->yAnnot, right, c->result);
    }
    auto* a = as<Abort>(m);
    return abt(go(a->arg), a->result);
  }
};

}  // namespace

TermRef subst(const TermRef& n, const std::string& x, const TermRef& m) {
  Subst s{n, x};
  return s.go(m);
}

// ------------------------------------------------------- alpha equivalence

namespace {

struct APair {
  std::string a, b;
};

bool avar_eq(const std::string& a, const std::string& b,
             const std::vector<APair>& env) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    bool ma = it->a == a;
    bool mb = it->b == b;
    if (ma || mb) return ma && mb;
  }
  return a == b;
}

bool aeq(const TermRef& a, const TermRef& b, std::vector<APair>& env) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* v = as<Var>(a)) return avar_eq(v->name, as<Var>(b)->name, env);
  if (auto* l = as<Lam>(a)) {
    auto* r = as<Lam>(b);
    if (!type_eq(l->annot, r->annot)) return false;
    env.push_back({l->bound, r->bound});
    bool ok = aeq(l->body, r->body, env);
    env.pop_back();
    return ok;
  }
  if (auto* l = as<App>(a)) {
    auto* r = as<App>(b);
    return aeq(l->fun, r->fun, env) && aeq(l->arg, r->arg, env);
  }
  if (auto* l = as<Pair>(a)) {
    auto* r = as<Pair>(b);
    return aeq(l->fst, r->fst, env) && aeq(l->snd, r->snd, env);
  }
  if (auto* l = as<Proj>(a)) {
    auto* r = as<Proj>(b);
    return l->index == r->index && aeq(l->arg, r->arg, env);
  }
  if (auto* l = as<Inj>(a)) {
    auto* r = as<Inj>(b);
    return l->index == r->index && type_eq(l->left, r->left) &&
           type_eq(l->right, r->right) && aeq(l->arg, r->arg, env);
  }
  if (auto* l = as<Case>(a)) {
    auto* r = as<Case>(b);
    if (!type_eq(l->xAnnot, r->xAnnot) || !type_eq(l->yAnnot, r->yAnnot) ||
        !type_eq(l->result, r->result))
      return false;
    if (!aeq(l->scrut, r->scrut, env)) return false;
    env.push_back({l->x, r->x});
    bool ok = aeq(l->left, r->left, env);
    env.pop_back();
    if (!ok) return false;
    env.push_back({l->y, r->y});
    ok = aeq(l->right, r->right, env);
    env.pop_back();
    return ok;
  }
  auto* l = as<Abort>(a);
  auto* r = as<Abort>(b);
  return type_eq(l->result, r->result) && aeq(l->arg, r->arg, env);
}

void key_var(const std::string& name, const std::vector<std::string>& env,
             std::string& out) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (*it == name) {
      out += '#';
      out += std::to_string(env.rend() - it - 1);  // de Bruijn index
      return;
    }
  }
  out += name;
}

void key_term(const TermRef& t, std::vector<std::string>& env,
              std::string& out) {
  if (auto* v = as<Var>(t)) {
    out += "(v ";
    key_var(v->name, env, out);
    out += ')';
    return;
  }
  if (auto* l = as<Lam>(t)) {
    out += "(\\ ";
    show_type(l->annot, 0, out);
    out += ' ';
    env.push_back(l->bound);
    key_term(l->body, env, out);
    env.pop_back();
    out += ')';
    return;
  }
  if (auto* a = as<App>(t)) {
    out += "(@ ";
    key_term(a->fun, env, out);
    out += ' ';
    key_term(a->arg, env, out);
    out += ')';
    return;
  }
  if (auto* p = as<Pair>(t)) {
    out += "(, ";
    key_term(p->fst, env, out);
    out += ' ';
    key_term(p->snd, env, out);
    out += ')';
    return;
  }
  if (auto* p = as<Proj>(t)) {
    out += p->index == 1 ? "(p1 " : "(p2 ";
    key_term(p->arg, env, out);
    out += ')';
    return;
  }
  if (auto* i = as<Inj>(t)) {
    out += i->index == 1 ? "(i1 " : "(i2 ";
    show_type(i->left, 0, out);
    out += ' ';
    show_type(i->right, 0, out);
    out += ' ';
    key_term(i->arg, env, out);
    out += ')';
    return;
  }
  if (auto* c = as<Case>(t)) {
    out += "(c ";
    key_term(c->scrut, env, out);
    out += ' ';
    show_type(c->xAnnot, 0, out);
    out += ' ';
    env.push_back(c->x);
    key_term(c->left, env, out);
    env.pop_back();
    out += ' ';
    show_type(c->yAnnot, 0, out);
    out += ' ';
    env.push_back(c->y);
    key_term(c->right, env, out);
    env.pop_back();
    out += ' ';
    show_type(c->result, 0, out);
    out += ')';
    return;
  }
  auto* a = as<Abort>(t);
  out += "(ab ";
  show_type(a->result, 0, out);
  out += ' ';
  key_term(a->arg, env, out);
  out += ')';
}

}  // namespace

bool alpha_eq(const TermRef& a, const TermRef& b) {
  if (a.get() == b.get()) return true;
  std::vector<APair> env;
  return aeq(a, b, env);
}

std::string alpha_key(const TermRef& t) {
  std::string out;
  std::vector<std::string> env;
  key_term(t, env, out);
  return out;
}

// ---------------------------------------------------------------- printing

namespace {

// Levels: 0 lambda and anything top-level, 1 application and the keyword
// forms, 2 postfix (projection), 3 atoms. inl/inr/abort operands print at
// level 2, which keeps their extent unambiguous inside application chains.
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
  if (auto* a = as<App>(t)) {
    bool wrap = prec > 1;
    if (wrap) out += '(';
    show_term(a->fun, 1, out);
    out += ' ';
    if (as<Inj>(a->arg) || as<Abort>(a->arg))
      show_term(a->arg, 1, out);  // self-delimiting keyword forms
    else
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
  if (auto* i = as<Inj>(t)) {
    bool wrap = prec > 1;
    if (wrap) out += '(';
    out += i->index == 1 ? "inl[" : "inr[";
    show_type(i->left, 0, out);
    out += " | ";
    show_type(i->right, 0, out);
    out += "] ";
    show_term(i->arg, 2, out);
    if (wrap) out += ')';
    return;
  }
  if (auto* c = as<Case>(t)) {
    bool wrap = prec > 1;
    if (wrap) out += '(';
    out += "case ";
    show_term(c->scrut, 0, out);
    out += " of {";
    out += c->x;
    out += ':';
    show_type(c->xAnnot, 0, out);
    out += " => ";
    show_term(c->left, 0, out);
    out += " | ";
    out += c->y;
    out += ':';
    show_type(c->yAnnot, 0, out);
    out += " => ";
    show_term(c->right, 0, out);
    out += "} : ";
    show_type(c->result, 0, out);
    if (wrap) out += ')';
    return;
  }
  auto* a = as<Abort>(t);
  bool wrap = prec > 1;
  if (wrap) out += '(';
  out += "abort[";
  show_type(a->result, 0, out);
  out += "] ";
  show_term(a->arg, 2, out);
  if (wrap) out += ')';
}

}  // namespace

std::string show(const TermRef& t) {
  std::string out;
  show_term(t, 0, out);
  return out;
}

// ----------------------------------------------------------------- typing

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
    if (auto* p = as<Pair>(t))
      return conj(sub(p->fst, 0), sub(p->snd, 1));
    if (auto* p = as<Proj>(t)) {
      TypeRef ta = sub(p->arg, 0);
      auto* ai = as<TAnd>(ta);
      if (!ai)
        mismatch(p->index == 1 ? "And-E1" : "And-E2",
                 "expected a conjunction, got " + show(ta));
      return p->index == 1 ? ai->left : ai->right;
    }
    if (auto* i = as<Inj>(t)) {
      TypeRef ta = sub(i->arg, 0);
      const TypeRef& want = i->index == 1 ? i->left : i->right;
      if (!type_eq(ta, want))
        mismatch(i->index == 1 ? "Or-I1" : "Or-I2",
                 "payload has " + show(ta) + ", expected " + show(want));
      return disj(i->left, i->right);
    }
    if (auto* c = as<Case>(t)) {
      TypeRef ts = sub(c->scrut, 0);
      if (!type_eq(ts, disj(c->xAnnot, c->yAnnot)))
        mismatch("Or-E", "scrutinee has " + show(ts) + ", expected " +
                             show(disj(c->xAnnot, c->yAnnot)));
      env.emplace_back(c->x, c->xAnnot);
      TypeRef tl = sub(c->left, 1);
      env.pop_back();
      if (!type_eq(tl, c->result))
        mismatch("Or-E", "left branch has " + show(tl) + ", expected " +
                             show(c->result));
      env.emplace_back(c->y, c->yAnnot);
      TypeRef tr = sub(c->right, 2);
      env.pop_back();
      if (!type_eq(tr, c->result))
        mismatch("Or-E", "right branch has " + show(tr) + ", expected " +
                             show(c->result));
      return c->result;
    }
    auto* a = as<Abort>(t);
    TypeRef ta = sub(a->arg, 0);
    if (!as<TBot>(ta))
      mismatch("Bot-E", "expected _|_, got " + show(ta));
    return a->result;
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
  if (as<Lam>(t) || as<Proj>(t) || as<Inj>(t) || as<Abort>(t)) return 1;
  if (as<App>(t) || as<Pair>(t)) return 2;
  return 3;  // case
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
  } else if (auto* j = as<Inj>(t)) {
    if (i == 0) return j->arg;
  } else if (auto* c = as<Case>(t)) {
    if (i == 0) return c->scrut;
    if (i == 1) return c->left;
    if (i == 2) return c->right;
  } else if (auto* a = as<Abort>(t)) {
    if (i == 0) return a->arg;
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
  } else if (auto* j = as<Inj>(t)) {
    if (i == 0) return inj(j->index, std::move(c), j->left, j->right);
  } else if (auto* cs = as<Case>(t)) {
    if (i == 0)
      return cse(std::move(c), cs->x, cs->xAnnot, cs->left, cs->y, cs->yAnnot,
                 cs->right, cs->result);
    if (i == 1)
      return cse(cs->scrut, cs->x, cs->xAnnot, std::move(c), cs->y, cs->yAnnot,
                 cs->right, cs->result);
    if (i == 2)
      return cse(cs->scrut, cs->x, cs->xAnnot, cs->left, cs->y, cs->yAnnot,
                 std::move(c), cs->result);
  } else if (auto* a = as<Abort>(t)) {
    if (i == 0) return abt(std::move(c), a->result);
  }
  throw InvalidPosition("no child " + std::to_string(i));
}

TermRef subterm_at(const TermRef& t, const Path& pos) {
  TermRef cur = t;
  for (int i : pos) cur = child(cur, i);
  return cur;
}

namespace {

struct CaseParts {
  TermRef scrut;
  std::string x;
  TypeRef xAnnot;
  TermRef left;
  std::string y;
  TypeRef yAnnot;
  TermRef right;
  TypeRef result;
};

// Renames the case binders away from avoid so branches can be wrapped in
// material mentioning those names.
CaseParts freshen_case(const Case& c, const std::set<std::string>& avoid) {
  CaseParts out{c.scrut, c.x,      c.xAnnot, c.left,
                c.y,     c.yAnnot, c.right,  c.result};
  if (avoid.count(out.x)) {
    std::set<std::string> used = avoid;
    auto f = free_vars(out.left);
    used.insert(f.begin(), f.end());
    std::string nx = rename_candidate(out.x, used);
    out.left = subst(var(nx), out.x, out.left);
    out.x = nx;
  }
  if (avoid.count(out.y)) {
    std::set<std::string> used = avoid;
    auto f = free_vars(out.right);
    used.insert(f.begin(), f.end());
    std::string ny = rename_candidate(out.y, used);
    out.right = subst(var(ny), out.y, out.right);
    out.y = ny;
  }
  return out;
}

}  // namespace

std::optional<TermRef> root_rewrite(RuleId rule, const TermRef& t) {
  switch (rule) {
    case RuleId::BetaImp: {
      auto* a = as<App>(t);
      if (!a) return std::nullopt;
      auto* l = as<Lam>(a->fun);
      if (!l) return std::nullopt;
      return subst(a->arg, l->bound, l->body);
    }
    case RuleId::BetaAnd: {
      auto* p = as<Proj>(t);
      if (!p) return std::nullopt;
      auto* pr = as<Pair>(p->arg);
      if (!pr) return std::nullopt;
      return p->index == 1 ? pr->fst : pr->snd;
    }
    case RuleId::BetaOr: {
      auto* c = as<Case>(t);
      if (!c) return std::nullopt;
      auto* i = as<Inj>(c->scrut);
      if (!i) return std::nullopt;
      if (!type_eq(i->left, c->xAnnot) || !type_eq(i->right, c->yAnnot))
        return std::nullopt;
      return i->index == 1 ? subst(i->arg, c->x, c->left)
                           : subst(i->arg, c->y, c->right);
    }
    case RuleId::EtaImp: {
      auto* l = as<Lam>(t);
      if (!l) return std::nullopt;
      auto* a = as<App>(l->body);
      if (!a) return std::nullopt;
      auto* v = as<Var>(a->arg);
      if (!v || v->name != l->bound) return std::nullopt;
      if (free_in(l->bound, a->fun)) return std::nullopt;
      return a->fun;
    }
    case RuleId::EtaAnd: {
      auto* p = as<Pair>(t);
      if (!p) return std::nullopt;
      auto* p1 = as<Proj>(p->fst);
      auto* p2 = as<Proj>(p->snd);
      if (!p1 || !p2 || p1->index != 1 || p2->index != 2) return std::nullopt;
      if (!alpha_eq(p1->arg, p2->arg)) return std::nullopt;
      return p1->arg;
    }
    case RuleId::EtaOr: {
      auto* c = as<Case>(t);
      if (!c) return std::nullopt;
      auto* i1 = as<Inj>(c->left);
      auto* i2 = as<Inj>(c->right);
      if (!i1 || !i2 || i1->index != 1 || i2->index != 2) return std::nullopt;
      auto* v1 = as<Var>(i1->arg);
      auto* v2 = as<Var>(i2->arg);
      if (!v1 || v1->name != c->x || !v2 || v2->name != c->y)
        return std::nullopt;
      if (!type_eq(i1->left, c->xAnnot) || !type_eq(i1->right, c->yAnnot) ||
          !type_eq(i2->left, c->xAnnot) || !type_eq(i2->right, c->yAnnot))
        return std::nullopt;
      if (!type_eq(c->result, disj(c->xAnnot, c->yAnnot))) return std::nullopt;
      return c->scrut;
    }
    case RuleId::PiImp: {
      auto* a = as<App>(t);
      if (!a) return std::nullopt;
      auto* c = as<Case>(a->fun);
      if (!c) return std::nullopt;
      auto* f = as<TImp>(c->result);
      if (!f) return std::nullopt;
      CaseParts cc = freshen_case(*c, free_vars(a->arg));
      return cse(cc.scrut, cc.x, cc.xAnnot, app(cc.left, a->arg), cc.y,
                 cc.yAnnot, app(cc.right, a->arg), f->right);
    }
    case RuleId::PiAnd: {
      auto* p = as<Proj>(t);
      if (!p) return std::nullopt;
      auto* c = as<Case>(p->arg);
      if (!c) return std::nullopt;
      auto* an = as<TAnd>(c->result);
      if (!an) return std::nullopt;
      return cse(c->scrut, c->x, c->xAnnot, proj(p->index, c->left), c->y,
                 c->yAnnot, proj(p->index, c->right),
                 p->index == 1 ? an->left : an->right);
    }
    case RuleId::PiOr: {
      auto* outer = as<Case>(t);
      if (!outer) return std::nullopt;
      auto* inner = as<Case>(outer->scrut);
      if (!inner) return std::nullopt;
      auto* d = as<TOr>(inner->result);
      if (!d) return std::nullopt;
      if (!type_eq(d->left, outer->xAnnot) || !type_eq(d->right, outer->yAnnot))
        return std::nullopt;
      std::set<std::string> avoid = free_vars(outer->left);
      auto fr = free_vars(outer->right);
      avoid.insert(fr.begin(), fr.end());
      CaseParts in = freshen_case(*inner, avoid);
      auto wrap = [&](TermRef branch) {
        return cse(std::move(branch), outer->x, outer->xAnnot, outer->left,
                   outer->y, outer->yAnnot, outer->right, outer->result);
      };
      return cse(in.scrut, in.x, in.xAnnot, wrap(in.left), in.y, in.yAnnot,
                 wrap(in.right), outer->result);
    }
    case RuleId::PiBot: {
      auto* a = as<Abort>(t);
      if (!a) return std::nullopt;
      auto* c = as<Case>(a->arg);
      if (!c) return std::nullopt;
      if (!as<TBot>(c->result)) return std::nullopt;
      return cse(c->scrut, c->x, c->xAnnot, abt(c->left, a->result), c->y,
                 c->yAnnot, abt(c->right, a->result), a->result);
    }
    case RuleId::VarpiImp: {
      auto* a = as<App>(t);
      if (!a) return std::nullopt;
      auto* ab = as<Abort>(a->fun);
      if (!ab) return std::nullopt;
      auto* f = as<TImp>(ab->result);
      if (!f) return std::nullopt;
      return abt(ab->arg, f->right);
    }
    case RuleId::VarpiAnd: {
      auto* p = as<Proj>(t);
      if (!p) return std::nullopt;
      auto* ab = as<Abort>(p->arg);
      if (!ab) return std::nullopt;
      auto* an = as<TAnd>(ab->result);
      if (!an) return std::nullopt;
      return abt(ab->arg, p->index == 1 ? an->left : an->right);
    }
    case RuleId::VarpiOr: {
      auto* c = as<Case>(t);
      if (!c) return std::nullopt;
      auto* ab = as<Abort>(c->scrut);
      if (!ab) return std::nullopt;
      auto* d = as<TOr>(ab->result);
      if (!d) return std::nullopt;
      if (!type_eq(d->left, c->xAnnot) || !type_eq(d->right, c->yAnnot))
        return std::nullopt;
      return abt(ab->arg, c->result);
    }
    case RuleId::VarpiBot: {
      auto* a = as<Abort>(t);
      if (!a) return std::nullopt;
      auto* inner = as<Abort>(a->arg);
      if (!inner) return std::nullopt;
      if (!as<TBot>(inner->result)) return std::nullopt;
      return abt(inner->arg, a->result);
    }
    default:
      return std::nullopt;  // not a rule of this calculus
  }
}

namespace {

void collect_redexes(const TermRef& t, RuleSet rules, Path& cur,
                     std::vector<Redex>& out) {
  for (unsigned i = 0; i < kRuleCount; ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (is_fat_rule(r) || !rules.contains(r)) continue;
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

bool is_head_step(const TermRef& t, const Path& pos, RuleId rule) {
  if (rule != RuleId::BetaImp && rule != RuleId::BetaAnd &&
      rule != RuleId::BetaOr)
    return false;
  TermRef cur = t;
  for (int i : pos) {
    bool head = false;
    if (as<Lam>(cur))
      head = i == 0;
    else if (as<App>(cur))
      head = i == 0;
    else if (as<Pair>(cur))
      head = i == 0 || i == 1;
    else if (as<Inj>(cur))
      head = i == 0;
    else if (as<Case>(cur))
      head = i == 0;
    else if (as<Abort>(cur))
      head = i == 0;
    // projections are not head positions
    if (!head) return false;
    cur = child(cur, i);
  }
  return true;
}

}  // namespace ipcat::ipc
