#include "ipcat/translate.hpp"

#include <functional>

#include "ipcat/fresh.hpp"

namespace ipcat::trans {

AtArg AtArg::term_arg(fat::TermRef t) {
  return AtArg{K::Term, std::move(t), 0, {}};
}
AtArg AtArg::proj_arg(int index) { return AtArg{K::Proj, nullptr, index, {}}; }
AtArg AtArg::type_var(std::string name) {
  return AtArg{K::TypeVar, nullptr, 0, std::move(name)};
}

fat::TypeRef rp_type(const ipc::TypeRef& a) {
  if (auto* v = ipc::as<ipc::TVar>(a)) return fat::tvar(v->name);
  if (ipc::as<ipc::TBot>(a)) {
    std::string x = fresh::name("X");
    return fat::forall(x, fat::tvar(x));
  }
  if (auto* i = ipc::as<ipc::TImp>(a))
    return fat::imp(rp_type(i->left), rp_type(i->right));
  if (auto* i = ipc::as<ipc::TAnd>(a))
    return fat::conj(rp_type(i->left), rp_type(i->right));
  auto* o = ipc::as<ipc::TOr>(a);
  fat::TypeRef l = rp_type(o->left);
  fat::TypeRef r = rp_type(o->right);
  auto fl = fat::free_type_vars(l);
  auto fr = fat::free_type_vars(r);
  std::string x = fresh::name_avoiding("X", {&fl, &fr});
  fat::TypeRef xv = fat::tvar(x);
  return fat::forall(
      x, fat::imp(fat::conj(fat::imp(l, xv), fat::imp(r, xv)), xv));
}

fat::Context rp_context(const ipc::Context& ctx) {
  fat::Context out;
  for (const auto& [name, ty] : ctx.decls()) out.add(name, rp_type(ty));
  return out;
}

fat::TermRef at_apply(const fat::TermRef& m, const AtArg& u) {
  switch (u.k) {
    case AtArg::K::Term:
      if (auto* l = fat::as<fat::Lam>(m))
        return fat::subst(u.term, l->bound, l->body);
      return fat::app(m, u.term);
    case AtArg::K::Proj:
      if (auto* p = fat::as<fat::Pair>(m))
        return u.index == 1 ? p->fst : p->snd;
      return fat::proj(u.index, m);
    case AtArg::K::TypeVar:
    default:
      if (auto* l = fat::as<fat::TyLam>(m))
        return fat::subst_type_in_term(u.tyvar, l->bound, l->body);
      return fat::tyapp(m, u.tyvar);
  }
}

fat::TermRef exp_lam(const std::string& x, const fat::TypeRef& annot,
                     const fat::TermRef& m) {
  auto fm = fat::free_vars(m);
  std::set<std::string> xs{x};
  std::string w = fresh::name_avoiding("w", {&fm, &xs});
  return fat::lam(w, annot, fat::app(fat::lam(x, annot, m), fat::var(w)));
}

fat::TermRef exp_pair(const fat::TermRef& m, const fat::TermRef& n) {
  fat::TermRef p = fat::pair(m, n);
  return fat::pair(fat::proj(1, p), fat::proj(2, p));
}

fat::TermRef inj_hat(int index, const fat::TermRef& m, const fat::TypeRef& a,
                     const fat::TypeRef& b) {
  auto ftm = fat::free_type_vars(m);
  auto fta = fat::free_type_vars(a);
  auto ftb = fat::free_type_vars(b);
  std::string x = fresh::name_avoiding("X", {&ftm, &fta, &ftb});
  auto fm = fat::free_vars(m);
  std::string w = fresh::name_avoiding("w", {&fm});
  fat::TypeRef xv = fat::tvar(x);
  return fat::tylam(
      x, fat::lam(w, fat::conj(fat::imp(a, xv), fat::imp(b, xv)),
                  fat::app(fat::proj(index, fat::var(w)), m)));
}

namespace {

fat::TermRef el_app(const fat::TermRef& m, fat::TermRef n, Kind kind) {
  return kind == Kind::Optimized ? at_apply(m, AtArg::term_arg(std::move(n)))
                                 : fat::app(m, std::move(n));
}

fat::TermRef el_proj(const fat::TermRef& m, int index, Kind kind) {
  return kind == Kind::Optimized ? at_apply(m, AtArg::proj_arg(index))
                                 : fat::proj(index, m);
}

fat::TermRef el_tyapp(const fat::TermRef& m, const std::string& x, Kind kind) {
  return kind == Kind::Optimized ? at_apply(m, AtArg::type_var(x))
                                 : fat::tyapp(m, x);
}

}  // namespace

fat::TermRef case_opt(const fat::TermRef& m, const std::string& x,
                      const fat::TypeRef& xAnnot, const fat::TermRef& p,
                      const std::string& y, const fat::TypeRef& yAnnot,
                      const fat::TermRef& q, const fat::TypeRef& c,
                      Kind kind) {
  if (auto* v = fat::as<fat::TVar>(c)) {
    fat::TermRef branches =
        fat::pair(fat::lam(x, xAnnot, p), fat::lam(y, yAnnot, q));
    return el_app(el_tyapp(m, v->name, kind), branches, kind);
  }
  if (auto* a = fat::as<fat::TAnd>(c)) {
    fat::TermRef l = case_opt(m, x, xAnnot, el_proj(p, 1, kind), y, yAnnot,
                              el_proj(q, 1, kind), a->left, kind);
    fat::TermRef r = case_opt(m, x, xAnnot, el_proj(p, 2, kind), y, yAnnot,
                              el_proj(q, 2, kind), a->right, kind);
    return fat::pair(l, r);
  }
  if (auto* i = fat::as<fat::TImp>(c)) {
    auto fm = fat::free_vars(m);
    auto fp = fat::free_vars(p);
    auto fq = fat::free_vars(q);
    std::set<std::string> binders{x, y};
    std::string z = fresh::name_avoiding("z", {&fm, &fp, &fq, &binders});
    return fat::lam(z, i->left,
                    case_opt(m, x, xAnnot, el_app(p, fat::var(z), kind), y,
                             yAnnot, el_app(q, fat::var(z), kind), i->right,
                             kind));
  }
  auto* f = fat::as<fat::TForall>(c);
  auto ftm = fat::free_type_vars(m);
  auto ftp = fat::free_type_vars(p);
  auto ftq = fat::free_type_vars(q);
  auto fta = fat::free_type_vars(xAnnot);
  auto ftb = fat::free_type_vars(yAnnot);
  std::string nx = fresh::name_avoiding("X", {&ftm, &ftp, &ftq, &fta, &ftb});
  fat::TypeRef body = fat::subst_type(nx, f->bound, f->body);
  return fat::tylam(nx, case_opt(m, x, xAnnot, el_tyapp(p, nx, kind), y,
                                 yAnnot, el_tyapp(q, nx, kind), body, kind));
}

fat::TermRef abort_opt(const fat::TermRef& m, const fat::TypeRef& a,
                       Kind kind) {
  if (auto* v = fat::as<fat::TVar>(a)) return el_tyapp(m, v->name, kind);
  if (auto* c = fat::as<fat::TAnd>(a))
    return fat::pair(abort_opt(m, c->left, kind), abort_opt(m, c->right, kind));
  if (auto* i = fat::as<fat::TImp>(a)) {
    auto fm = fat::free_vars(m);
    std::string z = fresh::name_avoiding("z", {&fm});
    return fat::lam(z, i->left, abort_opt(m, i->right, kind));
  }
  auto* f = fat::as<fat::TForall>(a);
  auto ftm = fat::free_type_vars(m);
  std::string nx = fresh::name_avoiding("X", {&ftm});
  return fat::tylam(nx, abort_opt(m, fat::subst_type(nx, f->bound, f->body),
                                  kind));
}

fat::TermRef translate(const ipc::TermRef& t, Kind kind) {
  if (auto* v = ipc::as<ipc::Var>(t)) return fat::var(v->name);
  if (auto* l = ipc::as<ipc::Lam>(t)) {
    fat::TypeRef annot = rp_type(l->annot);
    fat::TermRef body = translate(l->body, kind);
    return kind == Kind::Optimized ? exp_lam(l->bound, annot, body)
                                   : fat::lam(l->bound, annot, body);
  }
  if (auto* a = ipc::as<ipc::App>(t)) {
    fat::TermRef f = translate(a->fun, kind);
    fat::TermRef n = translate(a->arg, kind);
    return el_app(f, std::move(n), kind);
  }
  if (auto* p = ipc::as<ipc::Pair>(t)) {
    fat::TermRef f = translate(p->fst, kind);
    fat::TermRef s = translate(p->snd, kind);
    return kind == Kind::Optimized ? exp_pair(f, s) : fat::pair(f, s);
  }
  if (auto* p = ipc::as<ipc::Proj>(t))
    return el_proj(translate(p->arg, kind), p->index, kind);
  if (auto* i = ipc::as<ipc::Inj>(t))
    return inj_hat(i->index, translate(i->arg, kind), rp_type(i->left),
                   rp_type(i->right));
  if (auto* c = ipc::as<ipc::Case>(t))
    return case_opt(translate(c->scrut, kind), c->x, rp_type(c->xAnnot),
                    translate(c->left, kind), c->y, rp_type(c->yAnnot),
                    translate(c->right, kind), rp_type(c->result), kind);
  auto* a = ipc::as<ipc::Abort>(t);
  return abort_opt(translate(a->arg, kind), rp_type(a->result), kind);
}

std::vector<AtArg> default_pool() {
  std::string u = fresh::name("u");
  std::string w = fresh::name("w");
  std::string xt = fresh::name("X");
  return {
      AtArg::term_arg(fat::var(u)),
      AtArg::term_arg(fat::lam(w, fat::tvar(xt), fat::var(w))),
      AtArg::proj_arg(1),
      AtArg::proj_arg(2),
      AtArg::type_var(xt),
  };
}

namespace {

// Walks every chain p @ u1 @ ... @ uk, k <= maxLen, visiting each result.
// Stops early when visit returns false.
bool walk_chains(const fat::TermRef& p, const std::vector<AtArg>& pool,
                 int maxLen,
                 const std::function<bool(const fat::TermRef&)>& visit) {
  if (!visit(p)) return false;
  if (maxLen == 0) return true;
  for (const AtArg& u : pool) {
    if (!walk_chains(at_apply(p, u), pool, maxLen - 1, visit)) return false;
  }
  return true;
}

}  // namespace

bool is_z_special_bounded(const fat::TermRef& p, const std::string& z,
                          const std::vector<AtArg>& pool, int maxLen) {
  return walk_chains(p, pool, maxLen, [&](const fat::TermRef& r) {
    auto* v = fat::as<fat::Var>(r);
    return !(v && v->name == z);
  });
}

bool is_var_special_bounded(const fat::TermRef& p,
                            const std::vector<AtArg>& pool, int maxLen) {
  auto fp = fat::free_vars(p);
  return walk_chains(p, pool, maxLen, [&](const fat::TermRef& r) {
    auto* v = fat::as<fat::Var>(r);
    return !v || fp.count(v->name) != 0;
  });
}

bool is_pair_special_bounded(const fat::TermRef& p,
                             const std::vector<AtArg>& pool, int maxLen) {
  return walk_chains(p, pool, maxLen, [&](const fat::TermRef& r) {
    auto* pr = fat::as<fat::Pair>(r);
    if (!pr) return true;
    return fat::free_vars(pr->fst) == fat::free_vars(pr->snd);
  });
}

}  // namespace ipcat::trans
