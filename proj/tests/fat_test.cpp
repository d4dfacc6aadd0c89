#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "ipcat/fat.hpp"
#include "ipcat/gen.hpp"
#include "ipcat/rewrite.hpp"
#include "ipcat/translate.hpp"

using namespace ipcat;
using namespace ipcat::fat;

namespace {

const TypeRef tX = tvar("X");
const TypeRef tY = tvar("Y");

TermRef rewritten(RuleId r, const TermRef& t) {
  auto out = root_rewrite(r, t);
  REQUIRE(out.has_value());
  return *out;
}

// Small well-typed terms for the randomized properties, obtained by
// translating generated source terms.
std::vector<std::pair<Context, TermRef>> translated_samples(std::uint64_t seed,
                                                            int count) {
  std::vector<std::pair<Context, TermRef>> out;
  gen::GenConfig cfg;
  cfg.depth = 3;
  for (int i = 0; i < count; ++i) {
    gen::Gen g(gen::mix(seed, static_cast<std::uint64_t>(i)), cfg);
    ipc::Context ctx;
    ipc::TypeRef goal;
    ipc::TermRef t = g.sample(ctx, goal);
    out.emplace_back(trans::rp_context(ctx), trans::translate(t, trans::Kind::Optimized));
  }
  return out;
}

}  // namespace

TEST_CASE("free term and type variables") {
  TermRef polyId = tylam("X", lam("x", tX, var("x")));
  CHECK(free_vars(polyId).empty());
  CHECK(free_type_vars(polyId).empty());

  CHECK(free_type_vars(tyapp(var("f"), "Y")) == std::set<std::string>{"Y"});
  CHECK(free_vars(tyapp(var("f"), "Y")) == std::set<std::string>{"f"});

  TermRef open = lam("x", tX, var("y"));
  CHECK(free_vars(open) == std::set<std::string>{"y"});
  CHECK(free_type_vars(open) == std::set<std::string>{"X"});
}

TEST_CASE("type substitution handles shadowing and capture") {
  CHECK(type_eq(subst_type("Y", "X", imp(tX, tX)), imp(tY, tY)));
  CHECK(type_eq(subst_type("Y", "X", forall("X", tX)), forall("X", tX)));
  CHECK(type_eq(subst_type("Y", "X", forall("Z", imp(tX, tvar("Z")))),
                forall("Z", imp(tY, tvar("Z")))));
  // The binder Y would capture the substituted variable: rename it.
  CHECK(type_eq(subst_type("Y", "X", forall("Y", imp(tX, tY))),
                forall("W", imp(tY, tvar("W")))));
}

TEST_CASE("type equality is alpha equivalence") {
  CHECK(type_eq(forall("X", imp(tX, tX)), forall("Y", imp(tY, tY))));
  CHECK_FALSE(type_eq(forall("X", imp(tX, tX)), forall("Y", imp(tY, tvar("Z")))));
}

TEST_CASE("typing enforces the forall proviso and atomic instantiation") {
  Context empty;
  CHECK(type_eq(typecheck(empty, tylam("X", lam("x", tX, var("x")))),
                forall("X", imp(tX, tX))));

  Context cx;
  cx.add("x", tX);
  try {
    typecheck(cx, tylam("X", lam("y", tX, var("y"))));
    FAIL("proviso violation accepted");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::ForallProvisoViolated);
  }

  Context cf;
  cf.add("f", forall("X", tX));
  CHECK(type_eq(typecheck(cf, tyapp(var("f"), "Y")), tY));

  // Instantiating a non-quantified type is a mismatch.
  Context cg;
  cg.add("g", imp(tX, tX));
  CHECK_THROWS_AS(typecheck(cg, tyapp(var("g"), "Y")), TypeError);
}

TEST_CASE("beta rules contract at the root") {
  CHECK(alpha_eq(rewritten(RuleId::BetaImpF,
                           app(lam("x", tX, app(var("h"), var("x"))), var("a"))),
                 app(var("h"), var("a"))));
  CHECK(alpha_eq(rewritten(RuleId::BetaAndF, proj(2, pair(var("a"), var("b")))),
                 var("b")));
  CHECK(alpha_eq(rewritten(RuleId::BetaAll,
                           tyapp(tylam("X", lam("x", tX, var("x"))), "Y")),
                 lam("x", tY, var("x"))));
}

TEST_CASE("eta rules fire only under their side conditions") {
  CHECK(alpha_eq(rewritten(RuleId::EtaImpF, lam("x", tX, app(var("f"), var("x")))),
                 var("f")));
  CHECK_FALSE(root_rewrite(RuleId::EtaImpF, lam("x", tX, app(var("x"), var("x")))));

  CHECK(alpha_eq(rewritten(RuleId::EtaAndF, pair(proj(1, var("m")), proj(2, var("m")))),
                 var("m")));
  // The two projected subterms must be alpha-equal.
  CHECK_FALSE(root_rewrite(RuleId::EtaAndF, pair(proj(1, var("m")), proj(2, var("n")))));

  CHECK(alpha_eq(rewritten(RuleId::EtaAll, tylam("X", tyapp(var("f"), "X"))),
                 var("f")));
  // X free below the instantiation: no redex.
  CHECK_FALSE(root_rewrite(RuleId::EtaAll,
                           tylam("X", tyapp(tyapp(var("f"), "X"), "X"))));
  CHECK_FALSE(root_rewrite(RuleId::EtaAll,
                           tylam("X", tyapp(lam("x", tX, var("x")), "X"))));
}

TEST_CASE("normalization is leftmost outermost with exact step counts") {
  auto r1 = rw::normalize_fat(app(lam("x", tX, var("x")), var("y")),
                              RuleSet::fat_beta());
  CHECK(r1.finished);
  CHECK(r1.steps == 1);
  CHECK(alpha_eq(r1.term, var("y")));

  auto r2 = rw::normalize_fat(var("y"), RuleSet::fat_all());
  CHECK(r2.finished);
  CHECK(r2.steps == 0);

  TermRef two = pair(app(lam("x", tX, var("x")), var("a")),
                     app(lam("x", tX, var("x")), var("b")));
  auto r3 = rw::normalize_fat(two, RuleSet::fat_beta());
  CHECK(r3.finished);
  CHECK(r3.steps == 2);
  CHECK(alpha_eq(r3.term, pair(var("a"), var("b"))));

  // Fuel below the redex count leaves the result unfinished.
  auto r4 = rw::normalize_fat(two, RuleSet::fat_beta(), 1);
  CHECK_FALSE(r4.finished);
  CHECK(r4.steps == 1);
}

TEST_CASE("redexes and step_at work at positions") {
  TermRef t = pair(app(lam("x", tX, var("x")), var("a")), var("b"));
  auto rxs = redexes(t, RuleSet::fat_all());
  REQUIRE(rxs.size() == 1);
  CHECK(rxs[0].pos == Path{0});
  CHECK(rxs[0].rule == RuleId::BetaImpF);
  CHECK(alpha_eq(step_at(t, {0}, RuleId::BetaImpF), pair(var("a"), var("b"))));
  CHECK_THROWS_AS(step_at(t, {1}, RuleId::BetaImpF), InvalidPosition);
}

TEST_CASE("subject reduction across all six rules") {
  // One handwritten instance per rule, then a random sweep.
  Context ctx;
  ctx.add("h", imp(tX, tX));
  ctx.add("a", tX);
  ctx.add("m", conj(tX, tY));
  ctx.add("f", forall("X", imp(tX, tX)));

  std::vector<TermRef> ts = {
      app(lam("x", tX, app(var("h"), var("x"))), var("a")),
      proj(1, pair(var("a"), app(var("h"), var("a")))),
      tyapp(tylam("Z", lam("x", tvar("Z"), var("x"))), "Y"),
      lam("x", tX, app(var("h"), var("x"))),
      pair(proj(1, var("m")), proj(2, var("m"))),
      tylam("Z", tyapp(var("f"), "Z")),
  };
  for (const TermRef& t : ts) {
    TypeRef ty = typecheck(ctx, t);
    for (const Redex& rx : redexes(t, RuleSet::fat_all()))
      CHECK(type_eq(typecheck(ctx, step_at(t, rx.pos, rx.rule)), ty));
  }

  for (auto& [fctx, img] : translated_samples(21, 40)) {
    TypeRef ty = typecheck(fctx, img);
    auto rxs = redexes(img, RuleSet::fat_all());
    if (rxs.size() > 16) rxs.resize(16);
    for (const Redex& rx : rxs)
      CHECK(type_eq(typecheck(fctx, step_at(img, rx.pos, rx.rule)), ty));
  }
}

TEST_CASE("single step successors rejoin at the beta normal form") {
  for (auto& [fctx, img] : translated_samples(33, 30)) {
    auto base = rw::normalize_fat(img, RuleSet::fat_beta());
    REQUIRE(base.finished);
    std::string want = alpha_key(base.term);
    auto rxs = redexes(img, RuleSet::fat_beta());
    if (rxs.size() > 12) rxs.resize(12);
    for (const Redex& rx : rxs) {
      auto nf = rw::normalize_fat(step_at(img, rx.pos, rx.rule),
                                  RuleSet::fat_beta());
      REQUIRE(nf.finished);
      CHECK(alpha_key(nf.term) == want);
    }
  }
}

TEST_CASE("term substitution renames binders of both kinds") {
  // [y z / x](\y. x): term binder would capture y.
  TermRef n = app(var("y"), var("z"));
  TermRef r = subst(n, "x", lam("y", tX, var("x")));
  CHECK(alpha_eq(r, lam("w", tX, app(var("y"), var("z")))));

  // [f [Y] / x](/\Y. x): type binder would capture Y.
  TermRef n2 = tyapp(var("f"), "Y");
  TermRef r2 = subst(n2, "x", tylam("Y", var("x")));
  CHECK(alpha_eq(r2, tylam("Z", tyapp(var("f"), "Y"))));
  CHECK(free_type_vars(r2) == std::set<std::string>{"Y"});
}
