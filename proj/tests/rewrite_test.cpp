#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <string>
#include <vector>

#include "ipcat/rewrite.hpp"
#include "ipcat/translate.hpp"

using namespace ipcat;

namespace {

const fat::TypeRef tX = fat::tvar("X");
const ipc::TypeRef iX = ipc::tvar("X");

// Checks the chaining invariant and that every step replays through
// step_at from its own before-term.
template <class Calc>
void check_replay(const rw::Trace<Calc>& tr) {
  const typename Calc::Term* cur = &tr.start;
  for (const auto& s : tr.steps) {
    CHECK(Calc::alpha_eq(*cur, s.before));
    typename Calc::Term redone = Calc::step_at(s.before, s.pos, s.rule);
    CHECK(Calc::alpha_eq(redone, s.after));
    cur = &s.after;
  }
}

// Every term reachable in at most depth steps, paired with its exact
// shortest distance.
template <class Calc>
std::vector<std::pair<typename Calc::Term, int>> closure(
    const typename Calc::Term& from, RuleSet rules, int depth) {
  std::vector<std::pair<typename Calc::Term, int>> members{{from, 0}};
  std::vector<typename Calc::Term> frontier{from};
  std::map<std::string, bool> seen{{Calc::key(from), true}};
  for (int d = 1; d <= depth; ++d) {
    std::vector<typename Calc::Term> next;
    for (const auto& t : frontier)
      for (const Redex& rx : Calc::redexes(t, rules)) {
        typename Calc::Term u = Calc::step_at(t, rx.pos, rx.rule);
        if (seen.emplace(Calc::key(u), true).second) {
          members.emplace_back(u, d);
          next.push_back(u);
        }
      }
    frontier = std::move(next);
  }
  return members;
}

}  // namespace

TEST_CASE("reachability finds shortest witnesses") {
  fat::TermRef y = fat::var("y");
  auto self = rw::reachable<rw::FatCalc>(y, y, RuleSet::fat_all());
  REQUIRE(self.has_value());
  CHECK(self->steps.empty());

  fat::TermRef redex = fat::app(fat::lam("x", tX, fat::var("x")), y);
  auto one = rw::reachable<rw::FatCalc>(redex, y, RuleSet::fat_beta());
  REQUIRE(one.has_value());
  CHECK(one->steps.size() == 1);
  CHECK(one->steps[0].rule == RuleId::BetaImpF);

  CHECK_FALSE(rw::reachable<rw::FatCalc>(fat::var("x"), y, RuleSet::fat_all())
                  .has_value());

  // Two parallel redexes: the shortest route to the fully reduced pair
  // has exactly two steps even though several orders exist.
  fat::TermRef two = fat::pair(fat::app(fat::lam("x", tX, fat::var("x")), fat::var("a")),
                               fat::app(fat::lam("x", tX, fat::var("x")), fat::var("b")));
  auto tr = rw::reachable<rw::FatCalc>(two, fat::pair(fat::var("a"), fat::var("b")),
                                       RuleSet::fat_beta());
  REQUIRE(tr.has_value());
  CHECK(tr->steps.size() == 2);
  check_replay(*tr);

  // In the source calculus as well.
  ipc::TermRef it = ipc::app(ipc::lam("x", iX, ipc::var("x")), ipc::var("y"));
  auto itr = rw::reachable<rw::IpcCalc>(it, ipc::var("y"), RuleSet::ipc_beta());
  REQUIRE(itr.has_value());
  CHECK(itr->steps.size() == 1);
  check_replay(*itr);
}

TEST_CASE("translated beta endpoints are bridged") {
  ipc::TermRef redex = ipc::app(ipc::lam("x", iX, ipc::var("x")), ipc::var("y"));
  fat::TermRef from = trans::translate(redex, trans::Kind::Optimized);
  fat::TermRef to = trans::translate(ipc::var("y"), trans::Kind::Optimized);
  auto tr = rw::reachable<rw::FatCalc>(from, to, RuleSet::fat_beta());
  REQUIRE(tr.has_value());
  CHECK(!tr->steps.empty());
  check_replay(*tr);
}

TEST_CASE("reachability agrees with the exhaustive closure on small terms") {
  fat::TermRef idX = fat::lam("x", tX, fat::var("x"));
  std::vector<fat::TermRef> seeds = {
      fat::pair(fat::app(idX, fat::var("a")), fat::app(idX, fat::var("b"))),
      fat::app(idX, fat::app(idX, fat::var("a"))),
      fat::lam("z", tX, fat::app(fat::var("f"), fat::var("z"))),
      fat::tyapp(fat::tylam("Z", fat::lam("x", fat::tvar("Z"), fat::var("x"))), "Y"),
      fat::proj(1, fat::pair(fat::app(idX, fat::var("a")), fat::var("b"))),
  };
  for (const fat::TermRef& s : seeds) {
    // Everything in the closure is found, with the recorded distance as
    // the exact shortest length.
    auto members = closure<rw::FatCalc>(s, RuleSet::fat_all(), 4);
    for (const auto& [t, d] : members) {
      auto tr = rw::reachable<rw::FatCalc>(s, t, RuleSet::fat_all(), 4);
      REQUIRE(tr.has_value());
      CHECK(static_cast<int>(tr->steps.size()) == d);
      check_replay(*tr);
    }
    // Negative: an unrelated term is never reported reachable.
    CHECK_FALSE(rw::reachable<rw::FatCalc>(s, fat::var("nowhere"),
                                           RuleSet::fat_all(), 4)
                    .has_value());
  }
}

TEST_CASE("depth and node budgets cut the search off inconclusively") {
  fat::TermRef idX = fat::lam("x", tX, fat::var("x"));
  fat::TermRef t =
      fat::app(idX, fat::app(idX, fat::app(idX, fat::var("a"))));
  CHECK_FALSE(rw::reachable<rw::FatCalc>(t, fat::var("a"), RuleSet::fat_beta(), 2)
                  .has_value());
  CHECK(rw::reachable<rw::FatCalc>(t, fat::var("a"), RuleSet::fat_beta(), 3)
            .has_value());
  // A one-node budget cannot hold the intermediate states.
  fat::TermRef two = fat::pair(fat::app(idX, fat::var("a")), fat::app(idX, fat::var("b")));
  CHECK_FALSE(rw::reachable<rw::FatCalc>(two, fat::pair(fat::var("a"), fat::var("b")),
                                         RuleSet::fat_beta(), 12, 1)
                  .has_value());
}

TEST_CASE("normalization is deterministic with exact counts") {
  fat::TermRef idX = fat::lam("x", tX, fat::var("x"));
  fat::TermRef two = fat::pair(fat::app(idX, fat::var("a")), fat::app(idX, fat::var("b")));
  auto r = rw::normalize<rw::FatCalc>(two, RuleSet::fat_beta());
  CHECK(r.finished);
  CHECK(r.steps == 2);
  CHECK(fat::alpha_eq(r.term, fat::pair(fat::var("a"), fat::var("b"))));

  auto r0 = rw::normalize<rw::FatCalc>(fat::var("v"), RuleSet::fat_all());
  CHECK(r0.finished);
  CHECK(r0.steps == 0);

  auto r1 = rw::normalize<rw::FatCalc>(two, RuleSet::fat_beta(), 1);
  CHECK_FALSE(r1.finished);
  CHECK(r1.steps == 1);

  // The leftmost-outermost step is the first redex in enumeration order.
  auto rxs = fat::redexes(two, RuleSet::fat_beta());
  REQUIRE(!rxs.empty());
  auto after = fat::step_at(two, rxs[0].pos, rxs[0].rule);
  auto rOne = rw::normalize<rw::FatCalc>(two, RuleSet::fat_beta(), 1);
  CHECK(fat::alpha_eq(rOne.term, after));
}

TEST_CASE("joining at the normal form") {
  fat::TermRef idX = fat::lam("x", tX, fat::var("x"));
  fat::TermRef redex = fat::app(idX, fat::var("y"));

  auto same = rw::join_at_normal_form<rw::FatCalc>(fat::var("y"), fat::var("y"),
                                                   RuleSet::fat_all());
  REQUIRE(same.has_value());
  CHECK(*same);

  auto red = rw::join_at_normal_form<rw::FatCalc>(redex, fat::var("y"),
                                                  RuleSet::fat_all());
  REQUIRE(red.has_value());
  CHECK(*red);

  auto diff = rw::join_at_normal_form<rw::FatCalc>(fat::var("x"), fat::var("y"),
                                                   RuleSet::fat_all());
  REQUIRE(diff.has_value());
  CHECK_FALSE(*diff);

  // Out of fuel before either side normalizes: inconclusive, not false.
  fat::TermRef two = fat::pair(redex, fat::app(idX, fat::var("b")));
  CHECK_FALSE(rw::join_at_normal_form<rw::FatCalc>(two, fat::var("y"),
                                                   RuleSet::fat_beta(), 1)
                  .has_value());
}
