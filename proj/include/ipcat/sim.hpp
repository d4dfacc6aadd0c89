#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ipcat/fat.hpp"
#include "ipcat/gen.hpp"
#include "ipcat/ipc.hpp"
#include "ipcat/rewrite.hpp"
#include "ipcat/rule.hpp"
#include "ipcat/translate.hpp"

// The simulation checker: given a source reduction step, decide how the
// translated endpoints are related in the target calculus. Permutation
// steps under the optimized translation must collapse to the same term;
// beta and eta steps must be bridged by a short target reduction.
namespace ipcat::sim {

enum class VerdictKind {
  SyntacticIdentity,
  Reached,
  JoinedAtNormalForm,
  Failed,
};

std::string_view verdict_name(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Failed;
  int steps = 0;           // Reached: length of the witnessing reduction
  std::string rule_class;  // Reached: "beta" or "beta_eta"
  std::string detail;      // Failed: what went wrong
};

struct SimOptions {
  trans::Kind kind = trans::Kind::Optimized;
  int max_steps = rw::kDefaultMaxSteps;
  std::size_t node_budget = rw::kDefaultNodeBudget;
  int join_fuel = rw::kDefaultFuel;
  // Also check subject reduction of the source step, typing of both
  // images against the translated source type, and typing along the
  // witnessing trace.
  bool check_types = true;
  // Retry failed witness searches on the whole images and then region by
  // region along the differing spine. Finds witnesses the focused search
  // cannot (wrapper collapses above the focus, duplicated contraction
  // cascades) at a multiple of the cost, so it is off for bulk fuzzing
  // and on where single answers matter.
  bool deep_search = false;
};

struct SimReport {
  Redex redex;
  bool head = false;
  ipc::TermRef before, after;
  fat::TermRef img_before, img_after;
  std::optional<rw::FatTrace> trace;  // present iff verdict is Reached
  Verdict verdict;
};

// Applies the redex inside t and relates the translated endpoints.
// Throws ipc::TypeError only if t itself does not typecheck; everything
// downstream is reported through the verdict.
SimReport check_simulation(const ipc::Context& ctx, const ipc::TermRef& t,
                           const Redex& redex, const SimOptions& opts = {});

// A head beta step must do real work in the target: a nonempty witness
// between images that are not alpha-equal.
bool head_strict(const SimReport& r);

struct FuzzConfig {
  std::uint64_t seed = 0;
  int samples = 100;
  int max_redexes_per_term = 32;
  RuleSet rules = RuleSet::ipc_all();
  gen::GenConfig gen;
  SimOptions sim;
};

struct FuzzStats {
  int samples = 0;
  int redexes_checked = 0;
  std::array<int, kRuleCount> by_rule{};
  int identity = 0, reached = 0, joined = 0, failed = 0;
  std::vector<std::string> failures;  // rendered reports, first few only

  bool ok() const { return failed == 0; }
};

// Deterministic: sample i is generated from mix(seed, i) and the name
// counter is rebased per sample, so equal configs give equal stats and
// byte-identical JSON.
FuzzStats run_fuzz(const FuzzConfig& cfg);

nlohmann::ordered_json to_json(const SimReport& r);
nlohmann::ordered_json to_json(const FuzzStats& s);

}  // namespace ipcat::sim
