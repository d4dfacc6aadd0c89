#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ipcat {

// Every rewrite rule of both calculi. The first fourteen belong to the
// source calculus, the rest to the target calculus. Enumeration order is
// the canonical order used when listing redexes.
enum class RuleId : unsigned {
  BetaImp,
  BetaAnd,
  BetaOr,
  EtaImp,
  EtaAnd,
  EtaOr,
  PiImp,
  PiAnd,
  PiOr,
  PiBot,
  VarpiImp,
  VarpiAnd,
  VarpiOr,
  VarpiBot,
  BetaImpF,
  BetaAndF,
  BetaAll,
  EtaImpF,
  EtaAndF,
  EtaAll,
};

inline constexpr unsigned kRuleCount = 20;

bool is_fat_rule(RuleId r);
std::string_view rule_name(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);

class RuleSet {
 public:
  constexpr RuleSet() = default;
  constexpr RuleSet(std::initializer_list<RuleId> rules) {
    for (RuleId r : rules) bits_ |= bit(r);
  }

  constexpr bool contains(RuleId r) const { return (bits_ & bit(r)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr RuleSet operator|(RuleSet o) const {
    RuleSet s;
    s.bits_ = bits_ | o.bits_;
    return s;
  }
  constexpr bool operator==(const RuleSet&) const = default;

  static RuleSet ipc_all();
  static RuleSet ipc_beta();    // beta-imp, beta-and, beta-or
  static RuleSet ipc_eta();     // eta-imp, eta-and, eta-or
  static RuleSet ipc_commute();  // all pi and varpi rules
  static RuleSet fat_all();
  static RuleSet fat_beta();     // fat beta-imp, beta-and, beta-all
  static RuleSet fat_eta();
  static RuleSet fat_beta_eta();

 private:
  static constexpr std::uint32_t bit(RuleId r) {
    return std::uint32_t{1} << static_cast<unsigned>(r);
  }
  std::uint32_t bits_ = 0;
};

// Path from the root: one child index per step. Child order per node is
// fixed (function before argument, scrutinee before branches).
using Path = std::vector<int>;

struct Redex {
  Path pos;
  RuleId rule;
  bool operator==(const Redex&) const = default;
};

std::string show_path(const Path& p);
std::optional<Path> parse_path(std::string_view s);

}  // namespace ipcat
