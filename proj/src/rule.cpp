#include "ipcat/rule.hpp"

namespace ipcat {

namespace {
constexpr std::string_view kNames[kRuleCount] = {
    "beta_imp",     "beta_and",     "beta_or",     "eta_imp",     "eta_and",
    "eta_or",       "pi_imp",       "pi_and",      "pi_or",       "pi_bot",
    "varpi_imp",    "varpi_and",    "varpi_or",    "varpi_bot",   "fat_beta_imp",
    "fat_beta_and", "fat_beta_all", "fat_eta_imp", "fat_eta_and", "fat_eta_all",
};
}

bool is_fat_rule(RuleId r) {
  return static_cast<unsigned>(r) >= static_cast<unsigned>(RuleId::BetaImpF);
}

std::string_view rule_name(RuleId r) { return kNames[static_cast<unsigned>(r)]; }

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (unsigned i = 0; i < kRuleCount; ++i) {
    if (kNames[i] == name) return static_cast<RuleId>(i);
  }
  return std::nullopt;
}

RuleSet RuleSet::ipc_all() {
  return ipc_beta() | ipc_eta() | ipc_commute();
}

RuleSet RuleSet::ipc_beta() {
  return {RuleId::BetaImp, RuleId::BetaAnd, RuleId::BetaOr};
}

RuleSet RuleSet::ipc_eta() {
  return {RuleId::EtaImp, RuleId::EtaAnd, RuleId::EtaOr};
}

RuleSet RuleSet::ipc_commute() {
  return {RuleId::PiImp,    RuleId::PiAnd,    RuleId::PiOr,    RuleId::PiBot,
          RuleId::VarpiImp, RuleId::VarpiAnd, RuleId::VarpiOr, RuleId::VarpiBot};
}

RuleSet RuleSet::fat_all() { return fat_beta_eta(); }

RuleSet RuleSet::fat_beta() {
  return {RuleId::BetaImpF, RuleId::BetaAndF, RuleId::BetaAll};
}

RuleSet RuleSet::fat_eta() {
  return {RuleId::EtaImpF, RuleId::EtaAndF, RuleId::EtaAll};
}

RuleSet RuleSet::fat_beta_eta() { return fat_beta() | fat_eta(); }

std::string show_path(const Path& p) {
  if (p.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

std::optional<Path> parse_path(std::string_view s) {
  if (s.empty() || s == "root") return Path{};
  Path p;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    int v = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      v = v * 10 + (s[i] - '0');
      ++i;
    }
    p.push_back(v);
    if (i < s.size()) {
      if (s[i] != '.') return std::nullopt;
      ++i;
      if (i == s.size()) return std::nullopt;
    }
  }
  return p;
}

}  // namespace ipcat
