#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ipcat/fresh.hpp"
#include "ipcat/gen.hpp"
#include "ipcat/parse.hpp"
#include "ipcat/rewrite.hpp"
#include "ipcat/sim.hpp"
#include "ipcat/translate.hpp"

// Exit codes: 0 success, 1 failed check or type error, 2 usage or syntax
// error. IPCAT_FUEL overrides the default normalization fuel.
namespace {

using namespace ipcat;

int default_fuel() {
  if (const char* s = std::getenv("IPCAT_FUEL")) {
    int v = std::atoi(s);
    if (v > 0) return v;
  }
  return rw::kDefaultFuel;
}

std::string read_input(const std::string& term, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (term == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return term;
}

// "name:TYPE" context entries, split at the first colon.
ipc::Context parse_ipc_context(const std::vector<std::string>& entries) {
  ipc::Context ctx;
  for (const auto& e : entries) {
    auto colon = e.find(':');
    if (colon == std::string::npos)
      throw parse::SyntaxError(1, 1, "context entry needs name:type");
    ctx.add(e.substr(0, colon), parse::ipc_type(e.substr(colon + 1)));
  }
  return ctx;
}

fat::Context parse_fat_context(const std::vector<std::string>& entries) {
  fat::Context ctx;
  for (const auto& e : entries) {
    auto colon = e.find(':');
    if (colon == std::string::npos)
      throw parse::SyntaxError(1, 1, "context entry needs name:type");
    ctx.add(e.substr(0, colon), parse::fat_type(e.substr(colon + 1)));
  }
  return ctx;
}

RuleSet named_rule_set(const std::string& name) {
  if (name == "ipc_all") return RuleSet::ipc_all();
  if (name == "ipc_beta") return RuleSet::ipc_beta();
  if (name == "ipc_eta") return RuleSet::ipc_eta();
  if (name == "ipc_commute") return RuleSet::ipc_commute();
  if (name == "fat_all") return RuleSet::fat_all();
  if (name == "fat_beta") return RuleSet::fat_beta();
  if (name == "fat_eta") return RuleSet::fat_eta();
  if (name == "fat_beta_eta") return RuleSet::fat_beta_eta();
  RuleSet rs;
  std::stringstream ss(name);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto r = rule_from_name(part);
    if (!r) throw CLI::ValidationError("--rules", "unknown rule set " + name);
    rs = rs | RuleSet{*r};
  }
  return rs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for the source calculus, the atomic polymorphic "
               "calculus and the translation between them"};
  app.require_subcommand(1);

  std::string term, file;
  std::vector<std::string> ctxEntries;
  bool useFat = false, baseline = false;

  auto addTermOpts = [&](CLI::App* cmd, bool withCtx = true) {
    cmd->add_option("term", term, "term text, or - for stdin");
    cmd->add_option("-f,--file", file, "read the term from a file");
    if (withCtx)
      cmd->add_option("-c,--ctx", ctxEntries,
                      "context entry name:type (repeatable)")
          ->allow_extra_args(false);
  };

  auto* tc = app.add_subcommand("typecheck", "print the type of a term");
  addTermOpts(tc);
  tc->add_flag("--fat", useFat, "target calculus instead of the source one");

  auto* tr = app.add_subcommand("translate", "translate a source term");
  addTermOpts(tr);
  tr->add_flag("--baseline", baseline, "baseline translation");
  bool trType = false;
  tr->add_flag("--type", trType, "also print the type of the image");

  auto* rd = app.add_subcommand("reduce", "apply one rule at one position");
  addTermOpts(rd, false);
  std::string ruleName, posText = "root";
  rd->add_option("--rule", ruleName, "rule name, e.g. beta_imp")->required();
  rd->add_option("--pos", posText, "position path, e.g. root or 0.1");

  auto* nm = app.add_subcommand("normalize", "reduce to normal form");
  addTermOpts(nm, false);
  std::string rulesName;
  int fuel = default_fuel();
  nm->add_flag("--fat", useFat, "target calculus instead of the source one");
  nm->add_option("--rules", rulesName,
                 "rule set name or comma separated rule names");
  nm->add_option("--fuel", fuel, "maximum number of steps");
  bool quietSteps = false;
  nm->add_flag("-q,--quiet", quietSteps, "print only the normal form");

  auto* sc = app.add_subcommand("simcheck",
                                "check the translation of source steps");
  addTermOpts(sc);
  sc->add_flag("--baseline", baseline, "baseline translation");
  std::string scRule, scPos;
  sc->add_option("--rule", scRule, "check one rule (with --pos)");
  sc->add_option("--pos", scPos, "check one position (with --rule)");
  int scMaxSteps = rw::kDefaultMaxSteps;
  sc->add_option("--max-steps", scMaxSteps, "search depth for the witness");

  auto* fz = app.add_subcommand("fuzz", "random simulation checking");
  std::uint64_t seed = 0;
  int samples = 100, depth = 4, maxRedexes = 32;
  fz->add_option("--seed", seed, "base seed");
  fz->add_option("--samples", samples, "number of generated terms");
  fz->add_option("--depth", depth, "term generation depth");
  fz->add_option("--max-redexes", maxRedexes, "redexes checked per term");
  fz->add_flag("--baseline", baseline, "baseline translation");
  std::string fzRules = "ipc_all";
  fz->add_option("--rules", fzRules, "source rules to exercise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tc->parsed()) {
      std::string text = read_input(term, file);
      if (useFat) {
        fat::TypeRef ty = fat::typecheck(parse_fat_context(ctxEntries),
                                         parse::fat_term(text));
        std::cout << fat::show(ty) << "\n";
      } else {
        ipc::TypeRef ty = ipc::typecheck(parse_ipc_context(ctxEntries),
                                         parse::ipc_term(text));
        std::cout << ipc::show(ty) << "\n";
      }
      return 0;
    }

    if (tr->parsed()) {
      ipc::TermRef t = parse::ipc_term(read_input(term, file));
      trans::Kind kind = baseline ? trans::Kind::Baseline : trans::Kind::Optimized;
      fresh::reset();
      fat::TermRef image = trans::translate(t, kind);
      std::cout << fat::show(image) << "\n";
      if (trType) {
        fat::Context fctx = trans::rp_context(parse_ipc_context(ctxEntries));
        std::cout << fat::show(fat::typecheck(fctx, image)) << "\n";
      }
      return 0;
    }

    if (rd->parsed()) {
      auto rule = rule_from_name(ruleName);
      if (!rule) {
        std::cerr << "unknown rule: " << ruleName << "\n";
        return 2;
      }
      auto pos = parse_path(posText);
      if (!pos) {
        std::cerr << "bad position: " << posText << "\n";
        return 2;
      }
      std::string text = read_input(term, file);
      try {
        if (is_fat_rule(*rule))
          std::cout << fat::show(fat::step_at(parse::fat_term(text), *pos, *rule))
                    << "\n";
        else
          std::cout << ipc::show(ipc::step_at(parse::ipc_term(text), *pos, *rule))
                    << "\n";
      } catch (const ipc::InvalidPosition& e) {
        std::cerr << e.what() << "\n";
        return 1;
      } catch (const fat::InvalidPosition& e) {
        std::cerr << e.what() << "\n";
        return 1;
      }
      return 0;
    }

    if (nm->parsed()) {
      std::string text = read_input(term, file);
      RuleSet rules = rulesName.empty()
                          ? (useFat ? RuleSet::fat_all() : RuleSet::ipc_all())
                          : named_rule_set(rulesName);
      if (useFat) {
        auto res = rw::normalize<rw::FatCalc>(parse::fat_term(text), rules, fuel);
        if (!quietSteps)
          std::cout << res.steps << (res.finished ? "" : "+") << " steps\n";
        std::cout << fat::show(res.term) << "\n";
        return res.finished ? 0 : 1;
      }
      auto res = rw::normalize<rw::IpcCalc>(parse::ipc_term(text), rules, fuel);
      if (!quietSteps)
        std::cout << res.steps << (res.finished ? "" : "+") << " steps\n";
      std::cout << ipc::show(res.term) << "\n";
      return res.finished ? 0 : 1;
    }

    if (sc->parsed()) {
      ipc::TermRef t = parse::ipc_term(read_input(term, file));
      ipc::Context ctx = parse_ipc_context(ctxEntries);
      sim::SimOptions opts;
      opts.kind = baseline ? trans::Kind::Baseline : trans::Kind::Optimized;
      opts.max_steps = scMaxSteps;
      opts.join_fuel = default_fuel();
      opts.deep_search = true;  // one redex at a time, spend the effort

      std::vector<Redex> targets;
      if (!scRule.empty() || !scPos.empty()) {
        auto rule = rule_from_name(scRule);
        auto pos = parse_path(scPos.empty() ? "root" : scPos);
        if (!rule || !pos) {
          std::cerr << "simcheck needs a valid --rule and --pos\n";
          return 2;
        }
        targets.push_back({*pos, *rule});
      } else {
        targets = ipc::redexes(t, RuleSet::ipc_all());
      }

      auto out = nlohmann::ordered_json::array();
      bool anyFailed = false;
      for (const Redex& rx : targets) {
        fresh::reset();
        sim::SimReport rep = sim::check_simulation(ctx, t, rx, opts);
        anyFailed = anyFailed || rep.verdict.kind == sim::VerdictKind::Failed;
        out.push_back(sim::to_json(rep));
      }
      std::cout << out.dump(2) << "\n";
      return anyFailed ? 1 : 0;
    }

    if (fz->parsed()) {
      sim::FuzzConfig cfg;
      cfg.seed = seed;
      cfg.samples = samples;
      cfg.max_redexes_per_term = maxRedexes;
      cfg.rules = named_rule_set(fzRules);
      cfg.gen.depth = depth;
      cfg.sim.kind = baseline ? trans::Kind::Baseline : trans::Kind::Optimized;
      cfg.sim.join_fuel = default_fuel();
      sim::FuzzStats stats = sim::run_fuzz(cfg);
      std::cout << sim::to_json(stats).dump(2) << "\n";
      return stats.ok() ? 0 : 1;
    }
  } catch (const parse::SyntaxError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ipc::TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return 1;
  } catch (const fat::TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
