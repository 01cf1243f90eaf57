// Command-line driver: one subcommand per problem family plus `sweep`.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "hsq/error.hpp"
#include "hsq/experiment.hpp"

namespace {

using nlohmann::json;

struct Shared {
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1;
  std::string backend = "collapsed";
  std::string coupling = "auto";
  std::size_t max_repeats = 50;
  std::size_t max_restarts = 3;
  double time_factor = 1.0;
  bool purify = false;
  std::string out_dir;
  std::size_t shots = 64;
  std::size_t gip_budget = 40;
  std::string target = "subgroup";
  std::string division;
};

void add_shared(CLI::App* cmd, Shared& s) {
  cmd->add_option("--seed", s.seed, "RNG seed (falls back to HSQ_SEED, then 0)");
  cmd->add_option("--trials", s.trials, "Independent trials");
  cmd->add_option("--backend", s.backend, "collapsed | dense | both")
      ->check(CLI::IsMember({"collapsed", "dense", "both"}));
  cmd->add_option("--coupling", s.coupling, "auto | <c> | gap/<k>");
  cmd->add_option("--max-repeats", s.max_repeats, "Per-step decay attempts before failing");
  cmd->add_option("--max-restarts", s.max_restarts, "Whole-path restarts after a step failure");
  cmd->add_option("--time-factor", s.time_factor, "Scale of the evolution time; 1 is a quarter Rabi period");
  cmd->add_flag("--purify", s.purify, "Project onto the ground state after each decay");
  cmd->add_option("--out-dir", s.out_dir, "Directory for trace, path, spectrum and verdict files");
  cmd->add_option("--shots", s.shots, "Register samples per trial");
  cmd->add_option("--gip-budget", s.gip_budget, "Valid samples before declaring non-isomorphic");
  cmd->add_option("--target-value", s.target, "subgroup | random")
      ->check(CLI::IsMember({"subgroup", "random"}));
  cmd->add_option("--division", s.division, "rank | value (default depends on family)")
      ->check(CLI::IsMember({"rank", "value"}));
}

std::uint64_t resolve_seed(const Shared& s) {
  if (s.seed) return *s.seed;
  if (const char* env = std::getenv("HSQ_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      hsq::fail(hsq::ErrorKind::InvalidParameter, std::string("HSQ_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

hsq::ExperimentConfig make_config(const Shared& s, hsq::Family family, json params) {
  hsq::ExperimentConfig cfg;
  cfg.instance.family = family;
  cfg.instance.params = std::move(params);
  cfg.instance.seed = resolve_seed(s);
  cfg.instance.target = hsq::target_mode_from_string(s.target);
  cfg.trials = s.trials;
  cfg.both_backends = s.backend == "both";
  cfg.run.backend = cfg.both_backends ? hsq::Backend::Collapsed : hsq::backend_from_string(s.backend);
  cfg.run.policy = hsq::CouplingPolicy::parse(s.coupling);
  cfg.run.max_repeats = s.max_repeats;
  cfg.run.max_restarts = s.max_restarts;
  cfg.run.policy.time_factor = s.time_factor;
  cfg.run.purify = s.purify;
  cfg.out_dir = s.out_dir;
  cfg.shots = s.shots;
  cfg.gip_budget = s.gip_budget;
  if (s.division == "rank") cfg.division = hsq::DivisionMode::Rank;
  if (s.division == "value") cfg.division = hsq::DivisionMode::Value;
  return cfg;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) hsq::fail(hsq::ErrorKind::InvalidParameter, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    hsq::fail(hsq::ErrorKind::InvalidParameter, path + ": " + e.what());
  }
}

int report(const hsq::ExperimentResult& res) {
  json out{{"exit_code", res.exit_code}, {"message", res.message}, {"trials", res.trials.size()},
           {"verified", res.verified}};
  if (res.path) out["steps"] = res.path->m();
  if (!res.trials.empty()) out["verdict"] = hsq::to_json(res.trials.front().verdict);
  std::cout << out.dump(2) << "\n";
  if (res.exit_code == hsq::kExitConfig) std::cerr << "error: " << res.message << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multistep resonant-transition simulator for hidden subgroup problems"};
  app.require_subcommand(1);

  Shared shared;
  std::map<std::string, json> params;
  std::optional<std::uint64_t> simon_a, dihedral_l;
  std::uint64_t simon_n = 3, Z = 15, a = 2, order_N = 15, y = 2, dlog_N = 15, dlog_a = 2, dlog_s = 1,
                dlog_R = 0, dih_N = 8, period_r = 3, period_L = 6;
  unsigned pad = 1;
  std::string graphs, table;

  auto* simon = app.add_subcommand("simon", "Simon's problem on Z_2^n");
  simon->add_option("--n", simon_n, "Bits")->required();
  simon->add_option("--a", simon_a, "Hidden shift (drawn from the seed when omitted)");
  add_shared(simon, shared);

  auto* factor = app.add_subcommand("factor", "Factor Z through the order of a mod Z");
  factor->add_option("--Z", Z)->required();
  factor->add_option("--a", a)->required();
  factor->add_option("--pad", pad, "Extra register bits beyond ceil(log2 Z)");
  add_shared(factor, shared);

  auto* order = app.add_subcommand("order", "Order of y mod N");
  order->add_option("--N", order_N)->required();
  order->add_option("--y", y)->required();
  order->add_option("--pad", pad, "Extra register bits beyond ceil(log2 N)");
  add_shared(order, shared);

  auto* dlog = app.add_subcommand("dlog", "Discrete log: find s with a^s = b mod N");
  dlog->add_option("--N", dlog_N)->required();
  dlog->add_option("--a", dlog_a)->required();
  dlog->add_option("--s", dlog_s, "Planted exponent; b = a^s")->required();
  dlog->add_option("--R", dlog_R, "Register range per coordinate (default: multiple of the order)");
  add_shared(dlog, shared);

  auto* dihedral = app.add_subcommand("dihedral", "Dihedral HSP with subgroup {(0,0), (1,l)}");
  dihedral->add_option("--N", dih_N, "Rotation count")->required();
  dihedral->add_option("--l", dihedral_l, "Hidden reflection (drawn from the seed when omitted)");
  add_shared(dihedral, shared);

  auto* gip = app.add_subcommand("gip", "Graph isomorphism of two labeled graphs");
  gip->add_option("--graphs", graphs, "JSON {n, edges_1, edges_2}, 1-indexed")->required()->check(CLI::ExistingFile);
  add_shared(gip, shared);

  auto* period = app.add_subcommand("period", "Period finding on Z_{2^L}");
  period->add_option("--r", period_r)->required();
  period->add_option("--L", period_L)->required();
  add_shared(period, shared);

  auto* generic = app.add_subcommand("hsp-generic", "Explicit oracle table");
  generic->add_option("--table", table, "JSON array of values, or {\"values\": [...]}")
      ->required()
      ->check(CLI::ExistingFile);
  add_shared(generic, shared);

  auto* run = app.add_subcommand("run", "Re-run an instance.json written by a previous experiment");
  std::string instance_file;
  run->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  add_shared(run, shared);

  auto* sweep = app.add_subcommand("sweep", "Grid over instance size and coupling; one CSV row per step");
  std::string sweep_family = "simon", sweep_base, sweep_out;
  std::uint64_t lo = 3, hi = 6;
  std::vector<std::string> couplings;
  sweep->add_option("--family", sweep_family, "simon | dihedral | gip | period | any family with --base");
  sweep->add_option("--lo", lo, "Smallest n, N_rot or L");
  sweep->add_option("--hi", hi, "Largest n, N_rot or L");
  sweep->add_option("--couplings", couplings, "Coupling policies, e.g. 0.02 0.01 0.005")->delimiter(',');
  sweep->add_option("--base", sweep_base, "instance.json holding fixed parameters")->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "CSV path (stdout when omitted)");
  add_shared(sweep, shared);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : hsq::kExitConfig;
  }

  try {
    if (*sweep) {
      hsq::ExperimentConfig base = make_config(shared, hsq::family_from_string(sweep_family), json::object());
      if (!sweep_base.empty()) {
        const hsq::InstanceSpec spec = hsq::instance_spec_from_json(read_json(sweep_base));
        base.instance.params = spec.params;
        if (spec.family != hsq::family_from_string(sweep_family)) {
          hsq::fail(hsq::ErrorKind::InvalidParameter, "--base family does not match --family");
        }
      }
      if (couplings.empty()) couplings.push_back(shared.coupling);
      const std::string csv = hsq::sweep(hsq::sweep_grid(base, sweep_family, lo, hi, couplings));
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        hsq::write_text(sweep_out, csv);
      }
      return 0;
    }

    hsq::ExperimentConfig cfg;
    if (*simon) {
      json p{{"n", simon_n}};
      if (simon_a) p["a"] = *simon_a;
      cfg = make_config(shared, hsq::Family::Simon, p);
    } else if (*factor) {
      cfg = make_config(shared, hsq::Family::Factoring, {{"Z", Z}, {"a", a}, {"pad", pad}});
    } else if (*order) {
      cfg = make_config(shared, hsq::Family::Order, {{"N", order_N}, {"y", y}, {"pad", pad}});
    } else if (*dlog) {
      cfg = make_config(shared, hsq::Family::Dlog, {{"N", dlog_N}, {"a", dlog_a}, {"s", dlog_s}, {"R", dlog_R}});
    } else if (*dihedral) {
      json p{{"N", dih_N}};
      if (dihedral_l) p["l"] = *dihedral_l;
      cfg = make_config(shared, hsq::Family::Dihedral, p);
    } else if (*gip) {
      const json g = read_json(graphs);
      cfg = make_config(shared, hsq::Family::Gip,
                        {{"n", g.at("n")}, {"edges_1", g.at("edges_1")}, {"edges_2", g.at("edges_2")}});
    } else if (*period) {
      cfg = make_config(shared, hsq::Family::Period, {{"r", period_r}, {"L", period_L}});
    } else if (*generic) {
      json t = read_json(table);
      if (t.is_object()) t = t.at("values");
      cfg = make_config(shared, hsq::Family::Generic, {{"values", t}});
    } else if (*run) {
      const hsq::InstanceSpec spec = hsq::instance_spec_from_json(read_json(instance_file));
      cfg = make_config(shared, spec.family, spec.params);
      if (!shared.seed && !std::getenv("HSQ_SEED")) cfg.instance.seed = spec.seed;
      cfg.instance.target = spec.target;
    }
    return report(hsq::run_experiment(cfg));
  } catch (const hsq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hsq::kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hsq::kExitConfig;
  }
}
