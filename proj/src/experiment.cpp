#include "hsq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "hsq/error.hpp"
#include "hsq/modular.hpp"

namespace hsq {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Edge> edges_from_json(const json& j, const char* key) {
  std::vector<Edge> out;
  for (const auto& e : j.at(key)) {
    require(e.is_array() && e.size() == 2, std::string(key) + ": edges must be [u, v] pairs");
    const auto u = e[0].get<long long>(), v = e[1].get<long long>();
    require(u >= 1 && v >= 1, std::string(key) + ": vertices are 1-indexed");
    out.emplace_back(static_cast<unsigned>(u - 1), static_cast<unsigned>(v - 1));
  }
  return out;
}

json edges_to_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (auto [u, v] : edges) out.push_back({u + 1, v + 1});
  return out;
}

template <class T>
T param(const json& p, const char* key) {
  if (!p.contains(key)) fail(ErrorKind::InvalidParameter, std::string("missing parameter '") + key + "'");
  return p.at(key).get<T>();
}

template <class T>
T param_or(const json& p, const char* key, T fallback) {
  return p.contains(key) && !p.at(key).is_null() ? p.at(key).get<T>() : fallback;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

// ---------------------------------------------------------------------------
// Instances

json to_json(const InstanceSpec& spec) {
  json j = spec.params;
  j["family"] = to_string(spec.family);
  j["seed"] = spec.seed;
  j["target"] = to_string(spec.target);
  return j;
}

InstanceSpec instance_spec_from_json(const json& j) {
  require(j.is_object(), "instance file must hold a JSON object");
  InstanceSpec spec;
  spec.family = family_from_string(param<std::string>(j, "family"));
  spec.seed = param_or<std::uint64_t>(j, "seed", 0);
  spec.target = target_mode_from_string(param_or<std::string>(j, "target", "subgroup"));
  spec.params = j;
  spec.params.erase("family");
  spec.params.erase("seed");
  spec.params.erase("target");
  return spec;
}

Instance Instance::build(const InstanceSpec& in) {
  InstanceSpec spec = in;
  json& p = spec.params;
  try {
    switch (spec.family) {
      case Family::Simon: {
        std::optional<std::uint64_t> a;
        if (p.contains("a") && !p["a"].is_null()) a = p["a"].get<std::uint64_t>();
        auto inst = build_simon(param<unsigned>(p, "n"), a, spec.seed, spec.target);
        p["a"] = inst.a;
        return Instance(spec, std::move(inst));
      }
      case Family::Factoring: {
        require(spec.target == TargetMode::Subgroup, "factor: oracle values are fixed by a^k mod Z");
        auto inst = build_factoring(param<std::uint64_t>(p, "Z"), param<std::uint64_t>(p, "a"),
                                    param_or<unsigned>(p, "pad", 1));
        p["pad"] = param_or<unsigned>(p, "pad", 1);
        return Instance(spec, std::move(inst));
      }
      case Family::Order: {
        require(spec.target == TargetMode::Subgroup, "order: oracle values are fixed by y^k mod N");
        auto inst = build_factoring(param<std::uint64_t>(p, "N"), param<std::uint64_t>(p, "y"),
                                    param_or<unsigned>(p, "pad", 1));
        p["pad"] = param_or<unsigned>(p, "pad", 1);
        return Instance(spec, std::move(inst));
      }
      case Family::Dlog: {
        require(spec.target == TargetMode::Subgroup, "dlog: oracle values are fixed by b^x1 a^x2");
        auto inst = build_dlog(param<std::uint64_t>(p, "N"), param<std::uint64_t>(p, "a"),
                               param<std::uint64_t>(p, "s"), param_or<std::uint64_t>(p, "R", 0));
        p["R"] = inst.R;
        return Instance(spec, std::move(inst));
      }
      case Family::Dihedral: {
        const auto N_rot = param<std::uint64_t>(p, "N");
        require(N_rot >= 2, "dihedral: N must be at least 2");
        std::uint64_t l;
        if (p.contains("l") && !p["l"].is_null()) {
          l = p["l"].get<std::uint64_t>();
        } else {
          l = CounterRng(spec.seed).substream(0x1D).below(N_rot);
        }
        p["l"] = l;
        return Instance(spec, build_dihedral(N_rot, l, spec.seed, spec.target));
      }
      case Family::Period:
        return Instance(spec, build_period(param<std::uint64_t>(p, "r"), param<unsigned>(p, "L"),
                                           spec.seed, spec.target));
      case Family::Gip:
        return Instance(spec, build_gip(edges_from_json(p, "edges_1"), edges_from_json(p, "edges_2"),
                                        param<unsigned>(p, "n"), spec.seed, spec.target));
      case Family::Generic: {
        require(spec.target == TargetMode::Subgroup, "hsp-generic: the table fixes the target coset");
        auto values = param<std::vector<Value>>(p, "values");
        require(!values.empty() && values.size() <= kMaxDomain, "hsp-generic: table size out of range");
        return Instance(spec, HidingOracle(std::move(values), Family::Generic));
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParameter, std::string("malformed instance parameters: ") + e.what());
  }
  fail(ErrorKind::InvalidParameter, "unsupported family");
}

const HidingOracle& Instance::oracle() const {
  return std::visit(overloaded{
                        [](const GraphPair& g) -> const HidingOracle& { return g.oracle(); },
                        [](const HidingOracle& o) -> const HidingOracle& { return o; },
                        [](const auto& inst) -> const HidingOracle& { return inst.oracle; },
                    },
                    data_);
}

DivisionMode Instance::default_division() const {
  return spec_.family == Family::Gip ? DivisionMode::Value : DivisionMode::Rank;
}

Value Instance::value_bisection_start() const {
  return std::visit(overloaded{
                        [](const FactoringInstance& f) -> Value { return f.Z; },
                        [](const DlogInstance& d) -> Value { return d.modulus; },
                        [](const GraphPair& g) -> Value { return g.y_size(); },
                        [this](const auto&) -> Value { return oracle().max_value(); },
                    },
                    data_);
}

DivisionSet Instance::division_set(std::optional<DivisionMode> mode) const {
  const DivisionMode m = mode.value_or(default_division());
  if (m == DivisionMode::Rank) return division_set_rank(spectrum(oracle()));
  if (oracle().min_value() < 1) {
    fail(ErrorKind::InvalidParameter, "value bisection needs a positive minimum oracle value");
  }
  return division_set_value(value_bisection_start(), oracle().min_value());
}

Verdict Instance::solve(std::span<const Index> samples, std::size_t gip_budget) const {
  Verdict v;
  v.family = spec_.family;
  v.samples_used = samples.size();
  std::visit(
      overloaded{
          [&](const SimonInstance& s) {
            const auto rec = recover_simon(samples, s.oracle);
            v.samples_used = rec.samples_used;
            if (rec.status != RecoveryStatus::Resolved) {
              v.answer = {{"status", to_string(rec.status)}};
              return;
            }
            v.answer = {{"a", rec.a}};
            v.verified = rec.a == brute_simon(s.oracle);
          },
          [&](const FactoringInstance& f) {
            const auto rec = recover_order(samples, f.Z, f.a);
            v.samples_used = rec.samples_used;
            if (rec.status == RecoveryStatus::NeedMoreSamples ||
                rec.status == RecoveryStatus::Inconclusive) {
              v.answer = {{"status", to_string(rec.status)}};
              return;
            }
            const bool order_ok = rec.r == brute_order(f.Z, f.a);
            v.answer = {{"r", rec.r}};
            if (spec_.family == Family::Order) {
              v.verified = order_ok;
              return;
            }
            if (rec.factors) {
              v.answer["factors"] = {rec.factors->first, rec.factors->second};
              v.verified = order_ok && rec.factors->first * rec.factors->second == f.Z;
            } else {
              v.answer["bad_base"] = true;
              v.note = "bad base, retry with new a";
              v.verified = order_ok;
            }
          },
          [&](const DlogInstance& d) {
            const auto rec = recover_dlog(samples, d.R, d.r, d.modulus, d.a, d.b);
            v.samples_used = rec.samples_used;
            if (rec.status != RecoveryStatus::Resolved) {
              v.answer = {{"status", to_string(rec.status)}};
              return;
            }
            v.answer = {{"s", rec.s}};
            v.verified = rec.s == brute_dlog(d.modulus, d.a, d.b);
          },
          [&](const DihedralInstance& d) {
            const auto rec = recover_dihedral(samples, d.N_rot, d.oracle);
            v.samples_used = rec.samples_used;
            if (rec.status != RecoveryStatus::Resolved) {
              v.answer = {{"status", to_string(rec.status)}};
              return;
            }
            v.answer = {{"l", rec.l}};
            v.verified = rec.l == brute_dihedral(d.oracle, d.N_rot);
          },
          [&](const PeriodicInstance& p) {
            const auto rec = recover_period(samples, p.oracle);
            v.samples_used = rec.samples_used;
            if (rec.status != RecoveryStatus::Resolved) {
              v.answer = {{"status", to_string(rec.status)}};
              return;
            }
            v.answer = {{"r", rec.r}};
            v.verified = rec.r == p.r;
          },
          [&](const GraphPair& g) {
            const auto gv = gip_verdict(samples, g, gip_budget);
            v.samples_used = gv.samples_used;
            v.confidence = gv.confidence;
            v.answer = {{"isomorphic", gv.isomorphic}, {"discarded", gv.discarded}};
            if (gv.leakage_warning) v.note = "more than 5% of samples were not automorphisms";
            const IsoResult ref = brute_iso(g.edges_1(), g.edges_2(), g.n());
            if (gv.isomorphic) {
              std::vector<unsigned> one_based(gv.witness);
              for (auto& x : one_based) ++x;
              v.answer["witness"] = one_based;
              v.verified = ref.isomorphic && is_isomorphism(g.edges_1(), g.edges_2(), gv.witness);
            } else {
              v.verified = !ref.isomorphic && gv.valid_samples >= gip_budget;
            }
          },
          [&](const HidingOracle& o) {
            const auto rec = recover_generic(samples, o);
            v.answer = {{"subgroup", rec.elements}, {"off_target", rec.off_target}};
            v.verified = rec.off_target == 0 && !rec.elements.empty();
          },
      },
      data_);
  return v;
}

// ---------------------------------------------------------------------------
// Traces

json to_json(const StepRecord& s) {
  return json{{"i", s.i},
              {"N_i", s.N_i},
              {"E0", s.E0},
              {"gap", s.gap},
              {"d0", s.d0},
              {"omega", s.omega},
              {"c", s.c},
              {"t", s.t},
              {"repeats", s.repeats},
              {"p_theory", s.p_theory},
              {"p_model", s.p_model},
              {"post_fidelity", s.post_fidelity},
              {"pre_fidelity", s.pre_fidelity},
              {"restore_fidelity", s.restore_fidelity},
              {"degenerate", s.degenerate}};
}

json to_json(const RunTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  json j{{"steps", steps},
         {"final_fidelity", t.final_fidelity},
         {"total_time", t.total_time},
         {"seed", t.seed},
         {"trial", t.trial},
         {"stream", t.stream},
         {"backend", to_string(t.backend)},
         {"policy", t.policy},
         {"renormalizations", t.renormalizations},
         {"restarts", t.restarts},
         {"completed", t.completed}};
  if (!t.restart_causes.empty()) j["restart_causes"] = t.restart_causes;
  if (!t.failure.empty()) j["failure"] = t.failure;
  return j;
}

double trace_difference(const RunTrace& a, const RunTrace& b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a.steps.size() != b.steps.size() || a.completed != b.completed || a.restarts != b.restarts) return inf;
  double d = std::max(std::abs(a.final_fidelity - b.final_fidelity), std::abs(a.total_time - b.total_time));
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    const auto& x = a.steps[k];
    const auto& y = b.steps[k];
    if (x.i != y.i || x.N_i != y.N_i || x.repeats != y.repeats) return inf;
    for (auto [p, q] : {std::pair{x.E0, y.E0}, {x.gap, y.gap}, {x.d0, y.d0}, {x.omega, y.omega},
                        {x.c, y.c}, {x.t, y.t}, {x.p_theory, y.p_theory}, {x.p_model, y.p_model},
                        {x.post_fidelity, y.post_fidelity}, {x.pre_fidelity, y.pre_fidelity},
                        {x.restore_fidelity, y.restore_fidelity}}) {
      d = std::max(d, std::abs(p - q));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Experiments

void ExperimentConfig::validate(std::size_t domain_size) const {
  require(trials >= 1, "trials must be at least 1");
  require(shots >= 2, "shots must be at least 2");
  require(gip_budget >= 1, "gip sample budget must be positive");
  require(run.max_repeats >= 1, "max-repeats must be at least 1");
  require(run.policy.time_factor > 0, "time factor must be positive");
  if (run.backend == Backend::Dense || both_backends) {
    if (2 * domain_size > 2 * kDenseRegisterLimit) {
      fail(ErrorKind::InvalidParameter, "dense backend rejected: 2N = " + std::to_string(2 * domain_size) +
                                            " exceeds 4096");
    }
  }
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidParameter, "cannot write " + path);
  out << text;
}

namespace {

void write_artifacts(const ExperimentConfig& config, const Instance& inst, const ExperimentResult& res) {
  const std::filesystem::path dir(config.out_dir);
  write_text((dir / "instance.json").string(), to_json(inst.spec()).dump(2) + "\n");

  std::ostringstream spec_csv;
  write_spectrum_csv(spec_csv, spectrum(inst.oracle()));
  write_text((dir / "spectrum.csv").string(), spec_csv.str());

  if (res.path) {
    std::ostringstream path_csv;
    write_path_csv(path_csv, *res.path);
    write_text((dir / "path.csv").string(), path_csv.str());
  }
  if (res.trials.empty()) return;

  const TrialResult& first = res.trials.front();
  write_text((dir / "trace.json").string(), to_json(first.run.trace).dump(2) + "\n");
  if (first.dense_run) {
    write_text((dir / "trace_dense.json").string(), to_json(first.dense_run->trace).dump(2) + "\n");
  }
  write_text((dir / "verdict.json").string(), to_json(first.verdict).dump(2) + "\n");

  std::string rows = "trial,seed,stream,completed,verified,answer,samples_used,total_repeats,restarts,total_time,final_fidelity\n";
  for (const TrialResult& t : res.trials) {
    const RunTrace& tr = t.run.trace;
    std::size_t repeats = 0;
    for (const auto& s : tr.steps) repeats += s.repeats;
    rows += fmt::format("{},{},{},{},{},{},{},{},{},{:.17g},{:.17g}\n", tr.trial, tr.seed, tr.stream,
                        tr.completed ? 1 : 0, t.verdict.verified ? 1 : 0,
                        csv_field(t.verdict.answer.dump()), t.verdict.samples_used, repeats, tr.restarts,
                        tr.total_time, tr.final_fidelity);
  }
  write_text((dir / "trials.csv").string(), rows);
}

TrialResult run_trial(const ExperimentConfig& config, const Instance& inst, const Simulator& sim,
                      const Simulator* dense, std::size_t trial) {
  const std::uint64_t seed = config.instance.seed;
  TrialResult out;
  const auto finish = [&](const RunResult& run) {
    Verdict v;
    v.family = config.instance.family;
    if (!run.ok()) {
      v.answer = {{"status", "step-failure"}};
      v.note = run.trace.failure;
      return v;
    }
    CounterRng rng = Simulator::sampling_stream(seed, trial);
    const auto samples = measure_register(run.state, config.shots, rng);
    return inst.solve(samples, config.gip_budget);
  };
  out.run = sim.run(seed, trial);
  out.verdict = finish(out.run);
  if (dense) {
    out.dense_run = dense->run(seed, trial);
    out.dense_verdict = finish(*out.dense_run);
    out.backend_trace_diff = trace_difference(out.run.trace, out.dense_run->trace);
    out.backend_amplitude_diff =
        (out.run.state.to_dense() - out.dense_run->state.amplitudes).cwiseAbs().maxCoeff();
    out.backends_agree = out.backend_trace_diff <= kTraceTolerance &&
                         out.backend_amplitude_diff <= kAmplitudeTolerance &&
                         out.verdict.answer == out.dense_verdict->answer;
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult res;
  std::optional<Instance> inst;
  std::unique_ptr<Simulator> sim, dense;
  try {
    inst.emplace(Instance::build(config.instance));
    config.validate(inst->oracle().domain_size());
    const DivisionSet dset = inst->division_set(config.division);
    res.path = std::make_shared<const PathSpec>(build_path(marked_hierarchy(inst->oracle(), dset)));
    RunOptions opts = config.run;
    if (config.both_backends) opts.backend = Backend::Collapsed;
    sim = std::make_unique<Simulator>(res.path, opts);
    if (config.both_backends) {
      opts.backend = Backend::Dense;
      dense = std::make_unique<Simulator>(res.path, opts);
    }
  } catch (const Error& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
    if (inst && !config.out_dir.empty()) write_artifacts(config, *inst, res);
    return res;
  }

  res.trials.resize(config.trials);
  parallel_for(config.trials, [&](std::size_t t) {
    res.trials[t] = run_trial(config, *inst, *sim, dense.get(), t);
  });

  bool step_failure = false, mismatch = false;
  for (const auto& t : res.trials) {
    step_failure |= !t.run.ok() || (t.dense_run && !t.dense_run->ok());
    mismatch |= !t.backends_agree;
    res.verified += t.verdict.verified && (!t.dense_verdict || t.dense_verdict->verified);
  }
  if (step_failure) {
    res.exit_code = kExitStepFailure;
    res.message = "step failure";
  } else if (mismatch) {
    res.exit_code = kExitUnverified;
    res.message = "collapsed and dense backends disagree";
  } else if (res.verified != res.trials.size()) {
    res.exit_code = kExitUnverified;
    res.message = fmt::format("{} of {} trials verified", res.verified, res.trials.size());
  } else {
    res.message = fmt::format("{} of {} trials verified", res.verified, res.trials.size());
  }
  if (!config.out_dir.empty()) write_artifacts(config, *inst, res);
  return res;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepCell> sweep_grid(const ExperimentConfig& base, const std::string& family,
                                  std::uint64_t lo, std::uint64_t hi,
                                  const std::vector<std::string>& couplings) {
  require(lo <= hi, "sweep range must satisfy lo <= hi");
  const std::vector<std::string> cs = couplings.empty() ? std::vector<std::string>{"auto"} : couplings;
  const Family fam = family_from_string(family);
  const bool sized = fam == Family::Simon || fam == Family::Dihedral || fam == Family::Gip ||
                     fam == Family::Period;
  if (!sized) hi = lo;

  std::vector<SweepCell> cells;
  for (std::uint64_t size = lo; size <= hi; ++size) {
    for (const std::string& c : cs) {
      SweepCell cell;
      cell.config = base;
      cell.config.trials = 1;
      cell.config.out_dir.clear();
      cell.config.run.policy = CouplingPolicy::parse(c);
      InstanceSpec& spec = cell.config.instance;
      spec.family = fam;
      switch (fam) {
        case Family::Simon:
          spec.params = {{"n", size}};
          break;
        case Family::Dihedral:
          spec.params = {{"N", size}};
          break;
        case Family::Period:
          spec.params["L"] = size;
          if (!spec.params.contains("r")) spec.params["r"] = 3;
          break;
        case Family::Gip: {
          const auto n = static_cast<unsigned>(size);
          CounterRng rng = CounterRng(spec.seed).substream(0x6000 + size);
          std::vector<Edge> e1, e2;
          for (unsigned v = 1; v < n; ++v) {
            for (unsigned u = 0; u < v; ++u) {
              if (rng.below(2)) e1.emplace_back(u, v);
            }
          }
          if (size % 2 == 0) {
            Permutation relabel = unrank_permutation(n, rng.below(factorial(n)));
            for (auto [u, v] : e1) e2.emplace_back(relabel[u], relabel[v]);
          } else {
            for (unsigned v = 1; v < n; ++v) {
              for (unsigned u = 0; u < v; ++u) {
                if (rng.below(2)) e2.emplace_back(u, v);
              }
            }
          }
          spec.params = {{"n", n}, {"edges_1", edges_to_json(e1)}, {"edges_2", edges_to_json(e2)}};
          break;
        }
        default:
          break;
      }
      cell.label = fmt::format("{}:{}:{}", family, sized ? std::to_string(size) : "-", c);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string sweep(const std::vector<SweepCell>& cells) {
  std::vector<std::string> chunks(cells.size());
  parallel_for(cells.size(), [&](std::size_t k) {
    const SweepCell& cell = cells[k];
    const ExperimentResult res = run_experiment(cell.config);
    std::string& out = chunks[k];
    const std::string label = csv_field(cell.label);
    if (res.exit_code == kExitConfig || res.trials.empty()) {
      out = fmt::format("{},,,,,,,,,,,,,0,{}\n", label, csv_field("error: " + res.message));
      return;
    }
    const TrialResult& t = res.trials.front();
    const auto& counts = res.path->hierarchy->counts;
    const std::string status = t.run.ok() ? (t.verdict.verified ? "ok" : "unverified") : "step-failure";
    for (const StepRecord& s : t.run.trace.steps) {
      const double ratio = static_cast<double>(counts[s.i]) / static_cast<double>(counts[s.i - 1]);
      out += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{},{:.17g},{},{}\n",
                         label, s.i, s.N_i, ratio, s.gap, s.d0, s.c, s.t, s.repeats, s.p_model,
                         1.0 - s.p_model, t.run.trace.restarts, t.run.trace.total_time,
                         t.verdict.verified ? 1 : 0, status);
    }
  });
  std::string csv = "cell,i,N_i,ratio,gap,d0,c,t,repeats,p_model,leakage,restarts,total_time,verified,status\n";
  for (const auto& c : chunks) csv += c;
  return csv;
}

}  // namespace hsq
