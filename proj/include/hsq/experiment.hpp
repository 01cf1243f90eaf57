#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hsq/ham_path.hpp"
#include "hsq/oracle.hpp"
#include "hsq/postproc.hpp"
#include "hsq/problems.hpp"
#include "hsq/qrt.hpp"

namespace hsq {

/// Reproducible description of an instance: the oracle table is rebuilt from
/// these fields and never serialized.
struct InstanceSpec {
  Family family = Family::Simon;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  TargetMode target = TargetMode::Subgroup;
};

nlohmann::json to_json(const InstanceSpec& spec);
InstanceSpec instance_spec_from_json(const nlohmann::json& j);

struct GenericTable {
  std::vector<Value> values;
};

/// A compiled problem instance with its reference answer.
class Instance {
 public:
  using Data = std::variant<SimonInstance, FactoringInstance, DlogInstance, DihedralInstance,
                            PeriodicInstance, GraphPair, HidingOracle>;

  static Instance build(const InstanceSpec& spec);

  const InstanceSpec& spec() const noexcept { return spec_; }
  const HidingOracle& oracle() const;
  const Data& data() const noexcept { return data_; }

  DivisionMode default_division() const;
  /// Bisection start for value mode (Z, modulus, or |Y|).
  Value value_bisection_start() const;
  DivisionSet division_set(std::optional<DivisionMode> mode = std::nullopt) const;

  /// Recovers the answer from register samples and checks it against the
  /// brute-force reference.
  Verdict solve(std::span<const Index> samples, std::size_t gip_budget) const;

 private:
  Instance(InstanceSpec spec, Data data) : spec_(std::move(spec)), data_(std::move(data)) {}

  InstanceSpec spec_;
  Data data_;
};

nlohmann::json to_json(const RunTrace& trace);
nlohmann::json to_json(const StepRecord& step);

struct ExperimentConfig {
  InstanceSpec instance;
  std::size_t trials = 1;
  RunOptions run;
  bool both_backends = false;
  std::optional<DivisionMode> division;
  std::size_t shots = 64;
  std::size_t gip_budget = 40;
  std::string out_dir;  // empty: no files written

  void validate(std::size_t domain_size) const;
};

struct TrialResult {
  RunResult run;
  std::optional<RunResult> dense_run;  // when both backends ran
  Verdict verdict;
  std::optional<Verdict> dense_verdict;
  double backend_trace_diff = 0.0;      // max |collapsed - dense| over trace quantities
  double backend_amplitude_diff = 0.0;  // max |collapsed - dense| over final amplitudes
  bool backends_agree = true;
};

struct ExperimentResult {
  int exit_code = 0;
  std::string message;
  std::vector<TrialResult> trials;
  std::shared_ptr<const PathSpec> path;
  std::size_t verified = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnverified = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStepFailure = 3;

inline constexpr double kTraceTolerance = 1e-6;
inline constexpr double kAmplitudeTolerance = 1e-8;

/// Compiles, simulates, post-processes and verifies; writes artifacts when
/// `out_dir` is set. Configuration errors are reported through exit_code.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// max |a - b| over every numeric trace quantity; infinity when the step
/// structure or repeat counts differ.
double trace_difference(const RunTrace& a, const RunTrace& b);

struct SweepCell {
  std::string label;
  ExperimentConfig config;
};

/// One row per (cell, step); failures recorded per row. Returns the CSV text.
std::string sweep(const std::vector<SweepCell>& cells);

/// Grid helpers for the sweep subcommand.
std::vector<SweepCell> sweep_grid(const ExperimentConfig& base, const std::string& family,
                                  std::uint64_t lo, std::uint64_t hi,
                                  const std::vector<std::string>& couplings);

/// Writes text to a file, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace hsq
