#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsq/ham_path.hpp"
#include "hsq/rng.hpp"

namespace hsq {

enum class Backend { Collapsed, Dense };

const char* to_string(Backend b);
Backend backend_from_string(const std::string& s);

/// Largest register the dense backend accepts (probe included: 2N <= 4096).
inline constexpr std::size_t kDenseRegisterLimit = 2048;

struct StepParams {
  double omega = 0.0;
  double c = 0.0;
  double t = 0.0;
  double d0_expected = 1.0;
};

/// How c and t are chosen per step. Default: c = min(0.02, gap / 20), where
/// gap is the smaller of the two adjacent gaps, and t = pi / (2 c d0).
struct CouplingPolicy {
  enum class Kind { Auto, Fixed, GapRatio };
  Kind kind = Kind::Auto;
  double c_max = 0.02;
  double gap_divisor = 20.0;
  double fixed_c = 0.0;
  double time_factor = 1.0;  // t is scaled by this; 1 gives the quarter Rabi period

  /// "auto", "<c>" for a fixed coupling, or "gap/<k>".
  static CouplingPolicy parse(const std::string& text);
  std::string describe() const;
};

double resonance_omega(double E0_prev, double E0_cur);
double rabi_probability(double c, double t, double d0);

StepParams make_step_params(const EigenData& prev, const EigenData& cur, double d0,
                            const CouplingPolicy& policy);

/// Probe (x) register operator, probe-ground block first:
///   -(omega/2) Z (x) 1 + |1><1| (x) H_prev + |0><0| (x) H_cur + c X (x) 1.
Eigen::MatrixXd step_hamiltonian(const Eigen::MatrixXd& H_prev, const Eigen::MatrixXd& H_cur,
                                 const StepParams& params);

/// exp(-i H t) from a Hermitian eigendecomposition.
class Propagator {
 public:
  Propagator(const Eigen::MatrixXd& H, double t);

  void apply(Eigen::VectorXcd& state) const;
  Eigen::Index dim() const noexcept { return vectors_.rows(); }

 private:
  Eigen::MatrixXd vectors_;
  Eigen::VectorXcd phases_;
};

Eigen::VectorXcd evolve(const Eigen::VectorXcd& state, const Eigen::MatrixXd& H, double t);

struct ProbeMeasurement {
  bool decayed = false;
  double p_decay = 0.0;
  Eigen::VectorXcd register_state;  // renormalized block that was observed
};

/// Decay = probe found in |0>. Throws NumericalFailure if both blocks vanish.
ProbeMeasurement measure_probe(const Eigen::VectorXcd& state, CounterRng& rng);

struct StepOutcome {
  std::size_t repeats = 0;
  bool decayed = false;
  double p_theory = 0.0;
  double p_model = 0.0;          // decay probability of the first attempt
  double pre_fidelity = 0.0;     // |<phi_prev|register>|^2 on entry
  double post_fidelity = 0.0;    // |<phi_cur|register>|^2 after decay
  double restore_fidelity = 1.0; // min |<phi_prev|register>|^2 after a non-decay
  std::size_t non_decays = 0;
  std::size_t renormalizations = 0;
};

/// Repeat { probe excited; evolve t; measure } until decay or max_repeats.
/// `reg` is updated in place.
StepOutcome run_step(Eigen::VectorXcd& reg, const Propagator& U, const Eigen::VectorXcd& phi_prev,
                     const Eigen::VectorXcd& phi_cur, const StepParams& params, CounterRng& rng,
                     std::size_t max_repeats, bool purify = false);

StepOutcome run_step(Eigen::VectorXcd& reg, const Eigen::MatrixXd& H_prev,
                     const Eigen::MatrixXd& H_cur, const Eigen::VectorXcd& phi_prev,
                     const Eigen::VectorXcd& phi_cur, const StepParams& params, CounterRng& rng,
                     std::size_t max_repeats, bool purify = false);

struct RegisterState {
  Backend backend = Backend::Collapsed;
  Eigen::VectorXcd amplitudes;  // over atoms or over [0, N)
  std::shared_ptr<const MarkedHierarchy> hierarchy;

  Eigen::VectorXcd to_dense() const;
};

/// Independent samples of register indices. The collapsed form draws an atom
/// and then a uniform member of it.
std::vector<Index> measure_register(const RegisterState& state, std::size_t shots, CounterRng& rng);

struct StepRecord {
  std::size_t i = 0;
  std::size_t N_i = 0;
  double E0 = 0.0;
  double gap = 0.0;
  double d0 = 0.0;
  double omega = 0.0;
  double c = 0.0;
  double t = 0.0;
  std::size_t repeats = 0;
  double p_theory = 0.0;
  double p_model = 0.0;
  double post_fidelity = 0.0;
  double pre_fidelity = 0.0;
  double restore_fidelity = 1.0;
  bool degenerate = false;
};

struct RunTrace {
  std::vector<StepRecord> steps;
  double final_fidelity = 0.0;
  double total_time = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::uint64_t stream = 0;  // key of the per-trial stream
  Backend backend = Backend::Collapsed;
  std::string policy;
  std::size_t renormalizations = 0;
  std::size_t restarts = 0;  // whole-path restarts after a step exhausted max_repeats
  std::vector<std::string> restart_causes;
  bool completed = false;
  std::string failure;
};

struct RunOptions {
  Backend backend = Backend::Collapsed;
  CouplingPolicy policy;
  std::size_t max_repeats = 50;
  std::size_t max_restarts = 3;
  bool purify = false;
};

struct RunResult {
  RegisterState state;
  RunTrace trace;
  bool ok() const noexcept { return trace.completed; }
};

/// Precomputes per-step operators, parameters and propagators for one path so
/// that independent trials only pay for the protocol itself. `run` is const
/// and may be called concurrently.
class Simulator {
 public:
  Simulator(std::shared_ptr<const PathSpec> path, RunOptions options);

  RunResult run(std::uint64_t seed, std::uint64_t trial = 0) const;

  /// Protocol stream of a trial; register sampling should use sampling_stream.
  static CounterRng protocol_stream(std::uint64_t seed, std::uint64_t trial);
  static CounterRng sampling_stream(std::uint64_t seed, std::uint64_t trial);

  const PathSpec& path() const noexcept { return *path_; }
  const RunOptions& options() const noexcept { return options_; }
  const std::vector<StepParams>& params() const noexcept { return params_; }
  /// Ground vector of step i in the backend's representation.
  const Eigen::VectorXcd& ground(std::size_t i) const { return grounds_[i]; }

 private:
  std::shared_ptr<const PathSpec> path_;
  RunOptions options_;
  std::vector<StepParams> params_;          // per transition, index i-1
  std::vector<Eigen::VectorXcd> grounds_;   // per Hamiltonian
  std::vector<Propagator> propagators_;     // per transition
};

RunResult run_path(const PathSpec& path, const RunOptions& options, std::uint64_t seed,
                   std::uint64_t trial = 0);

}  // namespace hsq
