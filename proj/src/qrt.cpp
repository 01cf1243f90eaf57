#include "hsq/qrt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "hsq/error.hpp"

namespace hsq {

namespace {

constexpr std::uint64_t kProtocolStream = 0x51;
constexpr std::uint64_t kSamplingStream = 0x52;
constexpr double kNormTol = 1e-9;

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::norm(a.dot(b));
}

Eigen::VectorXcd embed_dense(const Eigen::VectorXd& atoms, const MarkedHierarchy& h) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(h.N));
  for (std::size_t k = 0; k < h.atoms.size(); ++k) {
    const double amp = atoms[k] / std::sqrt(static_cast<double>(h.atoms[k].size()));
    for (Index j : h.atoms[k].members) out[j] = amp;
  }
  return out;
}

}  // namespace

const char* to_string(Backend b) { return b == Backend::Collapsed ? "collapsed" : "dense"; }

Backend backend_from_string(const std::string& s) {
  if (s == "collapsed") return Backend::Collapsed;
  if (s == "dense") return Backend::Dense;
  fail(ErrorKind::InvalidParameter, "unknown backend '" + s + "'");
}

CouplingPolicy CouplingPolicy::parse(const std::string& text) {
  CouplingPolicy p;
  if (text.empty() || text == "auto") return p;
  try {
    if (text.rfind("gap/", 0) == 0) {
      p.kind = Kind::GapRatio;
      std::size_t used = 0;
      p.gap_divisor = std::stod(text.substr(4), &used);
      require(used == text.size() - 4, "trailing characters in coupling");
      require(p.gap_divisor > 0, "coupling divisor must be positive");
    } else {
      p.kind = Kind::Fixed;
      std::size_t used = 0;
      p.fixed_c = std::stod(text, &used);
      require(used == text.size(), "trailing characters in coupling");
      require(p.fixed_c > 0, "coupling must be positive");
    }
  } catch (const std::logic_error&) {
    fail(ErrorKind::InvalidParameter, "cannot parse coupling '" + text + "'");
  }
  return p;
}

std::string CouplingPolicy::describe() const {
  switch (kind) {
    case Kind::Auto: return "auto";
    case Kind::Fixed: return std::to_string(fixed_c);
    case Kind::GapRatio: return "gap/" + std::to_string(gap_divisor);
  }
  return "auto";
}

double resonance_omega(double E0_prev, double E0_cur) { return E0_cur - E0_prev; }

double rabi_probability(double c, double t, double d0) {
  const double s = std::sin(c * t * d0);
  return s * s;
}

StepParams make_step_params(const EigenData& prev, const EigenData& cur, double d0,
                            const CouplingPolicy& policy) {
  StepParams p;
  p.omega = resonance_omega(prev.E0, cur.E0);
  p.d0_expected = d0;
  // A zero gap marks a single-level operator: nothing to leak into, no bound on c.
  constexpr double none = std::numeric_limits<double>::infinity();
  const double gap = std::min(prev.gap > 0 ? prev.gap : none, cur.gap > 0 ? cur.gap : none);
  switch (policy.kind) {
    case CouplingPolicy::Kind::Auto: p.c = std::min(policy.c_max, gap / policy.gap_divisor); break;
    case CouplingPolicy::Kind::Fixed: p.c = policy.fixed_c; break;
    case CouplingPolicy::Kind::GapRatio: p.c = gap == none ? policy.c_max : gap / policy.gap_divisor; break;
  }
  if (!(p.c > 0)) fail(ErrorKind::InvalidParameter, "coupling must be positive (zero gap?)");
  p.t = policy.time_factor * std::numbers::pi / (2.0 * p.c * d0);
  return p;
}

Eigen::MatrixXd step_hamiltonian(const Eigen::MatrixXd& H_prev, const Eigen::MatrixXd& H_cur,
                                 const StepParams& params) {
  if (H_prev.rows() != H_cur.rows() || H_prev.cols() != H_cur.cols() ||
      H_prev.rows() != H_prev.cols()) {
    fail(ErrorKind::BasisMismatch, "step_hamiltonian: register operators differ in shape");
  }
  const Eigen::Index n = H_prev.rows();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  H.topLeftCorner(n, n) = H_cur;
  H.bottomRightCorner(n, n) = H_prev;
  H.topLeftCorner(n, n).diagonal().array() -= 0.5 * params.omega;
  H.bottomRightCorner(n, n).diagonal().array() += 0.5 * params.omega;
  H.topRightCorner(n, n).diagonal().setConstant(params.c);
  H.bottomLeftCorner(n, n).diagonal().setConstant(params.c);
  return H;
}

Propagator::Propagator(const Eigen::MatrixXd& H, double t) {
  require(t >= 0, "evolution time must be non-negative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "propagator eigensolve failed");
  vectors_ = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  phases_.resize(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases_[k] = std::polar(1.0, -lambda[k] * t);
}

void Propagator::apply(Eigen::VectorXcd& state) const {
  if (state.size() != vectors_.rows()) fail(ErrorKind::BasisMismatch, "propagator dimension mismatch");
  // V is real: transform real and imaginary parts separately.
  const Eigen::VectorXd re = vectors_.transpose() * state.real();
  const Eigen::VectorXd im = vectors_.transpose() * state.imag();
  Eigen::VectorXcd coeffs(re.size());
  coeffs.real() = re;
  coeffs.imag() = im;
  coeffs.array() *= phases_.array();
  const Eigen::VectorXd out_re = vectors_ * coeffs.real();
  const Eigen::VectorXd out_im = vectors_ * coeffs.imag();
  state.real() = out_re;
  state.imag() = out_im;
  if (!state.allFinite()) fail(ErrorKind::NumericalFailure, "non-finite amplitudes after evolution");
}

Eigen::VectorXcd evolve(const Eigen::VectorXcd& state, const Eigen::MatrixXd& H, double t) {
  Eigen::VectorXcd out = state;
  if (t == 0.0) return out;
  Propagator(H, t).apply(out);
  return out;
}

ProbeMeasurement measure_probe(const Eigen::VectorXcd& state, CounterRng& rng) {
  const Eigen::Index n = state.size() / 2;
  const double p0 = state.head(n).squaredNorm();
  const double p1 = state.tail(n).squaredNorm();
  if (p0 < 1e-12 && p1 < 1e-12) fail(ErrorKind::NumericalFailure, "measure_probe: degenerate norm");
  ProbeMeasurement out;
  out.p_decay = p0 / (p0 + p1);
  out.decayed = rng.uniform() < out.p_decay;
  out.register_state = out.decayed ? state.head(n) / std::sqrt(p0) : state.tail(n) / std::sqrt(p1);
  return out;
}

StepOutcome run_step(Eigen::VectorXcd& reg, const Propagator& U, const Eigen::VectorXcd& phi_prev,
                     const Eigen::VectorXcd& phi_cur, const StepParams& params, CounterRng& rng,
                     std::size_t max_repeats, bool purify) {
  const Eigen::Index n = reg.size();
  if (U.dim() != 2 * n || phi_prev.size() != n || phi_cur.size() != n) {
    fail(ErrorKind::BasisMismatch, "run_step: register and operator dimensions disagree");
  }
  StepOutcome out;
  out.p_theory = rabi_probability(params.c, params.t, params.d0_expected);
  out.pre_fidelity = fidelity(phi_prev, reg);

  Eigen::VectorXcd full(2 * n);
  while (out.repeats < max_repeats) {
    ++out.repeats;
    full.head(n).setZero();
    full.tail(n) = reg;
    U.apply(full);
    const double norm = full.norm();
    if (std::abs(norm - 1.0) > kNormTol) {
      full /= norm;
      ++out.renormalizations;
    }
    auto m = measure_probe(full, rng);
    if (out.repeats == 1) out.p_model = m.p_decay;
    reg = std::move(m.register_state);
    if (m.decayed) {
      out.decayed = true;
      if (purify) {
        const std::complex<double> amp = phi_cur.dot(reg);
        reg = phi_cur * (std::abs(amp) > 0 ? amp / std::abs(amp) : 1.0);
      }
      out.post_fidelity = fidelity(phi_cur, reg);
      return out;
    }
    ++out.non_decays;
    out.restore_fidelity = std::min(out.restore_fidelity, fidelity(phi_prev, reg));
  }
  return out;
}

StepOutcome run_step(Eigen::VectorXcd& reg, const Eigen::MatrixXd& H_prev,
                     const Eigen::MatrixXd& H_cur, const Eigen::VectorXcd& phi_prev,
                     const Eigen::VectorXcd& phi_cur, const StepParams& params, CounterRng& rng,
                     std::size_t max_repeats, bool purify) {
  const Propagator U(step_hamiltonian(H_prev, H_cur, params), params.t);
  return run_step(reg, U, phi_prev, phi_cur, params, rng, max_repeats, purify);
}

Eigen::VectorXcd RegisterState::to_dense() const {
  if (backend == Backend::Dense) return amplitudes;
  const MarkedHierarchy& h = *hierarchy;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(h.N));
  for (std::size_t k = 0; k < h.atoms.size(); ++k) {
    const auto amp = amplitudes[k] / std::sqrt(static_cast<double>(h.atoms[k].size()));
    for (Index j : h.atoms[k].members) out[j] = amp;
  }
  return out;
}

std::vector<Index> measure_register(const RegisterState& state, std::size_t shots, CounterRng& rng) {
  require(shots >= 1, "measure_register: shots must be positive");
  require(state.hierarchy != nullptr, "measure_register: state has no hierarchy");
  const auto& amps = state.amplitudes;
  const auto& atoms = state.hierarchy->atoms;
  const bool dense = state.backend == Backend::Dense;
  // Both backends draw an atom, then a member by inverse CDF inside it, so
  // equal states give equal samples.
  std::vector<double> cdf(atoms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (dense) {
      for (Index j : atoms[k].members) acc += std::norm(amps[j]);
    } else {
      acc += std::norm(amps[static_cast<Eigen::Index>(k)]);
    }
    cdf[k] = acc;
  }
  std::vector<Index> out;
  out.reserve(shots);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (k >= cdf.size()) k = cdf.size() - 1;
    const auto& members = atoms[k].members;
    const double v = rng.uniform();
    std::size_t pick = members.size() - 1;
    if (dense) {
      double total = 0.0;
      for (Index j : members) total += std::norm(amps[j]);
      double run = 0.0;
      for (std::size_t q = 0; q < members.size(); ++q) {
        run += std::norm(amps[members[q]]);
        if (v * total < run) {
          pick = q;
          break;
        }
      }
    } else {
      pick = std::min(members.size() - 1, static_cast<std::size_t>(v * static_cast<double>(members.size())));
    }
    out.push_back(members[pick]);
  }
  return out;
}

CounterRng Simulator::protocol_stream(std::uint64_t seed, std::uint64_t trial) {
  return CounterRng::for_trial(seed, trial).substream(kProtocolStream);
}

CounterRng Simulator::sampling_stream(std::uint64_t seed, std::uint64_t trial) {
  return CounterRng::for_trial(seed, trial).substream(kSamplingStream);
}

Simulator::Simulator(std::shared_ptr<const PathSpec> path, RunOptions options)
    : path_(std::move(path)), options_(options) {
  require(path_ != nullptr && path_->hierarchy != nullptr, "simulator: path is not built");
  const PathSpec& p = *path_;
  const MarkedHierarchy& h = *p.hierarchy;
  if (options_.backend == Backend::Dense && h.N > kDenseRegisterLimit) {
    fail(ErrorKind::BudgetExceeded, "dense backend limited to 2N <= 4096");
  }
  require(options_.max_repeats >= 1, "max_repeats must be positive");

  std::vector<Eigen::MatrixXd> ops;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (options_.backend == Backend::Collapsed) {
      ops.push_back(register_hamiltonian(p.steps[i], p.basis));
      grounds_.push_back(p.eigen[i].ground.cast<std::complex<double>>());
    } else {
      ops.push_back(register_hamiltonian_dense(p.steps[i], h));
      grounds_.push_back(embed_dense(p.eigen[i].ground, h));
    }
  }
  for (std::size_t i = 1; i < p.steps.size(); ++i) {
    params_.push_back(make_step_params(p.eigen[i - 1], p.eigen[i], p.overlaps[i], options_.policy));
    propagators_.emplace_back(step_hamiltonian(ops[i - 1], ops[i], params_.back()), params_.back().t);
  }
}

RunResult Simulator::run(std::uint64_t seed, std::uint64_t trial) const {
  const PathSpec& p = *path_;
  RunResult result;
  RunTrace& trace = result.trace;
  trace.seed = seed;
  trace.trial = trial;
  trace.stream = seed ^ trial;
  trace.backend = options_.backend;
  trace.policy = options_.policy.describe();

  CounterRng rng = protocol_stream(seed, trial);
  Eigen::VectorXcd reg;
  // A step that exhausts max_repeats is a heralded failure; the run restarts
  // from the uniform state on the same stream.
  for (std::size_t attempt = 0;; ++attempt) {
    reg = grounds_.front();
    trace.steps.clear();
    trace.failure.clear();
    for (std::size_t i = 1; i < p.steps.size(); ++i) {
      const StepParams& sp = params_[i - 1];
      const StepOutcome o = run_step(reg, propagators_[i - 1], grounds_[i - 1], grounds_[i], sp, rng,
                                     options_.max_repeats, options_.purify);
      StepRecord rec;
      rec.i = i;
      rec.N_i = p.steps[i].N_marked;
      rec.E0 = p.eigen[i].E0;
      rec.gap = p.eigen[i].gap;
      rec.d0 = p.overlaps[i];
      rec.omega = sp.omega;
      rec.c = sp.c;
      rec.t = sp.t;
      rec.repeats = o.repeats;
      rec.p_theory = o.p_theory;
      rec.p_model = o.p_model;
      rec.post_fidelity = o.post_fidelity;
      rec.pre_fidelity = o.pre_fidelity;
      rec.restore_fidelity = o.restore_fidelity;
      rec.degenerate = p.degenerate[i];
      trace.steps.push_back(rec);
      trace.total_time += static_cast<double>(o.repeats) * sp.t;
      trace.renormalizations += o.renormalizations;
      if (!o.decayed) {
        trace.failure = "step " + std::to_string(i) + ": probe did not decay within " +
                        std::to_string(options_.max_repeats) +
                        " attempts (off-resonance or leakage suspected)";
        break;
      }
    }
    if (trace.failure.empty() || attempt == options_.max_restarts) break;
    trace.restart_causes.push_back(trace.failure);
    ++trace.restarts;
  }
  trace.completed = trace.failure.empty();
  trace.final_fidelity = fidelity(grounds_.back(), reg);
  result.state = RegisterState{options_.backend, std::move(reg), p.hierarchy};
  return result;
}

RunResult run_path(const PathSpec& path, const RunOptions& options, std::uint64_t seed,
                   std::uint64_t trial) {
  return Simulator(std::make_shared<const PathSpec>(path), options).run(seed, trial);
}

}  // namespace hsq
