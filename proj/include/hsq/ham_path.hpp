#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>
#include <vector>

#include "hsq/oracle.hpp"

namespace hsq {

/// Sizes and depths of the atoms of a hierarchy; enough to write every path
/// operator in the atom basis.
struct AtomBasis {
  std::size_t N = 0;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> depths;

  static AtomBasis from(const MarkedHierarchy& h);
  std::size_t size() const noexcept { return sizes.size(); }
  /// Amplitudes of the uniform superposition over [0, N).
  Eigen::VectorXd uniform() const;
};

/// H_i = c_mix * H_0 + (1 - c_mix) * H_{P_i}, with H_0 = -|psi_0><psi_0| and
/// H_{P_i} = -(projector onto M_i). The terminal step is H_P itself
/// (c_mix = 0, marked set M_m).
struct StepHamiltonianSpec {
  std::size_t index = 0;
  double c_mix = 1.0;
  std::size_t marked_depth = 0;  // M_i = atoms with depth >= marked_depth
  std::size_t N_marked = 0;
  std::size_t N = 0;
  bool terminal = false;

  bool same_operator(const StepHamiltonianSpec& o) const noexcept {
    return c_mix == o.c_mix && N_marked == o.N_marked && N == o.N;
  }
};

struct EigenData {
  double E0 = 0.0;
  double E1 = 0.0;  // lowest energy level strictly above E0
  double gap = 0.0;
  Eigen::VectorXd ground;  // over atoms, unit norm, non-negative
};

struct PathSpec {
  std::shared_ptr<const MarkedHierarchy> hierarchy;
  AtomBasis basis;
  std::vector<StepHamiltonianSpec> steps;  // H_0, H_1, ..., H_{m-1}, H_P
  std::vector<EigenData> eigen;
  std::vector<double> overlaps;  // overlaps[i] = <phi^(i-1)|phi^(i)>, overlaps[0] = 1
  std::vector<bool> degenerate;  // N_i == N_{i-1}

  /// Number of transitions.
  std::size_t m() const noexcept { return steps.size() - 1; }
  const EigenData& target() const { return eigen.back(); }
};

StepHamiltonianSpec interior_step(const MarkedHierarchy& h, std::size_t i);
StepHamiltonianSpec terminal_step(const MarkedHierarchy& h);

PathSpec build_path(std::shared_ptr<const MarkedHierarchy> hierarchy);
inline PathSpec build_path(MarkedHierarchy hierarchy) {
  return build_path(std::make_shared<const MarkedHierarchy>(std::move(hierarchy)));
}

/// Exact eigendata from the two-dimensional block spanned by the uniform
/// vectors over M_i and its complement.
EigenData eigen_collapsed(const StepHamiltonianSpec& step, const AtomBasis& basis);

/// Reference: full N x N eigensolve, N <= 4096. The ground vector is the
/// projection of |psi_0> onto the ground eigenspace, folded onto atoms.
EigenData eigen_dense(const StepHamiltonianSpec& step, const MarkedHierarchy& h);

/// |<prev|cur>|; throws PathDisconnected below 1e-12.
double overlap(const EigenData& prev, const EigenData& cur);

Eigen::MatrixXd register_hamiltonian(const StepHamiltonianSpec& step, const AtomBasis& basis);
Eigen::MatrixXd register_hamiltonian_dense(const StepHamiltonianSpec& step,
                                           const MarkedHierarchy& h);

/// `i,N_i,c_mix,E0,E1,gap,d0`
void write_path_csv(std::ostream& os, const PathSpec& path);

inline constexpr std::size_t kDenseEigenLimit = 4096;

}  // namespace hsq
