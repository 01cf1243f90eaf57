#include "hsq/ham_path.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <ostream>

#include "hsq/error.hpp"

namespace hsq {

namespace {

constexpr double kLevelTol = 1e-9;

// Global sign: the deepest atom (index 0) carries a non-negative amplitude;
// falls back to the first non-zero entry.
void fix_sign(Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > 1e-14) {
      if (v[k] < 0) v = -v;
      return;
    }
  }
}

}  // namespace

AtomBasis AtomBasis::from(const MarkedHierarchy& h) {
  AtomBasis b;
  b.N = h.N;
  for (const Atom& a : h.atoms) {
    b.sizes.push_back(a.size());
    b.depths.push_back(a.depth);
  }
  return b;
}

Eigen::VectorXd AtomBasis::uniform() const {
  Eigen::VectorXd w(size());
  for (std::size_t k = 0; k < size(); ++k) {
    w[k] = std::sqrt(static_cast<double>(sizes[k]) / static_cast<double>(N));
  }
  return w;
}

StepHamiltonianSpec interior_step(const MarkedHierarchy& h, std::size_t i) {
  require(i < h.m(), "interior step index out of range");
  StepHamiltonianSpec s;
  s.index = i;
  s.N = h.N;
  s.N_marked = h.counts[i];
  s.marked_depth = i;
  s.c_mix = static_cast<double>(s.N_marked) / static_cast<double>(s.N);
  return s;
}

StepHamiltonianSpec terminal_step(const MarkedHierarchy& h) {
  StepHamiltonianSpec s;
  s.index = h.m();
  s.N = h.N;
  s.N_marked = h.counts[h.m()];
  s.marked_depth = h.m();
  s.c_mix = 0.0;
  s.terminal = true;
  return s;
}

EigenData eigen_collapsed(const StepHamiltonianSpec& step, const AtomBasis& basis) {
  const double c = step.c_mix;
  const double N = static_cast<double>(step.N);
  const double Nm = static_cast<double>(step.N_marked);
  const double p = Nm / N;

  EigenData out;
  double alpha = 1.0, beta = 0.0;  // weights on uniform(M_i), uniform(complement)
  std::vector<double> levels;
  if (step.N_marked == step.N) {
    out.E0 = -1.0;
  } else {
    const double a = -c * p - (1.0 - c);
    const double b = -c * std::sqrt(p * (1.0 - p));
    const double d = -c * (1.0 - p);
    const double mean = 0.5 * (a + d);
    const double r = std::hypot(0.5 * (a - d), b);
    out.E0 = mean - r;
    levels.push_back(mean + r);
    // Eigenvector of the lower root; pick the better-conditioned of the two forms.
    Eigen::Vector2d v1(b, out.E0 - a), v2(out.E0 - d, b);
    Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() == 0.0) v = Eigen::Vector2d(1.0, 0.0);
    v.normalize();
    if (v[0] < 0 || (v[0] == 0 && v[1] < 0)) v = -v;
    alpha = v[0];
    beta = v[1];
    if (step.N - step.N_marked > 1) levels.push_back(0.0);
  }
  if (step.N_marked > 1) levels.push_back(-(1.0 - c));

  out.E1 = std::numeric_limits<double>::infinity();
  for (double e : levels) {
    if (e > out.E0 + kLevelTol) out.E1 = std::min(out.E1, e);
  }
  if (!std::isfinite(out.E1)) out.E1 = out.E0;
  out.gap = out.E1 - out.E0;

  out.ground.resize(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double s = static_cast<double>(basis.sizes[k]);
    out.ground[k] = basis.depths[k] >= step.marked_depth ? alpha * std::sqrt(s / Nm)
                                                         : beta * std::sqrt(s / (N - Nm));
  }
  fix_sign(out.ground);
  return out;
}

Eigen::MatrixXd register_hamiltonian(const StepHamiltonianSpec& step, const AtomBasis& basis) {
  const Eigen::VectorXd w = basis.uniform();
  Eigen::MatrixXd H = -step.c_mix * (w * w.transpose());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis.depths[k] >= step.marked_depth) H(k, k) -= 1.0 - step.c_mix;
  }
  return H;
}

Eigen::MatrixXd register_hamiltonian_dense(const StepHamiltonianSpec& step,
                                           const MarkedHierarchy& h) {
  if (h.N > kDenseEigenLimit) {
    fail(ErrorKind::BudgetExceeded, "dense Hamiltonian limited to N <= 4096");
  }
  const auto N = static_cast<Eigen::Index>(h.N);
  Eigen::MatrixXd H = Eigen::MatrixXd::Constant(N, N, -step.c_mix / static_cast<double>(h.N));
  for (const Atom& a : h.atoms) {
    if (a.depth < step.marked_depth) continue;
    for (Index j : a.members) H(j, j) -= 1.0 - step.c_mix;
  }
  return H;
}

EigenData eigen_dense(const StepHamiltonianSpec& step, const MarkedHierarchy& h) {
  const Eigen::MatrixXd H = register_hamiltonian_dense(step, h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "dense eigensolve failed");
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();

  EigenData out;
  out.E0 = evals[0];
  out.E1 = out.E0;
  Eigen::Index g = 0;
  while (g < evals.size() && evals[g] <= out.E0 + kLevelTol) ++g;
  if (g < evals.size()) out.E1 = evals[g];
  out.gap = out.E1 - out.E0;

  const Eigen::VectorXd psi0 =
      Eigen::VectorXd::Constant(H.rows(), 1.0 / std::sqrt(static_cast<double>(h.N)));
  const auto ground_space = evecs.leftCols(g);
  Eigen::VectorXd v = ground_space * (ground_space.transpose() * psi0);
  if (v.norm() < 1e-12) fail(ErrorKind::NumericalFailure, "ground space orthogonal to psi_0");
  v.normalize();

  out.ground = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.atoms.size()));
  for (std::size_t k = 0; k < h.atoms.size(); ++k) {
    double sum = 0.0;
    for (Index j : h.atoms[k].members) sum += v[j];
    out.ground[k] = sum / std::sqrt(static_cast<double>(h.atoms[k].size()));
  }
  fix_sign(out.ground);
  return out;
}

double overlap(const EigenData& prev, const EigenData& cur) {
  if (prev.ground.size() != cur.ground.size()) {
    fail(ErrorKind::BasisMismatch, "overlap: ground vectors live in different atom bases");
  }
  const double d = std::abs(prev.ground.dot(cur.ground));
  if (d < 1e-12) fail(ErrorKind::PathDisconnected, "path disconnected: vanishing overlap");
  return d;
}

PathSpec build_path(std::shared_ptr<const MarkedHierarchy> hierarchy) {
  require(hierarchy != nullptr, "build_path: null hierarchy");
  const MarkedHierarchy& h = *hierarchy;
  PathSpec path;
  path.basis = AtomBasis::from(h);
  for (std::size_t i = 0; i < h.m(); ++i) path.steps.push_back(interior_step(h, i));
  path.steps.push_back(terminal_step(h));

  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const auto& step = path.steps[i];
    if (i > 0 && step.same_operator(path.steps[i - 1])) {
      path.eigen.push_back(path.eigen.back());
      path.overlaps.push_back(1.0);
    } else {
      path.eigen.push_back(eigen_collapsed(step, path.basis));
      path.overlaps.push_back(i == 0 ? 1.0 : overlap(path.eigen[i - 1], path.eigen[i]));
    }
    path.degenerate.push_back(i > 0 && h.degenerate[i]);
  }
  path.hierarchy = std::move(hierarchy);
  return path;
}

void write_path_csv(std::ostream& os, const PathSpec& path) {
  os << "i,N_i,c_mix,E0,E1,gap,d0\n";
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const auto& s = path.steps[i];
    const auto& e = path.eigen[i];
    os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, s.N_marked, s.c_mix,
                      e.E0, e.E1, e.gap, path.overlaps[i]);
  }
}

}  // namespace hsq
