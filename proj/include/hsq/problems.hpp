#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsq/oracle.hpp"

namespace hsq {

/// Which coset receives the minimum oracle value.
enum class TargetMode {
  Subgroup,  // the hidden subgroup itself
  Random,    // a seed-chosen coset
};

const char* to_string(TargetMode t);
TargetMode target_mode_from_string(const std::string& s);

/// Collapsed backend register limit.
inline constexpr std::size_t kMaxDomain = std::size_t{1} << 24;

struct SimonInstance {
  unsigned n = 0;
  std::uint64_t a = 0;
  std::uint64_t seed = 0;
  TargetMode target = TargetMode::Subgroup;
  HidingOracle oracle;
};

/// 2-to-1 table over n-bit inputs with h_i = h_j iff i ^ j = a. Draws `a`
/// from the seed when not given.
SimonInstance build_simon(unsigned n, std::optional<std::uint64_t> a, std::uint64_t seed,
                          TargetMode target = TargetMode::Subgroup);

struct FactoringInstance {
  std::uint64_t Z = 0;
  std::uint64_t a = 0;
  unsigned n = 0;       // register bits
  std::uint64_t r = 0;  // true order, kept for verification only
  HidingOracle oracle;  // h_k = a^k mod Z

  std::size_t N() const noexcept { return oracle.domain_size(); }
};

/// Throws NonCoprimeBase when gcd(a, Z) != 1.
FactoringInstance build_factoring(std::uint64_t Z, std::uint64_t a, unsigned pad = 1);

struct DlogInstance {
  std::uint64_t modulus = 0;
  std::uint64_t a = 0;
  std::uint64_t r = 0;  // order of a
  std::uint64_t s = 0;  // hidden exponent
  std::uint64_t b = 0;  // a^s mod modulus
  std::uint64_t R = 0;  // x1, x2 in [0, R)
  HidingOracle oracle;  // index x1 * R + x2 -> b^x1 a^x2 mod modulus

  std::pair<std::uint64_t, std::uint64_t> split(std::size_t j) const { return {j / R, j % R}; }
};

/// R = 0 selects the default range min(r * ceil(modulus / r), modulus).
DlogInstance build_dlog(std::uint64_t modulus, std::uint64_t a, std::uint64_t s,
                        std::uint64_t R = 0);

struct DihedralInstance {
  std::uint64_t N_rot = 0;
  std::uint64_t l = 0;
  std::uint64_t seed = 0;
  TargetMode target = TargetMode::Subgroup;
  HidingOracle oracle;  // index r1 * N_rot + r2

  std::pair<std::uint64_t, std::uint64_t> split(std::size_t j) const {
    return {j / N_rot, j % N_rot};
  }
};

DihedralInstance build_dihedral(std::uint64_t N_rot, std::uint64_t l, std::uint64_t seed,
                                TargetMode target = TargetMode::Subgroup);

struct PeriodicInstance {
  std::uint64_t r = 0;
  unsigned L = 0;
  std::uint64_t seed = 0;
  TargetMode target = TargetMode::Subgroup;
  HidingOracle oracle;  // h_x = id(x mod r), x in [0, 2^L)
};

PeriodicInstance build_period(std::uint64_t r, unsigned L, std::uint64_t seed,
                              TargetMode target = TargetMode::Subgroup);

using Edge = std::pair<unsigned, unsigned>;
/// Permutation of {0, ..., size-1}: perm[v] is the image of v.
using Permutation = std::vector<std::uint8_t>;

/// Graph-isomorphism instance embedded as an HSP over Y = Q u sigma Q in S_2n,
/// with Q = S_n x S_n. Vertices are 0-indexed here; vertex v < n belongs to
/// the first graph, n + v to the second.
class GraphPair {
 public:
  GraphPair(unsigned n, std::vector<Edge> edges_1, std::vector<Edge> edges_2,
            std::uint64_t seed = 0, TargetMode target = TargetMode::Subgroup);

  unsigned n() const noexcept { return n_; }
  const std::vector<Edge>& edges_1() const noexcept { return edges_1_; }
  const std::vector<Edge>& edges_2() const noexcept { return edges_2_; }
  /// Edges of the disjoint union A on 2n vertices.
  const std::vector<Edge>& union_edges() const noexcept { return union_; }
  const HidingOracle& oracle() const noexcept { return oracle_; }
  TargetMode target() const noexcept { return target_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// |Y| = 2 (n!)^2.
  std::size_t y_size() const noexcept { return 2 * q_size_; }
  std::size_t q_size() const noexcept { return q_size_; }

  /// Y in lexicographic order, Q first: j = rank(alpha) * n! + rank(beta) for
  /// q = (alpha, beta), and j + (n!)^2 for sigma * q.
  Permutation permutation(std::size_t j) const;
  bool in_sigma_q(std::size_t j) const noexcept { return j >= q_size_; }

  /// Upper-triangle adjacency bitstring of pi(A).
  std::uint64_t image_bits(const Permutation& pi) const;
  bool is_automorphism(const Permutation& pi) const { return image_bits(pi) == a_bits_; }

  /// Indices j in Y with pi_j(A) = A.
  std::vector<std::size_t> automorphisms() const;

  /// The swap sigma = (1 n+1)(2 n+2)...(n 2n).
  Permutation sigma() const;

 private:
  unsigned n_;
  std::vector<Edge> edges_1_, edges_2_, union_;
  std::uint64_t seed_;
  TargetMode target_;
  std::size_t q_size_ = 0;
  std::uint64_t a_bits_ = 0;
  std::vector<Permutation> sn_;  // S_n in lexicographic order
  HidingOracle oracle_;
};

GraphPair build_gip(const std::vector<Edge>& edges_1, const std::vector<Edge>& edges_2, unsigned n,
                    std::uint64_t seed = 0, TargetMode target = TargetMode::Subgroup);

Permutation compose(const Permutation& outer, const Permutation& inner);  // outer o inner
Permutation inverse(const Permutation& p);
/// The k-th permutation of {0..n-1} in lexicographic order.
Permutation unrank_permutation(unsigned n, std::uint64_t k);
std::uint64_t factorial(unsigned n);

// Exhaustive reference solvers.

std::uint64_t brute_simon(const HidingOracle& oracle);
std::uint64_t brute_order(std::uint64_t Z, std::uint64_t a);
std::uint64_t brute_dlog(std::uint64_t modulus, std::uint64_t a, std::uint64_t b);
std::uint64_t brute_dihedral(const HidingOracle& oracle, std::uint64_t N_rot);

struct IsoResult {
  bool isomorphic = false;
  std::vector<unsigned> witness;  // rho: V1 -> V2, when isomorphic
};

IsoResult brute_iso(const std::vector<Edge>& edges_1, const std::vector<Edge>& edges_2, unsigned n);

/// rho maps every edge of the first graph onto an edge of the second, bijectively.
bool is_isomorphism(const std::vector<Edge>& edges_1, const std::vector<Edge>& edges_2,
                    const std::vector<unsigned>& rho);

}  // namespace hsq
