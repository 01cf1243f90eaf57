#include "hsq/problems.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "hsq/error.hpp"
#include "hsq/modular.hpp"
#include "hsq/rng.hpp"

namespace hsq {

namespace {

// Substream tag for instance construction; protocol streams use other tags.
constexpr std::uint64_t kInstanceStream = 0x1257;

// Assigns ids to `count` cosets. Coset 0 is the hidden subgroup. Ids are
// first_id .. first_id + count - 1; in subgroup mode coset 0 gets first_id.
std::vector<Value> coset_ids(std::size_t count, Value first_id, TargetMode target,
                             std::uint64_t seed) {
  std::vector<Value> ids(count);
  std::iota(ids.begin(), ids.end(), first_id);
  CounterRng rng = CounterRng(seed).substream(kInstanceStream);
  if (target == TargetMode::Subgroup) {
    rng.shuffle(ids.begin() + 1, ids.end());
  } else {
    rng.shuffle(ids.begin(), ids.end());
  }
  return ids;
}

std::vector<Edge> canonical_edges(const std::vector<Edge>& edges, unsigned n, const char* which) {
  std::set<Edge> seen;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      fail(ErrorKind::InvalidParameter, std::string(which) + ": edge references vertex outside [0, " +
                                            std::to_string(n) + ")");
    }
    if (u == v) fail(ErrorKind::InvalidParameter, std::string(which) + ": self-loop");
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      fail(ErrorKind::InvalidParameter, std::string(which) + ": duplicate edge");
    }
  }
  return {seen.begin(), seen.end()};
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
  std::uint64_t x = a % m;
  for (std::uint64_t k = 1; k <= m; ++k) {
    if (x == 1) return k;
    x = mulmod(x, a, m);
  }
  return 0;
}

}  // namespace

const char* to_string(TargetMode t) { return t == TargetMode::Subgroup ? "subgroup" : "random"; }

TargetMode target_mode_from_string(const std::string& s) {
  if (s == "subgroup") return TargetMode::Subgroup;
  if (s == "random") return TargetMode::Random;
  fail(ErrorKind::InvalidParameter, "unknown target mode '" + s + "'");
}

SimonInstance build_simon(unsigned n, std::optional<std::uint64_t> a, std::uint64_t seed,
                          TargetMode target) {
  require(n >= 2 && n <= 24, "simon: n must lie in [2, 24]");
  const std::uint64_t N = std::uint64_t{1} << n;
  std::uint64_t mask;
  if (a) {
    if (*a == 0) fail(ErrorKind::InvalidParameter, "simon: a = 0 makes the function injective");
    require(*a < N, "simon: a must be an n-bit integer");
    mask = *a;
  } else {
    mask = 1 + CounterRng(seed).substream(kInstanceStream + 1).below(N - 1);
  }

  // Pair {x, x ^ a} is numbered by the rank of its smaller element; {0, a} is pair 0.
  std::vector<std::uint64_t> pair_of(N);
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < N; ++x) {
    if (x < (x ^ mask)) {
      pair_of[x] = count;
      pair_of[x ^ mask] = count;
      ++count;
    }
  }
  const auto ids = coset_ids(count, 0, target, seed);
  std::vector<Value> values(N);
  for (std::uint64_t x = 0; x < N; ++x) values[x] = ids[pair_of[x]];
  return SimonInstance{n, mask, seed, target, HidingOracle(std::move(values), Family::Simon)};
}

FactoringInstance build_factoring(std::uint64_t Z, std::uint64_t a, unsigned pad) {
  require(Z >= 3, "factor: Z must be at least 3");
  require(a > 1 && a < Z, "factor: base must satisfy 1 < a < Z");
  const std::uint64_t g = std::gcd(a, Z);
  if (g != 1) {
    throw NonCoprimeBase(g, "factor: gcd(a, Z) = " + std::to_string(g) + " is already a factor");
  }
  const unsigned n = ceil_log2(Z) + pad;
  require(n <= 24, "factor: register exceeds 24 qubits");
  const std::uint64_t N = std::uint64_t{1} << n;

  std::vector<Value> values(N);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k < N; ++k) {
    values[k] = x;
    x = mulmod(x, a, Z);
  }
  std::uint64_t r = 0;
  for (std::uint64_t k = 1; k < N && r == 0; ++k) {
    if (values[k] == 1) r = k;
  }
  if (r == 0) r = brute_order(Z, a);
  return FactoringInstance{Z, a, n, r, HidingOracle(std::move(values), Family::Factoring)};
}

DlogInstance build_dlog(std::uint64_t modulus, std::uint64_t a, std::uint64_t s, std::uint64_t R) {
  require(modulus >= 3, "dlog: modulus must be at least 3");
  require(a > 1 && a < modulus && std::gcd(a, modulus) == 1,
          "dlog: base must be a unit with 1 < a < modulus");
  const std::uint64_t r = multiplicative_order(a, modulus);
  require(r >= 2, "dlog: base order must be at least 2");
  require(s < r, "dlog: exponent s must satisfy 0 <= s < r");
  if (R == 0) R = std::min(r * ((modulus + r - 1) / r), modulus);
  require(R >= 2 && R * R <= kMaxDomain, "dlog: range out of simulable bounds");

  const std::uint64_t b = powmod(a, s, modulus);
  std::vector<Value> values(R * R);
  for (std::uint64_t x1 = 0; x1 < R; ++x1) {
    const std::uint64_t bx1 = powmod(b, x1, modulus);
    std::uint64_t acc = bx1;
    for (std::uint64_t x2 = 0; x2 < R; ++x2) {
      values[x1 * R + x2] = acc;
      acc = mulmod(acc, a, modulus);
    }
  }
  return DlogInstance{modulus, a, r, s, b, R, HidingOracle(std::move(values), Family::Dlog)};
}

DihedralInstance build_dihedral(std::uint64_t N_rot, std::uint64_t l, std::uint64_t seed,
                                TargetMode target) {
  require(N_rot >= 2 && 2 * N_rot <= kMaxDomain, "dihedral: rotation count out of range");
  require(l < N_rot, "dihedral: slide must satisfy 0 <= l < N_rot");
  // Coset x = {(0, x), (1, (x + l) mod N)}; coset 0 is K.
  const auto ids = coset_ids(N_rot, 0, target, seed);
  std::vector<Value> values(2 * N_rot);
  for (std::uint64_t x = 0; x < N_rot; ++x) {
    values[x] = ids[x];
    values[N_rot + (x + l) % N_rot] = ids[x];
  }
  return DihedralInstance{N_rot, l, seed, target, HidingOracle(std::move(values), Family::Dihedral)};
}

PeriodicInstance build_period(std::uint64_t r, unsigned L, std::uint64_t seed, TargetMode target) {
  require(L >= 1 && L <= 24, "period: L must lie in [1, 24]");
  const std::uint64_t N = std::uint64_t{1} << L;
  require(r >= 2 && r < N, "period: r must satisfy 2 <= r < 2^L");
  const auto ids = coset_ids(r, 0, target, seed);
  std::vector<Value> values(N);
  for (std::uint64_t x = 0; x < N; ++x) values[x] = ids[x % r];
  return PeriodicInstance{r, L, seed, target, HidingOracle(std::move(values), Family::Period)};
}

// ---------------------------------------------------------------------------
// Graph isomorphism

std::uint64_t factorial(unsigned n) {
  std::uint64_t f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

Permutation unrank_permutation(unsigned n, std::uint64_t k) {
  std::vector<std::uint8_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  Permutation out;
  out.reserve(n);
  for (unsigned i = n; i > 0; --i) {
    const std::uint64_t f = factorial(i - 1);
    const auto pick = static_cast<std::size_t>(k / f);
    k %= f;
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation out(inner.size());
  for (std::size_t v = 0; v < inner.size(); ++v) out[v] = outer[inner[v]];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) out[p[v]] = static_cast<std::uint8_t>(v);
  return out;
}

GraphPair::GraphPair(unsigned n, std::vector<Edge> edges_1, std::vector<Edge> edges_2,
                     std::uint64_t seed, TargetMode target)
    : n_(n),
      edges_1_(canonical_edges(edges_1, n, "edges_1")),
      edges_2_(canonical_edges(edges_2, n, "edges_2")),
      seed_(seed),
      target_(target),
      oracle_({0}, Family::Gip) {
  require(n >= 1 && n <= 5, "gip: n must lie in [1, 5]");
  for (auto [u, v] : edges_1_) union_.emplace_back(u, v);
  for (auto [u, v] : edges_2_) union_.emplace_back(u + n, v + n);

  const std::uint64_t nf = factorial(n);
  q_size_ = nf * nf;
  sn_.reserve(nf);
  for (std::uint64_t k = 0; k < nf; ++k) sn_.push_back(unrank_permutation(n, k));

  Permutation identity(2 * n);
  std::iota(identity.begin(), identity.end(), 0);
  a_bits_ = image_bits(identity);

  // Dense ids by first occurrence, starting at 1; the identity (j = 0) maps to
  // A itself, so K holds the minimum id.
  std::unordered_map<std::uint64_t, Value> first_seen;
  std::vector<Value> values(y_size());
  for (std::size_t j = 0; j < y_size(); ++j) {
    const auto bits = image_bits(permutation(j));
    auto [it, inserted] = first_seen.try_emplace(bits, first_seen.size() + 1);
    values[j] = it->second;
  }
  const auto ids = coset_ids(first_seen.size(), 1, target, seed);
  for (auto& v : values) v = ids[v - 1];
  oracle_ = HidingOracle(std::move(values), Family::Gip);
}

Permutation GraphPair::permutation(std::size_t j) const {
  const bool swap = j >= q_size_;
  if (swap) j -= q_size_;
  const auto& alpha = sn_[j / sn_.size()];
  const auto& beta = sn_[j % sn_.size()];
  Permutation pi(2 * n_);
  for (unsigned v = 0; v < n_; ++v) {
    pi[v] = alpha[v];
    pi[n_ + v] = static_cast<std::uint8_t>(n_ + beta[v]);
  }
  if (swap) pi = compose(sigma(), pi);
  return pi;
}

Permutation GraphPair::sigma() const {
  Permutation s(2 * n_);
  for (unsigned v = 0; v < n_; ++v) {
    s[v] = static_cast<std::uint8_t>(n_ + v);
    s[n_ + v] = static_cast<std::uint8_t>(v);
  }
  return s;
}

std::uint64_t GraphPair::image_bits(const Permutation& pi) const {
  std::uint64_t bits = 0;
  for (auto [u, v] : union_) {
    unsigned a = pi[u], b = pi[v];
    if (a > b) std::swap(a, b);
    bits |= std::uint64_t{1} << (b * (b - 1) / 2 + a);
  }
  return bits;
}

std::vector<std::size_t> GraphPair::automorphisms() const {
  std::vector<std::size_t> out;
  // K is the preimage of the identity's value in either target mode.
  const Value k = oracle_(0);
  for (std::size_t j = 0; j < y_size(); ++j) {
    if (oracle_(j) == k) out.push_back(j);
  }
  return out;
}

GraphPair build_gip(const std::vector<Edge>& edges_1, const std::vector<Edge>& edges_2, unsigned n,
                    std::uint64_t seed, TargetMode target) {
  return GraphPair(n, edges_1, edges_2, seed, target);
}

// ---------------------------------------------------------------------------
// Reference solvers

std::uint64_t brute_simon(const HidingOracle& oracle) {
  require(oracle.domain_size() <= (std::size_t{1} << 26), "brute_simon: budget exceeded");
  for (std::size_t j = 1; j < oracle.domain_size(); ++j) {
    if (oracle(j) == oracle(0)) return j;
  }
  fail(ErrorKind::InvalidParameter, "brute_simon: oracle has no collision with index 0");
}

std::uint64_t brute_order(std::uint64_t Z, std::uint64_t a) {
  require(Z >= 2 && std::gcd(a, Z) == 1, "brute_order: base must be coprime to the modulus");
  if (Z > (std::uint64_t{1} << 32)) fail(ErrorKind::BudgetExceeded, "brute_order: budget exceeded");
  const std::uint64_t r = multiplicative_order(a, Z);
  if (r == 0) fail(ErrorKind::InvalidParameter, "brute_order: no order found");
  return r;
}

std::uint64_t brute_dlog(std::uint64_t modulus, std::uint64_t a, std::uint64_t b) {
  if (modulus > (std::uint64_t{1} << 32)) fail(ErrorKind::BudgetExceeded, "brute_dlog: budget exceeded");
  std::uint64_t x = 1 % modulus;
  for (std::uint64_t s = 0; s < modulus; ++s) {
    if (x == b % modulus) return s;
    x = mulmod(x, a, modulus);
    if (x == 1 % modulus && s > 0) break;
  }
  fail(ErrorKind::InvalidParameter, "brute_dlog: b is not a power of a");
}

std::uint64_t brute_dihedral(const HidingOracle& oracle, std::uint64_t N_rot) {
  require(oracle.domain_size() == 2 * N_rot, "brute_dihedral: domain does not match N_rot");
  for (std::uint64_t r2 = 0; r2 < N_rot; ++r2) {
    if (oracle(N_rot + r2) == oracle(0)) return r2;
  }
  fail(ErrorKind::InvalidParameter, "brute_dihedral: no reflection shares the identity's value");
}

bool is_isomorphism(const std::vector<Edge>& edges_1, const std::vector<Edge>& edges_2,
                    const std::vector<unsigned>& rho) {
  if (edges_1.size() != edges_2.size()) return false;
  std::vector<bool> hit(rho.size(), false);
  for (unsigned x : rho) {
    if (x >= rho.size() || hit[x]) return false;
    hit[x] = true;
  }
  std::set<Edge> target;
  for (auto [u, v] : edges_2) target.insert({std::min(u, v), std::max(u, v)});
  for (auto [u, v] : edges_1) {
    const unsigned a = rho[u], b = rho[v];
    if (!target.count({std::min(a, b), std::max(a, b)})) return false;
  }
  return true;
}

IsoResult brute_iso(const std::vector<Edge>& edges_1, const std::vector<Edge>& edges_2, unsigned n) {
  if (n > 8) fail(ErrorKind::BudgetExceeded, "brute_iso: n! enumeration limited to n <= 8");
  const auto e1 = canonical_edges(edges_1, n, "edges_1");
  const auto e2 = canonical_edges(edges_2, n, "edges_2");
  if (e1.size() != e2.size()) return {};
  std::vector<unsigned> rho(n);
  std::iota(rho.begin(), rho.end(), 0u);
  do {
    if (is_isomorphism(e1, e2, rho)) return {true, rho};
  } while (std::next_permutation(rho.begin(), rho.end()));
  return {};
}

}  // namespace hsq
