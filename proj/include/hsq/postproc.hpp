#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hsq/oracle.hpp"
#include "hsq/problems.hpp"

namespace hsq {

enum class RecoveryStatus {
  Resolved,
  Inconclusive,     // budget spent without a decisive sample
  NeedMoreSamples,  // only uninformative samples so far (e.g. all zero)
  BadBase,          // order found but the base does not split Z
};

const char* to_string(RecoveryStatus s);

struct SimonRecovery {
  RecoveryStatus status = RecoveryStatus::Inconclusive;
  std::uint64_t a = 0;
  std::size_t samples_used = 0;
};

/// XOR of the first pair of distinct samples that passes f(x) = f(x ^ a).
SimonRecovery recover_simon(std::span<const Index> samples, const HidingOracle& oracle);

struct OrderRecovery {
  RecoveryStatus status = RecoveryStatus::NeedMoreSamples;
  std::uint64_t r = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> factors;
  std::size_t samples_used = 0;
};

/// Samples with a^k != 1 are dropped. gcd of the rest (all multiples of r), reduced to the least
/// exponent with a^r = 1, then gcd(a^{r/2} +- 1, Z) when r is even and
/// a^{r/2} != -1.
OrderRecovery recover_order(std::span<const Index> samples, std::uint64_t Z, std::uint64_t a);

struct PeriodRecovery {
  RecoveryStatus status = RecoveryStatus::NeedMoreSamples;
  std::uint64_t r = 0;
  std::size_t samples_used = 0;
};

/// gcd of differences among samples sharing the first sample's value, reduced with
/// oracle queries f(0) = f(d).
PeriodRecovery recover_period(std::span<const Index> samples, const HidingOracle& oracle);

struct DlogRecovery {
  RecoveryStatus status = RecoveryStatus::Inconclusive;
  std::uint64_t s = 0;
  std::size_t samples_used = 0;
};

/// For the first sample (x1, x2) with gcd(x1, r) = 1: s = -x2 / x1 mod r,
/// accepted when a^s = b (mod modulus).
DlogRecovery recover_dlog(std::span<const Index> samples, std::uint64_t R, std::uint64_t r,
                          std::uint64_t modulus, std::uint64_t a, std::uint64_t b);

struct DihedralRecovery {
  RecoveryStatus status = RecoveryStatus::Inconclusive;
  std::uint64_t l = 0;
  std::size_t samples_used = 0;
};

/// First sample (1, y) gives l = y when f((1, y)) = f((0, 0)); otherwise a
/// sample (0, x) from the same coset gives l = y - x.
DihedralRecovery recover_dihedral(std::span<const Index> samples, std::uint64_t N_rot,
                                  const HidingOracle& oracle);

struct GipVerdict {
  bool isomorphic = false;
  std::vector<unsigned> witness;  // rho: V1 -> V2 (0-indexed)
  double confidence = 0.0;
  std::size_t valid_samples = 0;
  std::size_t discarded = 0;
  std::size_t samples_used = 0;
  bool leakage_warning = false;  // discarded fraction above 5%
};

/// Samples are Y-indices. Any automorphism with pi(1) > n proves isomorphism;
/// otherwise after T valid samples the pair is declared non-isomorphic with
/// confidence 1 - 2^-T. Samples outside K are discarded.
GipVerdict gip_verdict(std::span<const Index> samples, const GraphPair& pair, std::size_t T);

struct GenericRecovery {
  std::vector<Index> elements;  // distinct sampled elements of the target coset
  std::size_t off_target = 0;
};

GenericRecovery recover_generic(std::span<const Index> samples, const HidingOracle& oracle);

struct Verdict {
  Family family = Family::Generic;
  nlohmann::json answer;
  double confidence = 1.0;
  bool verified = false;
  std::size_t samples_used = 0;
  std::string note;
};

nlohmann::json to_json(const Verdict& v);

}  // namespace hsq
