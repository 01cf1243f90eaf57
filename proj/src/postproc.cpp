#include "hsq/postproc.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "hsq/error.hpp"
#include "hsq/modular.hpp"

namespace hsq {

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= x; ++q) {
    if (x % q == 0) {
      out.push_back(q);
      while (x % q == 0) x /= q;
    }
  }
  if (x > 1) out.push_back(x);
  return out;
}

// Strips prime factors from a multiple of the period while `still_period` holds.
template <class Pred>
std::uint64_t reduce_multiple(std::uint64_t g, Pred still_period) {
  for (std::uint64_t q : prime_factors(g)) {
    while (g % q == 0 && still_period(g / q)) g /= q;
  }
  return g;
}

}  // namespace

const char* to_string(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::Resolved: return "resolved";
    case RecoveryStatus::Inconclusive: return "inconclusive";
    case RecoveryStatus::NeedMoreSamples: return "need-more-samples";
    case RecoveryStatus::BadBase: return "bad-base";
  }
  return "unknown";
}

SimonRecovery recover_simon(std::span<const Index> samples, const HidingOracle& oracle) {
  require(samples.size() >= 2, "recover_simon: need at least two samples");
  SimonRecovery out;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i] == samples[0]) continue;
    const std::uint64_t a = samples[0] ^ samples[i];
    if (a < oracle.domain_size() && oracle(samples[0]) == oracle(samples[0] ^ a)) {
      out.status = RecoveryStatus::Resolved;
      out.a = a;
      out.samples_used = i + 1;
      return out;
    }
  }
  out.samples_used = samples.size();
  return out;
}

OrderRecovery recover_order(std::span<const Index> samples, std::uint64_t Z, std::uint64_t a) {
  OrderRecovery out;
  std::uint64_t g = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (powmod(a, samples[i], Z) != 1) continue;  // off the target coset
    const std::uint64_t next = std::gcd(g, std::uint64_t{samples[i]});
    if (next != g) out.samples_used = i + 1;
    g = next;
  }
  if (g == 0) {
    out.samples_used = samples.size();
    return out;
  }
  if (powmod(a, g, Z) != 1) {
    out.status = RecoveryStatus::Inconclusive;
    return out;
  }
  out.r = reduce_multiple(g, [&](std::uint64_t d) { return powmod(a, d, Z) == 1; });
  out.status = RecoveryStatus::Resolved;
  if (out.r % 2 == 0) {
    const std::uint64_t half = powmod(a, out.r / 2, Z);
    if (half != Z - 1) {
      const std::uint64_t f1 = std::gcd(half + Z - 1, Z);
      const std::uint64_t f2 = std::gcd(half + 1, Z);
      if (f1 > 1 && f1 < Z && f2 > 1 && f2 < Z) {
        out.factors = std::minmax(f1, f2);
        return out;
      }
    }
  }
  out.status = RecoveryStatus::BadBase;
  return out;
}

PeriodRecovery recover_period(std::span<const Index> samples, const HidingOracle& oracle) {
  PeriodRecovery out;
  if (samples.empty()) return out;
  const auto x0 = static_cast<std::int64_t>(samples[0]);
  std::uint64_t g = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (oracle(samples[i]) != oracle(samples[0])) continue;  // another coset
    const auto d = static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(samples[i]) - x0));
    const std::uint64_t next = std::gcd(g, d);
    if (next != g) out.samples_used = i + 1;
    g = next;
  }
  if (g == 0) {
    out.samples_used = samples.size();
    return out;
  }
  const auto periodic = [&](std::uint64_t d) { return d < oracle.domain_size() && oracle(d) == oracle(0); };
  if (!periodic(g)) {
    out.status = RecoveryStatus::Inconclusive;
    return out;
  }
  out.r = reduce_multiple(g, periodic);
  out.status = RecoveryStatus::Resolved;
  return out;
}

DlogRecovery recover_dlog(std::span<const Index> samples, std::uint64_t R, std::uint64_t r,
                          std::uint64_t modulus, std::uint64_t a, std::uint64_t b) {
  require(R > 0 && r > 0, "recover_dlog: range and order must be positive");
  DlogRecovery out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::uint64_t x1 = samples[i] / R % r;
    const std::uint64_t x2 = samples[i] % R % r;
    const auto inv = invmod(x1, r);
    if (!inv) continue;
    const std::uint64_t s = mulmod((r - x2) % r, *inv, r);
    if (powmod(a, s, modulus) != b % modulus) continue;
    out.status = RecoveryStatus::Resolved;
    out.s = s;
    out.samples_used = i + 1;
    return out;
  }
  out.samples_used = samples.size();
  return out;
}

DihedralRecovery recover_dihedral(std::span<const Index> samples, std::uint64_t N_rot,
                                  const HidingOracle& oracle) {
  require(oracle.domain_size() == 2 * N_rot, "recover_dihedral: domain does not match N_rot");
  DihedralRecovery out;
  const auto value = [&](std::uint64_t r1, std::uint64_t r2) { return oracle(r1 * N_rot + r2); };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::uint64_t r1 = samples[i] / N_rot, y = samples[i] % N_rot;
    if (r1 != 1) continue;
    if (value(1, y) == value(0, 0)) {
      out.status = RecoveryStatus::Resolved;
      out.l = y;
      out.samples_used = i + 1;
      return out;
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
      if (samples[k] / N_rot != 0 || oracle(samples[k]) != oracle(samples[i])) continue;
      const std::uint64_t l = (y + N_rot - samples[k] % N_rot) % N_rot;
      if (value(1, l) == value(0, 0)) {
        out.status = RecoveryStatus::Resolved;
        out.l = l;
        out.samples_used = std::max(i, k) + 1;
        return out;
      }
    }
  }
  out.samples_used = samples.size();
  return out;
}

GipVerdict gip_verdict(std::span<const Index> samples, const GraphPair& pair, std::size_t T) {
  require(T >= 1, "gip_verdict: sample budget must be positive");
  const unsigned n = pair.n();
  GipVerdict out;
  std::optional<Permutation> reference;  // coset representative in random-target mode
  std::uint64_t reference_bits = 0;

  for (std::size_t i = 0; i < samples.size() && out.valid_samples < T; ++i) {
    out.samples_used = i + 1;
    Permutation pi = pair.permutation(samples[i]);
    if (pair.target() == TargetMode::Random) {
      if (!reference) {
        reference = pi;
        reference_bits = pair.image_bits(pi);
        continue;
      }
      if (pair.image_bits(pi) != reference_bits) {
        ++out.discarded;
        continue;
      }
      pi = compose(inverse(*reference), pi);
    }
    if (!pair.is_automorphism(pi)) {
      ++out.discarded;
      continue;
    }
    ++out.valid_samples;
    if (pi[0] >= n) {
      out.isomorphic = true;
      out.confidence = 1.0;
      out.witness.resize(n);
      for (unsigned x = 0; x < n; ++x) out.witness[x] = pi[x] - n;
      break;
    }
  }
  if (!out.isomorphic) out.confidence = 1.0 - std::ldexp(1.0, -static_cast<int>(out.valid_samples));
  out.leakage_warning =
      out.samples_used > 0 && static_cast<double>(out.discarded) > 0.05 * static_cast<double>(out.samples_used);
  return out;
}

GenericRecovery recover_generic(std::span<const Index> samples, const HidingOracle& oracle) {
  GenericRecovery out;
  std::set<Index> seen;
  for (Index j : samples) {
    if (oracle(j) == oracle.min_value()) {
      seen.insert(j);
    } else {
      ++out.off_target;
    }
  }
  out.elements.assign(seen.begin(), seen.end());
  return out;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["family"] = to_string(v.family);
  j["answer"] = v.answer;
  j["confidence"] = v.confidence;
  j["verified"] = v.verified;
  j["samples_used"] = v.samples_used;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

}  // namespace hsq
