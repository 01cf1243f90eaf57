#include "hsq/oracle.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "hsq/error.hpp"

namespace hsq {

const char* to_string(Family f) {
  switch (f) {
    case Family::Simon: return "simon";
    case Family::Factoring: return "factor";
    case Family::Order: return "order";
    case Family::Dlog: return "dlog";
    case Family::Dihedral: return "dihedral";
    case Family::Gip: return "gip";
    case Family::Period: return "period";
    case Family::Generic: return "hsp-generic";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::Simon, Family::Factoring, Family::Order, Family::Dlog,
                   Family::Dihedral, Family::Gip, Family::Period, Family::Generic}) {
    if (s == to_string(f)) return f;
  }
  fail(ErrorKind::InvalidParameter, "unknown family '" + s + "'");
}

const char* to_string(DivisionMode m) {
  return m == DivisionMode::Rank ? "rank" : "value";
}

HidingOracle::HidingOracle(std::vector<Value> values, Family family)
    : values_(std::move(values)), family_(family) {
  require(!values_.empty(), "oracle domain must be non-empty");
  require(values_.size() <= (std::size_t{1} << 31), "oracle domain too large");
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
}

bool HidingOracle::balanced() const {
  const Spectrum s = spectrum(*this);
  return std::all_of(s.multiplicities.begin(), s.multiplicities.end(),
                     [&](std::size_t k) { return k == s.multiplicities.front(); });
}

std::size_t Spectrum::total() const noexcept {
  std::size_t t = 0;
  for (auto k : multiplicities) t += k;
  return t;
}

Spectrum spectrum(const HidingOracle& oracle) {
  std::vector<Value> sorted(oracle.values().begin(), oracle.values().end());
  std::sort(sorted.begin(), sorted.end());
  Spectrum out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.distinct_values.push_back(sorted[i]);
    out.multiplicities.push_back(j - i);
    i = j;
  }
  return out;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spec) {
  os << "value,multiplicity\n";
  for (std::size_t i = 0; i < spec.size(); ++i) {
    os << spec.distinct_values[i] << ',' << spec.multiplicities[i] << '\n';
  }
}

DivisionSet division_set_rank(const Spectrum& spec) {
  const std::size_t M = spec.size();
  if (M < 2) fail(ErrorKind::AlreadySolved, "already solved: the hidden subgroup is the whole group");
  DivisionSet out;
  out.mode = DivisionMode::Rank;
  for (std::size_t i = 1;; ++i) {
    const std::size_t rank = std::max<std::size_t>(M >> std::min<std::size_t>(i, 63), 1);
    const Value v = spec.distinct_values[rank - 1];
    if (out.thresholds.empty() || out.thresholds.back() != v) out.thresholds.push_back(v);
    if (rank == 1) break;
  }
  return out;
}

DivisionSet division_set_value(Value start, Value floor) {
  require(floor >= 1, "value bisection floor must be positive");
  if (start < floor) {
    fail(ErrorKind::InvalidParameter, "bisection start " + std::to_string(start) +
                                          " is below floor " + std::to_string(floor));
  }
  DivisionSet out;
  out.mode = DivisionMode::Value;
  for (Value v = start / 2; v >= floor; v /= 2) {
    out.thresholds.push_back(v);
    if (v == floor) break;
  }
  if (out.thresholds.empty() || out.thresholds.back() != floor) out.thresholds.push_back(floor);
  return out;
}

std::size_t marked_count(const HidingOracle& oracle, Value v) {
  return static_cast<std::size_t>(std::count_if(oracle.values().begin(), oracle.values().end(),
                                                [v](Value h) { return h <= v; }));
}

std::vector<Index> MarkedHierarchy::marked_set(std::size_t i) const {
  require(i <= m(), "marked set index out of range");
  std::vector<Index> out;
  for (const Atom& a : atoms) {
    if (a.depth >= i) out.insert(out.end(), a.members.begin(), a.members.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> MarkedHierarchy::atom_of_index() const {
  std::vector<std::uint32_t> out(N);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    for (Index j : atoms[k].members) out[j] = static_cast<std::uint32_t>(k);
  }
  return out;
}

MarkedHierarchy marked_hierarchy(const HidingOracle& oracle, const DivisionSet& dset) {
  const auto& v = dset.thresholds;
  require(!v.empty(), "division set is empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    require(v[i] < v[i - 1], "division set thresholds must be strictly decreasing");
  }

  MarkedHierarchy h;
  h.N = oracle.domain_size();
  h.thresholds = v;
  const std::size_t m = v.size();

  // Depth of element j = number of thresholds with h_j <= v_i; thresholds are
  // decreasing, so it is the length of the prefix satisfying the comparison.
  std::vector<std::vector<Index>> by_depth(m + 1);
  for (std::size_t j = 0; j < h.N; ++j) {
    const Value hj = oracle(j);
    const auto it = std::partition_point(v.begin(), v.end(), [hj](Value t) { return hj <= t; });
    by_depth[static_cast<std::size_t>(it - v.begin())].push_back(static_cast<Index>(j));
  }

  h.counts.assign(m + 1, 0);
  std::size_t running = 0;
  for (std::size_t d = m + 1; d-- > 0;) {
    running += by_depth[d].size();
    h.counts[d] = running;
  }
  for (std::size_t i = 1; i <= m; ++i) {
    if (h.counts[i] == 0) {
      fail(ErrorKind::EmptyMarkedSet, "empty marked set: threshold " + std::to_string(v[i - 1]) +
                                          " is below the minimum value");
    }
  }
  h.degenerate.assign(m + 1, false);
  for (std::size_t i = 1; i <= m; ++i) h.degenerate[i] = h.counts[i] == h.counts[i - 1];

  for (std::size_t d = m + 1; d-- > 0;) {
    if (!by_depth[d].empty()) h.atoms.push_back(Atom{d, std::move(by_depth[d])});
  }
  return h;
}

}  // namespace hsq
