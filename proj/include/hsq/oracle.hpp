#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hsq {

using Value = std::uint64_t;
using Index = std::uint32_t;

enum class Family { Simon, Factoring, Order, Dlog, Dihedral, Gip, Period, Generic };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

/// Explicit hiding-function table: register index j -> h_j.
class HidingOracle {
 public:
  HidingOracle(std::vector<Value> values, Family family);

  std::size_t domain_size() const noexcept { return values_.size(); }
  Value operator()(std::size_t j) const { return values_[j]; }
  std::span<const Value> values() const noexcept { return values_; }
  Family family() const noexcept { return family_; }

  Value min_value() const noexcept { return min_; }
  Value max_value() const noexcept { return max_; }

  /// True when every distinct value has the same preimage size (coset
  /// structure of an HSP instance).
  bool balanced() const;

 private:
  std::vector<Value> values_;
  Family family_;
  Value min_ = 0;
  Value max_ = 0;
};

struct Spectrum {
  std::vector<Value> distinct_values;     // strictly increasing
  std::vector<std::size_t> multiplicities;

  std::size_t size() const noexcept { return distinct_values.size(); }
  std::size_t total() const noexcept;
};

Spectrum spectrum(const HidingOracle& oracle);

/// `value,multiplicity` rows, one per distinct value.
void write_spectrum_csv(std::ostream& os, const Spectrum& spec);

enum class DivisionMode { Rank, Value };

const char* to_string(DivisionMode m);

struct DivisionSet {
  std::vector<Value> thresholds;  // strictly decreasing
  DivisionMode mode = DivisionMode::Rank;

  std::size_t m() const noexcept { return thresholds.size(); }
};

/// v_i = h_{floor(M / 2^i)} (1-indexed), deduplicated, ending at h_1.
DivisionSet division_set_rank(const Spectrum& spec);

/// Repeated integer halving of `start` down to `floor`.
DivisionSet division_set_value(Value start, Value floor = 1);

/// #{ j : h_j <= v }
std::size_t marked_count(const HidingOracle& oracle, Value v);

/// Block of the partition generated by the nested marked sets. `depth` is the
/// number of marked sets containing the block, so the block lies in M_i iff
/// depth >= i (every block lies in M_0 = [0, N)).
struct Atom {
  std::size_t depth = 0;
  std::vector<Index> members;

  std::size_t size() const noexcept { return members.size(); }
};

struct MarkedHierarchy {
  std::size_t N = 0;
  std::vector<Value> thresholds;
  std::vector<std::size_t> counts;  // counts[i] = N_i, counts[0] = N
  std::vector<bool> degenerate;     // degenerate[i]: N_i == N_{i-1}; [0] unused
  std::vector<Atom> atoms;          // deepest first, empty blocks omitted

  std::size_t m() const noexcept { return thresholds.size(); }
  std::size_t atom_count() const noexcept { return atoms.size(); }

  /// Index set M_i in ascending order; M_0 is the whole domain.
  std::vector<Index> marked_set(std::size_t i) const;

  /// Atom index of every register element.
  std::vector<std::uint32_t> atom_of_index() const;
};

MarkedHierarchy marked_hierarchy(const HidingOracle& oracle, const DivisionSet& dset);

}  // namespace hsq
