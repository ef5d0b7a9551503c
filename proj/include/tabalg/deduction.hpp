#pragma once

#include "tabalg/algebra.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tabalg {

/// Lower bound on a product plus an opaque remainder of fixed degree.
struct PendingConstraint {
  Element lower;
  std::string remainder;
};

/// Product table over a fixed basis with holes. Entries are stored once per
/// pair orbit {(i,j), (j,i), (di,dj), (dj,di)}; lookups transport along the
/// orbit.
class PartialTable {
 public:
  using Key = std::pair<Index, Index>;

  PartialTable() = default;
  explicit PartialTable(TableBasis basis, std::string name = {});

  const TableBasis& basis() const { return basis_; }
  Index size() const { return basis_.size(); }
  const std::string& name() const { return name_; }
  /// Over an open basis, products may have constituents outside the listed
  /// elements; only products whose listed part has full degree are complete.
  bool open_basis() const { return open_basis_; }
  void set_open_basis(bool open) { open_basis_ = open; }
  std::vector<std::string>& notes() { return notes_; }
  const std::vector<std::string>& notes() const { return notes_; }

  /// Throws Error on a degree mismatch, a negative coefficient or a conflict
  /// with an existing entry.
  void set_known(Index i, Index j, const Element& value);
  /// Throws Error when the lower bound exceeds the product degree.
  void set_pending(Index i, Index j, const Element& lower,
                   std::string remainder);

  bool is_known(Index i, Index j) const;
  std::optional<Element> known(Index i, Index j) const;
  const PendingConstraint* pending(Index i, Index j) const;
  /// degree(i) * degree(j) - degree(lower bound).
  std::int64_t remainder_degree(Index i, Index j) const;

  const std::map<Key, Element>& known_entries() const { return known_; }
  const std::map<Key, PendingConstraint>& pending_entries() const {
    return pending_;
  }
  /// Orbit representatives with no known product, ascending.
  std::vector<Key> unresolved() const;
  bool complete() const { return unresolved().empty(); }

  /// The stored value for (i,j) transported from its orbit representative.
  Element transport(Index i, Index j, const Element& rep_value) const;

 private:
  TableBasis basis_;
  std::string name_;
  bool open_basis_ = false;
  std::vector<std::string> notes_;
  std::map<Key, Element> known_;
  std::map<Key, PendingConstraint> pending_;
};

enum class DeductionStatus { Completed, Stalled, Contradiction };

std::string_view status_name(DeductionStatus s);

/// Rule tags: R1 degree, R2 orbit transport, R3 associativity, R4
/// inner-product transfer, R5 failed-value probe, R6 choice among
/// interchangeable basis elements.
struct DeductionStep {
  std::size_t number = 0;
  std::string rule;
  std::array<Index, 3> triple{-1, -1, -1};
  Index i = -1, j = -1;
  Element value;
  /// R6 only: coefficient of `first` is at least that of `second`.
  std::optional<std::pair<Index, Index>> choice;
};

struct DeductionTrace {
  std::vector<DeductionStep> steps;
  DeductionStatus status = DeductionStatus::Stalled;
  /// Triple of the equation that failed, for Contradiction.
  std::optional<std::array<Index, 3>> witness;
  std::string detail;
  bool budget_exhausted = false;
  std::size_t firings = 0;
  std::vector<PartialTable::Key> unresolved;
};

struct DeductionOptions {
  /// Upper bound on rule firings that tighten a coefficient.
  std::size_t max_steps = 1'000'000;
  /// Enables R5 and R6 in complete_or_refute.
  bool probing = true;
  bool symmetry_choice = true;
  /// R5 probes coefficients whose interval has at most this width.
  std::int64_t probe_width = 2;
  /// Propagation sweeps spent on each probe; 0 runs to a fixed point.
  std::size_t probe_sweeps = 4;
  /// Total R5 trial propagations per call.
  std::size_t max_probes = 128;
  /// Shuffles rule firing order; the fixed point does not depend on it.
  std::optional<std::uint64_t> order_seed;
};

/// Fixed point of R1-R4. The returned table contains every product whose
/// coefficients became fully determined.
std::pair<PartialTable, DeductionTrace> propagate(
    const PartialTable& p, const DeductionOptions& opts = {});

/// propagate() followed by probing and choices among interchangeable basis
/// elements until nothing changes. `out`, when given, receives the final
/// table.
DeductionTrace complete_or_refute(const PartialTable& p,
                                  const DeductionOptions& opts = {},
                                  PartialTable* out = nullptr);

/// One line per step: "STEP n RULE Rx TRIPLE a,b,c SET a*b = expr", then a
/// STATUS line.
std::string format_trace(const TableBasis& basis, const DeductionTrace& t);

}  // namespace tabalg
