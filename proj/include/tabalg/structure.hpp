#pragma once

#include "tabalg/algebra.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tabalg {

/// Sorted basis indices; contains 0, closed under the involution and under
/// supports of products.
struct ClosedSubset {
  std::vector<Index> members;

  Index size() const { return static_cast<Index>(members.size()); }
  bool contains(Index i) const {
    return std::binary_search(members.begin(), members.end(), i);
  }
  /// Size first, then lexicographic.
  auto operator<=>(const ClosedSubset& o) const {
    if (auto c = members.size() <=> o.members.size(); c != 0) return c;
    return members <=> o.members;
  }
  bool operator==(const ClosedSubset&) const = default;
};

struct PowerRow {
  int exponent = 1;
  std::vector<Index> support;
};

struct PowerTable {
  Index element = 0;
  std::vector<PowerRow> rows;
};

struct QuotientClass {
  /// Lexicographically least member name.
  std::string label;
  std::vector<Index> members;
};

/// Support-level quotient. Class 0 contains the identity; classes are
/// ordered by their least basis index.
struct QuotientClassTable {
  std::vector<QuotientClass> classes;
  /// compose[p][q]: sorted class indices meeting Supp(x y), x in p, y in q.
  std::vector<std::vector<std::vector<int>>> compose;
  std::vector<int> dual;

  int size() const { return static_cast<int>(classes.size()); }
  /// Throws Error for an index outside every class.
  int class_of(Index i) const;
};

struct GroupTable {
  /// cayley[p][q] = class index of p q; 0 is the identity.
  std::vector<std::vector<int>> cayley;
  bool abelian = true;
  /// n_1 | n_2 | ... ; empty for the trivial group or a non-abelian group.
  std::vector<std::int64_t> invariant_factors;
  /// "trivial", "cyclic(n)", "klein-four", "abelian(n_1,n_2,...)" or
  /// "non-abelian(order)".
  std::string type;

  int order() const { return static_cast<int>(cayley.size()); }
};

namespace detail {

/// supp[i][j]: constituents of b_i b_j, ascending.
template <typename Scalar>
std::vector<std::vector<std::vector<Index>>> support_table(
    const TableAlgebra<Scalar>& a) {
  const Index k = a.size();
  std::vector<std::vector<std::vector<Index>>> s(
      k, std::vector<std::vector<Index>>(k));
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      for (Index m = 0; m < k; ++m)
        if (a(i, j, m) != Scalar(0)) s[i][j].push_back(m);
  return s;
}

std::vector<Index> mask_to_list(const std::vector<char>& mask);

/// Smallest closed superset of the seed under the given support table.
std::vector<char> close_mask(const TableBasis& b,
                             const std::vector<std::vector<std::vector<Index>>>& supp,
                             std::vector<char> mask);

QuotientClassTable quotient_from_supports(
    const TableBasis& b, const std::vector<std::vector<std::vector<Index>>>& supp,
    const ClosedSubset& c);

std::vector<ClosedSubset> lattice_from_supports(
    const TableBasis& b, const std::vector<std::vector<std::vector<Index>>>& supp);

}  // namespace detail

/// Checks every product of members, not just the generators.
template <typename Scalar>
bool is_closed(const TableAlgebra<Scalar>& a, const std::vector<Index>& members) {
  std::vector<char> in(a.size(), 0);
  for (Index i : members) {
    if (i < 0 || i >= a.size()) return false;
    in[i] = 1;
  }
  if (a.size() == 0 || !in[0]) return false;
  for (Index i : members) {
    if (!in[a.basis().dual(i)]) return false;
    for (Index j : members)
      for (Index m = 0; m < a.size(); ++m)
        if (a(i, j, m) != Scalar(0) && !in[m]) return false;
  }
  return true;
}

/// Smallest closed subset containing the seed and the identity.
template <typename Scalar>
ClosedSubset closure(const TableAlgebra<Scalar>& a, const std::vector<Index>& seed) {
  std::vector<char> mask(a.size(), 0);
  for (Index i : seed) {
    if (i < 0 || i >= a.size()) throw MalformedElement("basis index out of range");
    mask[i] = 1;
  }
  const auto supp = detail::support_table(a);
  return {detail::mask_to_list(detail::close_mask(a.basis(), supp, std::move(mask)))};
}

/// Every closed subset, sorted by size then lexicographically. Throws
/// SizeCapExceeded above 64 basis elements or 4096 subsets.
template <typename Scalar>
std::vector<ClosedSubset> all_closed_subsets(const TableAlgebra<Scalar>& a) {
  if (a.size() > 64) {
    throw SizeCapExceeded("closed-subset lattice is limited to 64 basis elements");
  }
  return detail::lattice_from_supports(a.basis(), detail::support_table(a));
}

/// Supports of b, b^2, ..., b^max_n.
template <typename Scalar>
PowerTable power_supports(const TableAlgebra<Scalar>& a, Index b, int max_n) {
  if (max_n < 1) throw Error("power table needs at least one row");
  Vector<Scalar> x = a.unit(b);
  PowerTable t{b, {}};
  for (int n = 1; n <= max_n; ++n) {
    if (n > 1) x = multiply(a, x, a.unit(b));
    t.rows.push_back({n, support(x)});
  }
  return t;
}

/// Throws NotClosed when `c` is not a closed subset, RepresentativeDependence
/// when class products depend on the chosen representatives.
template <typename Scalar>
QuotientClassTable quotient_by(const TableAlgebra<Scalar>& a, const ClosedSubset& c) {
  if (!is_closed(a, c.members)) throw NotClosed("subset is not closed");
  return detail::quotient_from_supports(a.basis(), detail::support_table(a), c);
}

/// The group structure when every class product is a single class.
std::optional<GroupTable> is_group_like(const QuotientClassTable& q);

/// Group algebra of g with the group elements as a degree-1 basis, named by
/// the class labels of q.
Algebra group_algebra(const GroupTable& g, const QuotientClassTable& q,
                      std::string name);

}  // namespace tabalg
