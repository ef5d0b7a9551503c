#pragma once

#include "tabalg/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tabalg {

struct BasisElement {
  std::string name;
  std::int64_t degree = 1;
  Index dual = 0;
};

/// Optional standing hypotheses on the basis: no non-identity element of
/// degree 1, no element of degree 2.
struct BasisFlags {
  bool no_degree_one = false;
  bool no_degree_two = false;

  bool operator==(const BasisFlags&) const = default;
};

/// Ordered distinguished basis. Index 0 is the identity.
class TableBasis {
 public:
  TableBasis() = default;
  explicit TableBasis(std::vector<BasisElement> elements, BasisFlags flags = {});

  Index size() const { return static_cast<Index>(elements_.size()); }
  const BasisElement& operator[](Index i) const { return elements_[i]; }
  const std::vector<BasisElement>& elements() const { return elements_; }
  const BasisFlags& flags() const { return flags_; }

  const std::string& name(Index i) const { return elements_[i].name; }
  std::int64_t degree(Index i) const { return elements_[i].degree; }
  Index dual(Index i) const { return elements_[i].dual; }
  bool is_real(Index i) const { return elements_[i].dual == i; }

  std::optional<Index> find(std::string_view name) const;
  /// Throws UnknownName.
  Index index_of(std::string_view name) const;

  bool operator==(const TableBasis& other) const;

 private:
  std::vector<BasisElement> elements_;
  BasisFlags flags_;
  std::unordered_map<std::string, Index> by_name_;
};

inline std::pair<Index, Index> sorted_pair(Index a, Index b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

/// Canonical representative of the pair orbit {(i,j), (j,i), (di,dj), (dj,di)}:
/// the lexicographically least sorted pair.
std::pair<Index, Index> product_orbit_rep(const TableBasis& b, Index i, Index j);

}  // namespace tabalg
