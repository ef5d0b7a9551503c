#include "tabalg/basis.hpp"

#include "tabalg/error.hpp"

#include <algorithm>

namespace tabalg {

TableBasis::TableBasis(std::vector<BasisElement> elements, BasisFlags flags)
    : elements_(std::move(elements)), flags_(flags) {
  if (elements_.empty()) throw InvalidBasis("basis is empty");
  const Index k = size();
  for (Index i = 0; i < k; ++i) {
    const auto& e = elements_[i];
    if (e.degree < 1) {
      throw InvalidBasis("element " + e.name + " has degree < 1");
    }
    if (e.dual < 0 || e.dual >= k) {
      throw InvalidBasis("element " + e.name + " has dual out of range");
    }
    if (!by_name_.emplace(e.name, i).second) {
      throw InvalidBasis("duplicate element name " + e.name);
    }
  }
  const auto& id = elements_[0];
  if (id.degree != 1 || id.dual != 0) {
    throw InvalidBasis("element 0 (" + id.name +
                       ") must be the identity: degree 1, self-dual");
  }
  for (Index i = 0; i < k; ++i) {
    const auto& e = elements_[i];
    const auto& d = elements_[e.dual];
    if (d.dual != i) {
      throw InvalidBasis("dual of " + e.name + " is not an involution");
    }
    if (d.degree != e.degree) {
      throw InvalidBasis(e.name + " and its dual " + d.name +
                         " have different degrees");
    }
    if (i > 0 && flags_.no_degree_one && e.degree == 1) {
      throw InvalidBasis("non-identity element " + e.name +
                         " of degree 1 violates no-degree-1");
    }
    if (flags_.no_degree_two && e.degree == 2) {
      throw InvalidBasis("element " + e.name +
                         " of degree 2 violates no-degree-2");
    }
  }
}

std::optional<Index> TableBasis::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

Index TableBasis::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UnknownName("unknown element name '" + std::string(name) + "'");
}

bool TableBasis::operator==(const TableBasis& other) const {
  if (flags_ != other.flags_ || size() != other.size()) return false;
  for (Index i = 0; i < size(); ++i) {
    const auto& a = elements_[i];
    const auto& b = other.elements_[i];
    if (a.name != b.name || a.degree != b.degree || a.dual != b.dual) {
      return false;
    }
  }
  return true;
}

}  // namespace tabalg

namespace tabalg {

std::pair<Index, Index> product_orbit_rep(const TableBasis& b, Index i, Index j) {
  std::pair<Index, Index> p{std::min(i, j), std::max(i, j)};
  const Index di = b.dual(i), dj = b.dual(j);
  std::pair<Index, Index> q{std::min(di, dj), std::max(di, dj)};
  return std::min(p, q);
}

}  // namespace tabalg
