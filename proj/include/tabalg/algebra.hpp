#pragma once

#include "tabalg/basis.hpp"
#include "tabalg/error.hpp"
#include "tabalg/scalar.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tabalg {

/// Structure constants delta[i][j][m] = (b_m, b_i b_j), stored as the left
/// regular representation: left(i)(m, j) = delta[i][j][m].
template <typename Scalar>
class StructureConstants {
 public:
  using MatrixType = Matrix<Scalar>;

  StructureConstants() = default;
  explicit StructureConstants(Index k)
      : left_(static_cast<std::size_t>(k), MatrixType::Zero(k, k)) {}
  explicit StructureConstants(std::vector<MatrixType> left)
      : left_(std::move(left)) {
    const Index k = size();
    for (const auto& l : left_) {
      if (l.rows() != k || l.cols() != k) {
        throw Error("structure constant matrices must be k x k");
      }
    }
  }

  Index size() const { return static_cast<Index>(left_.size()); }

  const Scalar& operator()(Index i, Index j, Index m) const {
    return left_[i](m, j);
  }
  Scalar& operator()(Index i, Index j, Index m) { return left_[i](m, j); }

  /// Column j of left(i) is the coefficient vector of b_i b_j.
  const MatrixType& left(Index i) const { return left_[i]; }

  auto product(Index i, Index j) const { return left_[i].col(j); }

  bool operator==(const StructureConstants& other) const {
    if (size() != other.size()) return false;
    for (Index i = 0; i < size(); ++i) {
      if (left_[i] != other.left_[i]) return false;
    }
    return true;
  }

 private:
  std::vector<MatrixType> left_;
};

/// A closed subset given a name in the data file, e.g. "C".
struct NamedSubset {
  std::string name;
  /// Ascending basis indices.
  std::vector<Index> members;

  bool operator==(const NamedSubset&) const = default;
};

struct AlgebraMetadata {
  std::string name;
  /// Free-form comment lines carried with the algebra (e.g. transcription
  /// notes); serialized as '#' lines before the header.
  std::vector<std::string> notes;
  /// Comment lines attached to one product, keyed by product_orbit_rep().
  std::map<std::pair<Index, Index>, std::vector<std::string>> product_notes;
  std::vector<NamedSubset> subsets;
};

/// A table algebra over its distinguished basis. Immutable after
/// construction; construction checks shape only, see verify_axioms().
template <typename Scalar>
class TableAlgebra {
 public:
  using scalar_type = Scalar;
  using ElementType = Vector<Scalar>;

  TableAlgebra() = default;
  TableAlgebra(TableBasis basis, StructureConstants<Scalar> constants,
               AlgebraMetadata meta = {})
      : basis_(std::move(basis)),
        constants_(std::move(constants)),
        meta_(std::move(meta)) {
    if (constants_.size() != basis_.size()) {
      throw Error("structure constants do not match basis size");
    }
    degrees_.resize(basis_.size());
    for (Index i = 0; i < basis_.size(); ++i) degrees_(i) = Scalar(basis_.degree(i));
  }

  Index size() const { return basis_.size(); }
  const TableBasis& basis() const { return basis_; }
  const StructureConstants<Scalar>& constants() const { return constants_; }
  const AlgebraMetadata& metadata() const { return meta_; }
  const std::string& name() const { return meta_.name; }
  const ElementType& degrees() const { return degrees_; }

  const Scalar& operator()(Index i, Index j, Index m) const {
    return constants_(i, j, m);
  }

  ElementType zero() const { return ElementType::Zero(size()); }
  ElementType unit(Index i) const {
    if (i < 0 || i >= size()) {
      throw MalformedElement("basis index " + std::to_string(i) +
                             " out of range");
    }
    ElementType e = zero();
    e(i) = Scalar(1);
    return e;
  }
  ElementType unit(std::string_view name) const {
    return unit(basis_.index_of(name));
  }

  bool operator==(const TableAlgebra& other) const {
    return basis_ == other.basis_ && constants_ == other.constants_;
  }

 private:
  TableBasis basis_;
  StructureConstants<Scalar> constants_;
  AlgebraMetadata meta_;
  ElementType degrees_;
};

using Algebra = TableAlgebra<Integer>;
using Element = Vector<Integer>;

namespace detail {

template <typename Scalar, typename Derived>
void check_element(const TableAlgebra<Scalar>& a,
                   const Eigen::MatrixBase<Derived>& x) {
  if (x.cols() != 1 || x.rows() != a.size()) {
    throw MalformedElement("element has " + std::to_string(x.rows()) +
                           " coefficients; algebra has " +
                           std::to_string(a.size()) + " basis elements");
  }
}

}  // namespace detail

/// Bilinear extension of the basis products.
template <typename Scalar, typename DX, typename DY>
Vector<Scalar> multiply(const TableAlgebra<Scalar>& a,
                        const Eigen::MatrixBase<DX>& x,
                        const Eigen::MatrixBase<DY>& y) {
  detail::check_element(a, x);
  detail::check_element(a, y);
  Vector<Scalar> out = a.zero();
  const Scalar zero(0);
  for (Index i = 0; i < a.size(); ++i) {
    if (x(i) == zero) continue;
    out.noalias() += x(i) * (a.constants().left(i) * y);
  }
  return out;
}

/// Product of two basis elements.
template <typename Scalar>
Vector<Scalar> multiply(const TableAlgebra<Scalar>& a, Index i, Index j) {
  if (i < 0 || j < 0 || i >= a.size() || j >= a.size()) {
    throw MalformedElement("basis index out of range");
  }
  return a.constants().product(i, j);
}

/// Transport coefficients along the involution.
template <typename Scalar, typename D>
Vector<Scalar> conjugate(const TableAlgebra<Scalar>& a,
                         const Eigen::MatrixBase<D>& x) {
  detail::check_element(a, x);
  Vector<Scalar> out = a.zero();
  for (Index i = 0; i < a.size(); ++i) out(a.basis().dual(i)) = x(i);
  return out;
}

/// Hermitian form with the basis orthonormal.
template <typename Scalar, typename DX, typename DY>
Scalar inner(const TableAlgebra<Scalar>& a, const Eigen::MatrixBase<DX>& x,
             const Eigen::MatrixBase<DY>& y) {
  detail::check_element(a, x);
  detail::check_element(a, y);
  return x.cwiseProduct(y).sum();
}

template <typename Scalar, typename D>
Scalar degree(const TableAlgebra<Scalar>& a, const Eigen::MatrixBase<D>& x) {
  detail::check_element(a, x);
  return x.cwiseProduct(a.degrees()).sum();
}

/// Indices with nonzero coefficient, ascending.
template <typename D>
std::vector<Index> support(const Eigen::MatrixBase<D>& x) {
  using Scalar = typename D::Scalar;
  std::vector<Index> s;
  for (Index i = 0; i < static_cast<Index>(x.rows()); ++i) {
    if (x(i) != Scalar(0)) s.push_back(i);
  }
  return s;
}

template <typename D>
bool is_component(const Eigen::MatrixBase<D>& x) {
  using Scalar = typename D::Scalar;
  for (Index i = 0; i < static_cast<Index>(x.rows()); ++i) {
    if (x(i) < Scalar(0)) return false;
  }
  return true;
}

/// Convert an algebra to another scalar type, e.g. machine integers for a
/// fast path once bounds are known.
template <typename To, typename From>
TableAlgebra<To> cast_algebra(const TableAlgebra<From>& a) {
  StructureConstants<To> c(a.size());
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < a.size(); ++j)
      for (Index m = 0; m < a.size(); ++m)
        c(i, j, m) = static_cast<To>(a(i, j, m));
  return TableAlgebra<To>(a.basis(), std::move(c), a.metadata());
}

}  // namespace tabalg
