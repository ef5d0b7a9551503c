#pragma once

#include "tabalg/algebra.hpp"
#include "tabalg/structure.hpp"
#include "tabalg/verify.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tabalg {

/// mapping[i] is the image of basis element i of the first algebra.
struct IsoCertificate {
  std::vector<Index> mapping;
  bool verified = false;
};

/// Sub-table-algebra on a closed subset, reindexed in member order. Throws
/// NotClosed.
template <typename Scalar>
TableAlgebra<Scalar> restrict(const TableAlgebra<Scalar>& a, const ClosedSubset& s,
                              std::string name = {}) {
  if (!is_closed(a, s.members)) throw NotClosed("subset is not closed");
  const Index n = s.size();
  std::vector<Index> local(a.size(), -1);
  for (Index t = 0; t < n; ++t) local[s.members[t]] = t;
  std::vector<BasisElement> elems;
  for (Index i : s.members) {
    const auto& e = a.basis()[i];
    elems.push_back({e.name, e.degree, local[e.dual]});
  }
  StructureConstants<Scalar> c(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index m = 0; m < n; ++m)
        c(i, j, m) = a(s.members[i], s.members[j], s.members[m]);
  AlgebraMetadata meta;
  meta.name = name.empty() ? a.name() + "_sub" + std::to_string(n) : std::move(name);
  return TableAlgebra<Scalar>(TableBasis(std::move(elems), a.basis().flags()),
                              std::move(c), std::move(meta));
}

/// True when mapping is a bijection fixing the identity that preserves
/// degrees, the involution and every structure constant.
template <typename Scalar>
bool check_isomorphism(const TableAlgebra<Scalar>& a, const TableAlgebra<Scalar>& b,
                       const std::vector<Index>& psi) {
  const Index k = a.size();
  if (b.size() != k || static_cast<Index>(psi.size()) != k) return false;
  if (k == 0) return true;
  std::vector<char> hit(k, 0);
  for (Index i = 0; i < k; ++i) {
    if (psi[i] < 0 || psi[i] >= k || hit[psi[i]]) return false;
    hit[psi[i]] = 1;
  }
  if (psi[0] != 0) return false;
  for (Index i = 0; i < k; ++i) {
    if (a.basis().degree(i) != b.basis().degree(psi[i])) return false;
    if (psi[a.basis().dual(i)] != b.basis().dual(psi[i])) return false;
    for (Index j = 0; j < k; ++j)
      for (Index m = 0; m < k; ++m)
        if (a(i, j, m) != b(psi[i], psi[j], psi[m])) return false;
  }
  return true;
}

namespace detail {

/// Invariants of b_i under exact isomorphism: degree, reality, the
/// coefficients of b_i b_di by constituent degree, and the norms of b_i b_j
/// by the degree of b_j.
template <typename Scalar>
std::vector<Scalar> iso_fingerprint(const TableAlgebra<Scalar>& a, Index i) {
  const auto& b = a.basis();
  const Index k = a.size();
  std::vector<Scalar> f{Scalar(b.degree(i)), Scalar(b.is_real(i) ? 1 : 0)};
  std::vector<std::pair<Scalar, Scalar>> sq, norms;
  for (Index m = 0; m < k; ++m) {
    const Scalar& v = a(i, b.dual(i), m);
    if (v != Scalar(0)) sq.push_back({Scalar(b.degree(m)), v});
  }
  for (Index j = 0; j < k; ++j) {
    Scalar n(0);
    for (Index m = 0; m < k; ++m) n += a(i, j, m) * a(i, j, m);
    norms.push_back({Scalar(b.degree(j)), n});
  }
  std::sort(sq.begin(), sq.end());
  std::sort(norms.begin(), norms.end());
  f.push_back(Scalar(static_cast<std::int64_t>(sq.size())));
  for (auto& [d, v] : sq) {
    f.push_back(d);
    f.push_back(v);
  }
  for (auto& [d, v] : norms) {
    f.push_back(d);
    f.push_back(v);
  }
  return f;
}

template <typename Scalar>
class IsoSearch {
 public:
  IsoSearch(const TableAlgebra<Scalar>& a, const TableAlgebra<Scalar>& b)
      : a_(a), b_(b), k_(a.size()), psi_(k_, -1), used_(k_, 0) {
    std::vector<std::vector<Scalar>> fa(k_), fb(k_);
    for (Index i = 0; i < k_; ++i) {
      fa[i] = iso_fingerprint(a, i);
      fb[i] = iso_fingerprint(b, i);
    }
    cand_.resize(k_);
    for (Index i = 0; i < k_; ++i)
      for (Index j = 0; j < k_; ++j)
        if (fa[i] == fb[j]) cand_[i].push_back(j);
  }

  std::optional<std::vector<Index>> run() {
    if (k_ == 0) return psi_;
    for (Index i = 0; i < k_; ++i)
      if (cand_[i].empty()) return std::nullopt;
    if (!assign(0, 0)) return std::nullopt;
    if (search()) return psi_;
    return std::nullopt;
  }

 private:
  /// Maps i to j and the dual of i to the dual of j, checking every constant
  /// among assigned elements that involves them.
  bool assign(Index i, Index j) {
    const Index di = a_.basis().dual(i), dj = b_.basis().dual(j);
    if (used_[j] || (di != i && used_[dj]) || (di == i) != (dj == j)) return false;
    set(i, j);
    if (di != i) set(di, dj);
    if (consistent(i) && (di == i || consistent(di))) return true;
    unset(i);
    if (di != i) unset(di);
    return false;
  }

  void set(Index i, Index j) {
    psi_[i] = j;
    used_[j] = 1;
    assigned_.push_back(i);
  }
  void unset(Index i) {
    used_[psi_[i]] = 0;
    psi_[i] = -1;
    assigned_.erase(std::find(assigned_.begin(), assigned_.end(), i));
  }

  bool consistent(Index x) const {
    for (Index j : assigned_)
      for (Index m : assigned_) {
        const Index px = psi_[x], pj = psi_[j], pm = psi_[m];
        if (a_(x, j, m) != b_(px, pj, pm) || a_(j, x, m) != b_(pj, px, pm) ||
            a_(j, m, x) != b_(pj, pm, px))
          return false;
      }
    return true;
  }

  bool search() {
    // First fail: the unassigned element with the fewest free candidates.
    Index best = -1;
    std::size_t best_n = 0;
    for (Index i = 0; i < k_; ++i) {
      if (psi_[i] >= 0) continue;
      std::size_t n = 0;
      for (Index j : cand_[i]) n += used_[j] ? 0 : 1;
      if (best < 0 || n < best_n) {
        best = i;
        best_n = n;
      }
    }
    if (best < 0) return true;
    for (Index j : cand_[best]) {
      if (used_[j]) continue;
      if (!assign(best, j)) continue;
      if (search()) return true;
      const Index d = a_.basis().dual(best);
      unset(best);
      if (d != best) unset(d);
    }
    return false;
  }

  const TableAlgebra<Scalar>& a_;
  const TableAlgebra<Scalar>& b_;
  Index k_;
  std::vector<Index> psi_;
  std::vector<char> used_;
  std::vector<Index> assigned_;
  std::vector<std::vector<Index>> cand_;
};

}  // namespace detail

/// Some structure-constant-preserving bijection of bases, or none. Both
/// inputs must pass verify_axioms; throws Unverified otherwise.
template <typename Scalar>
std::optional<IsoCertificate> exact_isomorphic(const TableAlgebra<Scalar>& a,
                                               const TableAlgebra<Scalar>& b) {
  for (const auto* x : {&a, &b}) {
    if (!verify_axioms(*x).passed()) {
      throw Unverified("algebra " + x->name() + " fails the table algebra axioms");
    }
  }
  if (a.size() != b.size()) return std::nullopt;
  auto psi = detail::IsoSearch<Scalar>(a, b).run();
  if (!psi) return std::nullopt;
  IsoCertificate cert{std::move(*psi), false};
  cert.verified = check_isomorphism(a, b, cert.mapping);
  if (!cert.verified) throw Error("isomorphism search returned an invalid mapping");
  return cert;
}

}  // namespace tabalg
