#pragma once

#include "tabalg/algebra.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <mutex>
#include <string_view>
#include <thread>
#include <vector>

namespace tabalg {

enum class AxiomClass {
  Nonnegativity,
  Integrality,
  Identity,
  Commutativity,
  Involution,
  DegreeHomomorphism,
  NormalizationSymmetry,
  Associativity,
};

inline constexpr std::array<AxiomClass, 8> kAxiomClasses = {
    AxiomClass::Nonnegativity,      AxiomClass::Integrality,
    AxiomClass::Identity,           AxiomClass::Commutativity,
    AxiomClass::Involution,         AxiomClass::DegreeHomomorphism,
    AxiomClass::NormalizationSymmetry, AxiomClass::Associativity,
};

constexpr std::string_view axiom_name(AxiomClass c) {
  switch (c) {
    case AxiomClass::Nonnegativity: return "nonnegativity";
    case AxiomClass::Integrality: return "integrality";
    case AxiomClass::Identity: return "identity";
    case AxiomClass::Commutativity: return "commutativity";
    case AxiomClass::Involution: return "involution";
    case AxiomClass::DegreeHomomorphism: return "degree-homomorphism";
    case AxiomClass::NormalizationSymmetry: return "normalization-symmetry";
    case AxiomClass::Associativity: return "associativity";
  }
  return "?";
}

/// One failing instance. Unused index slots are -1. For associativity the
/// witness is (i, j, l, m): coefficient of b_m differs between (b_i b_j) b_l
/// and b_i (b_j b_l).
struct Violation {
  Index i = -1, j = -1, l = -1, m = -1;
};

struct AxiomCheck {
  AxiomClass axiom;
  std::size_t checked = 0;
  std::vector<Violation> witnesses;
  bool passed() const { return witnesses.empty(); }
};

struct VerificationReport {
  std::vector<AxiomCheck> checks;  // one per AxiomClass, in kAxiomClasses order

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AxiomCheck& c) { return c.passed(); });
  }
  const AxiomCheck& check(AxiomClass c) const {
    return checks[static_cast<std::size_t>(c)];
  }
  std::size_t associativity_triples() const {
    return check(AxiomClass::Associativity).checked;
  }
};

struct VerifyOptions {
  unsigned jobs = 1;
};

namespace detail {

/// Compares b_i (b_j b_l) = left(i) left(j) e_l against
/// (b_i b_j) b_l = sum_m delta_ijm left(m) e_l for every i in [begin, end).
template <typename S>
void associativity_slice(const StructureConstants<S>& c, Index begin, Index end,
                         std::vector<Violation>& out) {
  const Index k = c.size();
  Matrix<S> lhs(k, k), rhs(k, k);
  const S zero(0);
  for (Index i = begin; i < end; ++i) {
    for (Index j = 0; j < k; ++j) {
      rhs.noalias() = c.left(i) * c.left(j);
      lhs.setZero();
      for (Index m = 0; m < k; ++m) {
        const S& d = c(i, j, m);
        if (d != zero) lhs.noalias() += d * c.left(m);
      }
      if (lhs == rhs) continue;
      for (Index l = 0; l < k; ++l)
        for (Index n = 0; n < k; ++n)
          if (lhs(n, l) != rhs(n, l)) out.push_back({i, j, l, n});
    }
  }
}

template <typename S>
std::vector<Violation> associativity_sweep(const StructureConstants<S>& c,
                                           unsigned jobs) {
  const Index k = c.size();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(k)));
  if (jobs == 1) {
    std::vector<Violation> out;
    associativity_slice(c, 0, k, out);
    return out;
  }
  std::vector<std::vector<Violation>> parts(jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    const Index b = static_cast<Index>(k * t / jobs);
    const Index e = static_cast<Index>(k * (t + 1) / jobs);
    pool.emplace_back([&, b, e, t] { associativity_slice(c, b, e, parts[t]); });
  }
  for (auto& th : pool) th.join();
  std::vector<Violation> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// True when every intermediate of the associativity sweep provably fits in
/// int64: entries bounded by M give sums bounded by k * M^2.
template <typename Scalar>
bool fits_machine_sweep(const StructureConstants<Scalar>& c) {
  if constexpr (std::is_same_v<Scalar, std::int64_t>) {
    (void)c;
    return false;
  } else {
    const Index k = c.size();
    Scalar max_entry(0);
    for (Index i = 0; i < k; ++i) {
      Scalar mx = c.left(i).maxCoeff();
      if (mx > max_entry) max_entry = mx;
    }
    const Scalar limit(std::int64_t{1} << 40);
    if (max_entry > limit) return false;
    return max_entry * max_entry * Scalar(k) * Scalar(4) <
           Scalar(std::numeric_limits<std::int64_t>::max() / 4);
  }
}

}  // namespace detail

/// Checks every table-algebra axiom class, including the full k^3
/// associativity sweep. Failures are report entries, never exceptions.
template <typename Scalar>
VerificationReport verify_axioms(const TableAlgebra<Scalar>& a,
                                 const VerifyOptions& opts = {}) {
  const Index k = a.size();
  const auto& b = a.basis();
  const Scalar zero(0), one(1);
  VerificationReport rep;
  for (auto ax : kAxiomClasses) rep.checks.push_back({ax, 0, {}});
  auto at = [&](AxiomClass c) -> AxiomCheck& {
    return rep.checks[static_cast<std::size_t>(c)];
  };

  bool sane = true;  // nonnegative and integral: needed by the fast path
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      for (Index m = 0; m < k; ++m) {
        const Scalar& d = a(i, j, m);
        at(AxiomClass::Nonnegativity).checked++;
        at(AxiomClass::Integrality).checked++;
        if (d < zero) {
          at(AxiomClass::Nonnegativity).witnesses.push_back({i, j, -1, m});
          sane = false;
        }
        if (!detail::is_integral_value(d)) {
          at(AxiomClass::Integrality).witnesses.push_back({i, j, -1, m});
          sane = false;
        }
        at(AxiomClass::Commutativity).checked++;
        if (d != a(j, i, m)) {
          at(AxiomClass::Commutativity).witnesses.push_back({i, j, -1, m});
        }
        at(AxiomClass::Involution).checked++;
        if (d != a(b.dual(i), b.dual(j), b.dual(m))) {
          at(AxiomClass::Involution).witnesses.push_back({i, j, -1, m});
        }
        at(AxiomClass::NormalizationSymmetry).checked++;
        if (d != a(b.dual(j), m, i)) {
          at(AxiomClass::NormalizationSymmetry).witnesses.push_back(
              {i, j, -1, m});
        }
      }

  for (Index j = 0; j < k; ++j)
    for (Index m = 0; m < k; ++m) {
      at(AxiomClass::Identity).checked++;
      if (a(0, j, m) != (j == m ? one : zero)) {
        at(AxiomClass::Identity).witnesses.push_back({0, j, -1, m});
      }
    }

  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      at(AxiomClass::DegreeHomomorphism).checked++;
      Scalar lhs = a.constants().product(i, j).dot(a.degrees());
      if (lhs != a.degrees()(i) * a.degrees()(j)) {
        at(AxiomClass::DegreeHomomorphism).witnesses.push_back({i, j, -1, -1});
      }
    }

  auto& assoc = at(AxiomClass::Associativity);
  assoc.checked = static_cast<std::size_t>(k) * k * k;
  if (sane && detail::fits_machine_sweep(a.constants())) {
    const auto fast = cast_algebra<std::int64_t>(a);
    assoc.witnesses = detail::associativity_sweep(fast.constants(), opts.jobs);
  } else {
    assoc.witnesses = detail::associativity_sweep(a.constants(), opts.jobs);
  }
  return rep;
}

}  // namespace tabalg
