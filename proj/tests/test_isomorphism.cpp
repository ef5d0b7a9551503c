#include "support/test_util.hpp"

#include "tabalg/isomorphism.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace tabalg;

namespace {

ClosedSubset named(const Algebra& a, const std::string& n) {
  for (const auto& s : a.metadata().subsets)
    if (s.name == n) return {s.members};
  throw Error("no subset " + n);
}

/// The same algebra with its non-identity basis elements shuffled.
Algebra permuted(const Algebra& a, std::uint64_t seed) {
  const Index k = a.size();
  std::vector<Index> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(p.begin() + 1, p.end(), rng);  // p[new] = old
  std::vector<Index> inv(k);
  for (Index t = 0; t < k; ++t) inv[p[t]] = t;
  std::vector<BasisElement> el;
  for (Index t = 0; t < k; ++t) {
    const auto& e = a.basis()[p[t]];
    el.push_back({e.name, e.degree, inv[e.dual]});
  }
  StructureConstants<Integer> s(k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      for (Index m = 0; m < k; ++m) s(i, j, m) = a(p[i], p[j], p[m]);
  return Algebra(TableBasis(std::move(el), a.basis().flags()), std::move(s));
}

}  // namespace

TEST_SUITE("isomorphism") {
  TEST_CASE("restriction") {
    const auto& b = bundled("B32");
    const auto d = restrict(b, named(b, "D"));
    CHECK(d.size() == 17);
    CHECK(verify_axioms(d).passed());
    const auto c = restrict(b, named(b, "C"), "C7");
    CHECK(c.constants() == bundled("C7").constants());
    CHECK(c.basis() == bundled("C7").basis());
    const auto one = restrict(b, ClosedSubset{{0}});
    CHECK(one.size() == 1);
    CHECK(one(0, 0, 0) == 1);
    CHECK_THROWS_AS(restrict(b, ClosedSubset{{0, 1, 2}}), NotClosed);
  }

  TEST_CASE("restriction commutes with the lattice") {
    const auto& b = bundled("B32");
    const auto d = named(b, "D");
    const auto sub = restrict(b, d);
    std::vector<std::vector<Index>> inside;
    for (const auto& s : all_closed_subsets(b))
      if (std::includes(d.members.begin(), d.members.end(), s.members.begin(), s.members.end())) {
        std::vector<Index> local;
        for (Index i : s.members)
          local.push_back(static_cast<Index>(std::find(d.members.begin(), d.members.end(), i) -
                                             d.members.begin()));
        inside.push_back(local);
      }
    std::vector<std::vector<Index>> got;
    for (const auto& s : all_closed_subsets(sub)) got.push_back(s.members);
    CHECK(got == inside);
  }

  TEST_CASE("D of B32 is exactly isomorphic to D17") {
    const auto& b = bundled("B32");
    const auto cert = exact_isomorphic(restrict(b, named(b, "D")), bundled("D17"));
    REQUIRE(cert);
    CHECK(cert->verified);
    CHECK(cert->mapping[0] == 0);
  }

  TEST_CASE("E is shared by B32 and B22") {
    const auto& b32 = bundled("B32");
    const auto& b22 = bundled("B22");
    const auto e32 = restrict(b32, named(b32, "E"));
    const auto e22 = restrict(b22, named(b22, "E"));
    const auto cert = exact_isomorphic(e32, e22);
    REQUIRE(cert);
    CHECK(check_isomorphism(e32, e22, cert->mapping));
  }

  TEST_CASE("non-isomorphic pairs") {
    CHECK_FALSE(exact_isomorphic(bundled("B32"), bundled("B22")));
    const auto& b22 = bundled("B22");
    CHECK_FALSE(exact_isomorphic(bundled("D17"), restrict(b22, named(b22, "E"))));
    const auto z4 = testutil::load("groups/z4.tab");
    const auto v4 = testutil::load("groups/z2xz2.tab");
    CHECK_FALSE(exact_isomorphic(z4, v4));
  }

  TEST_CASE("identity and shuffled copies") {
    for (const auto& a : bundled()) {
      CAPTURE(a.name());
      const auto self = exact_isomorphic(a, a);
      REQUIRE(self);
      CHECK(check_isomorphism(a, a, self->mapping));
      const auto p = permuted(a, 7);
      const auto fwd = exact_isomorphic(a, p);
      const auto back = exact_isomorphic(p, a);
      REQUIRE(fwd);
      REQUIRE(back);
      CHECK(check_isomorphism(a, p, fwd->mapping));
      CHECK(check_isomorphism(p, a, back->mapping));
    }
  }

  TEST_CASE("symmetry over the corpus") {
    const auto& all = bundled();
    for (const auto& a : all)
      for (const auto& b : all)
        CHECK(exact_isomorphic(a, b).has_value() == exact_isomorphic(b, a).has_value());
  }

  TEST_CASE("quotient of B32 by C as a group algebra") {
    const auto& b = bundled("B32");
    const auto q = quotient_by(b, named(b, "C"));
    const auto ga = group_algebra(*is_group_like(q), q, "B32/C");
    const auto z6 = testutil::oracle_algebra(oracle::cyclic(6),
                                             {"b1", "g1", "g2", "g3", "g4", "g5"}, "Z6");
    const auto cert = exact_isomorphic(ga, z6);
    REQUIRE(cert);
    CHECK(cert->verified);
    const auto z2 = testutil::load("groups/z2.tab");
    CHECK_FALSE(exact_isomorphic(ga, z2));
  }

  TEST_CASE("unverified inputs are rejected") {
    const auto s3 = testutil::load("groups/s3.tab");
    CHECK_THROWS_AS(exact_isomorphic(s3, s3), Unverified);
    auto s = bundled("C7").constants();
    s(1, 1, 1) += 1;
    const Algebra bad(bundled("C7").basis(), s);
    CHECK_THROWS_AS(exact_isomorphic(bad, bundled("C7")), Unverified);
  }

  TEST_CASE("invalid certificates are detected") {
    const auto& d = bundled("D17");
    std::vector<Index> id(d.size());
    std::iota(id.begin(), id.end(), 0);
    CHECK(check_isomorphism(d, d, id));
    // The involution is an automorphism.
    std::vector<Index> bar(d.size());
    for (Index i = 0; i < d.size(); ++i) bar[i] = d.basis().dual(i);
    CHECK(check_isomorphism(d, d, bar));
    // Swapping elements of different degree is not.
    const Index b5 = d.basis().index_of("b5"), b8 = d.basis().index_of("b8");
    std::swap(id[b5], id[b8]);
    CHECK_FALSE(check_isomorphism(d, d, id));
  }
}
