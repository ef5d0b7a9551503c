#include "support/test_util.hpp"

#include "tabalg/structure.hpp"

#include <doctest.h>

#include <set>

using namespace tabalg;

namespace {

std::vector<Index> idx(const Algebra& a, std::initializer_list<const char*> names) {
  std::vector<Index> out;
  for (const char* n : names) out.push_back(a.basis().index_of(n));
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<Index>& named(const Algebra& a, const std::string& n) {
  for (const auto& s : a.metadata().subsets)
    if (s.name == n) return s.members;
  throw Error("no subset " + n);
}

std::vector<std::string> names(const Algebra& a, const std::vector<Index>& s) {
  std::vector<std::string> out;
  for (Index i : s) out.push_back(a.basis().name(i));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("structure-analysis") {
  TEST_CASE("closure") {
    const auto& b = bundled("B32");
    CHECK(closure(b, idx(b, {"b8"})).members ==
          idx(b, {"b1", "b8", "x10", "b5", "c5", "c8", "x9"}));
    CHECK(closure(b, {0}).members == std::vector<Index>{0});
    CHECK(closure(b, idx(b, {"b3"})).size() == 32);
    CHECK(closure(b, idx(b, {"c3"})).members == named(b, "D"));
    CHECK(closure(b, idx(b, {"r3"})).members == named(b, "E"));
    CHECK_THROWS_AS(closure(b, {40}), MalformedElement);
  }

  TEST_CASE("closed subset lattices") {
    const auto& b32 = bundled("B32");
    const auto l32 = all_closed_subsets(b32);
    REQUIRE(l32.size() == 5);
    CHECK(l32[0].members == std::vector<Index>{0});
    CHECK(l32[1].members == named(b32, "C"));
    CHECK(l32[2].members == named(b32, "E"));
    CHECK(l32[3].members == named(b32, "D"));
    CHECK(l32[4].size() == 32);

    const auto& b22 = bundled("B22");
    const auto l22 = all_closed_subsets(b22);
    REQUIRE(l22.size() == 4);
    CHECK(l22[1].members == named(b22, "C"));
    CHECK(l22[2].members == named(b22, "E"));
    CHECK(l22[3].size() == 22);

    const Algebra trivial(TableBasis({{"b1", 1, 0}}), [] {
      StructureConstants<Integer> s(1);
      s(0, 0, 0) = 1;
      return s;
    }());
    CHECK(all_closed_subsets(trivial).size() == 1);
  }

  TEST_CASE("maximal subsets of B32 meet in C") {
    const auto& b = bundled("B32");
    const auto& d = named(b, "D");
    const auto& e = named(b, "E");
    std::vector<Index> meet;
    std::set_intersection(d.begin(), d.end(), e.begin(), e.end(), std::back_inserter(meet));
    CHECK(meet == named(b, "C"));
    // No closed subset lies strictly between D or E and the whole basis.
    for (const auto& s : all_closed_subsets(b)) {
      if (s.size() == b.size()) continue;
      for (const auto* m : {&d, &e}) {
        if (s.size() > static_cast<Index>(m->size())) {
          CHECK_FALSE(std::includes(s.members.begin(), s.members.end(), m->begin(), m->end()));
        }
      }
    }
  }

  TEST_CASE("every returned subset is closed") {
    for (const auto& a : bundled())
      for (const auto& s : all_closed_subsets(a)) CHECK(is_closed(a, s.members));
  }

  TEST_CASE("size cap") {
    const Index k = 65;
    std::vector<BasisElement> el{{"b1", 1, 0}};
    for (Index i = 1; i < k; ++i) el.push_back({"g" + std::to_string(i), 1, (k - i) % k});
    StructureConstants<Integer> s(k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) s(i, j, (i + j) % k) = 1;
    const Algebra z65(TableBasis(std::move(el)), std::move(s));
    CHECK_THROWS_AS(all_closed_subsets(z65), SizeCapExceeded);
    CHECK(closure(z65, {5}).size() == 13);
  }

  TEST_CASE("power supports of b3 in B32") {
    const auto& b = bundled("B32");
    const auto t = power_supports(b, b.basis().index_of("b3"), 10);
    REQUIRE(t.rows.size() == 10);
    const std::vector<std::vector<std::string>> want = {
        {"b3"},
        {"c3", "b6"},
        {"r3", "s6", "t15"},
        {"c3bar", "b6bar", "y15bar", "c9bar"},
        {"b3bar", "x6bar", "x15bar", "b9bar", "z3"},
        {"b1", "b8", "x10", "b5", "c5", "c8", "x9"},
        {"b3", "x6", "x15", "b9", "z3bar"},
        {"c3", "b6", "y15", "c9", "d3bar"},
        {"r3", "s6", "t15", "d9", "y3"},
        {"c3bar", "b6bar", "y15bar", "c9bar", "d3"},
    };
    for (int n = 0; n < 10; ++n) {
      CAPTURE(n + 1);
      CHECK(t.rows[n].exponent == n + 1);
      CHECK(names(b, t.rows[n].support) == sorted(want[n]));
    }
  }

  TEST_CASE("power supports of b3 in B22") {
    const auto& b = bundled("B22");
    const auto t = power_supports(b, b.basis().index_of("b3"), 7);
    const std::vector<std::vector<std::string>> want = {
        {"b3"},
        {"r3", "s6"},
        {"b3bar", "t6", "b15bar"},
        {"b1", "b8", "x10", "b5", "c5", "c8", "x9"},
        {"b3", "t6bar", "b15", "y9", "x3"},
        {"r3", "s6", "t15", "d9", "y3"},
        {"b3bar", "t6", "b15bar", "y9bar", "x3bar"},
    };
    for (int n = 0; n < 7; ++n) CHECK(names(b, t.rows[n].support) == sorted(want[n]));
  }

  TEST_CASE("powers of the identity") {
    const auto& b = bundled("D17");
    for (const auto& row : power_supports(b, 0, 4).rows) CHECK(row.support == std::vector<Index>{0});
    CHECK_THROWS_AS(power_supports(b, 0, 0), Error);
  }

  TEST_CASE("quotient of B32 by C is cyclic of order six") {
    const auto& b = bundled("B32");
    const auto q = quotient_by(b, ClosedSubset{named(b, "C")});
    REQUIRE(q.size() == 6);
    CHECK(q.classes[0].members == named(b, "C"));
    CHECK(names(b, q.classes[q.class_of(b.basis().index_of("b3"))].members) ==
          sorted({"b3", "x6", "x15", "b9", "z3bar"}));
    const auto g = is_group_like(q);
    REQUIRE(g);
    CHECK(g->type == "cyclic(6)");
    CHECK(g->invariant_factors == std::vector<std::int64_t>{6});
    // b3 squared is c3 + b6, both in one class.
    const int cb3 = q.class_of(b.basis().index_of("b3"));
    CHECK(q.compose[cb3][cb3] == std::vector<int>{q.class_of(b.basis().index_of("c3"))});
    CHECK(q.class_of(b.basis().index_of("c3")) == q.class_of(b.basis().index_of("b6")));
    const int cc3 = q.class_of(b.basis().index_of("c3"));
    CHECK(q.compose[cb3][cc3] == std::vector<int>{q.class_of(b.basis().index_of("r3"))});
    CHECK(q.dual[cb3] == q.class_of(b.basis().index_of("b3bar")));
  }

  TEST_CASE("quotient of B22 by C is cyclic of order four") {
    const auto& b = bundled("B22");
    const auto q = quotient_by(b, ClosedSubset{named(b, "C")});
    CHECK(q.size() == 4);
    const auto g = is_group_like(q);
    REQUIRE(g);
    CHECK(g->type == "cyclic(4)");
  }

  TEST_CASE("trivial and full quotients") {
    for (const auto& a : bundled()) {
      const auto by_one = quotient_by(a, ClosedSubset{{0}});
      CHECK(by_one.size() == a.size());
      ClosedSubset full;
      for (Index i = 0; i < a.size(); ++i) full.members.push_back(i);
      const auto q = quotient_by(a, full);
      CHECK(q.size() == 1);
      CHECK(is_group_like(q)->type == "trivial");
    }
    const auto& b = bundled("B32");
    CHECK_THROWS_AS(quotient_by(b, ClosedSubset{idx(b, {"b1", "b3"})}), NotClosed);
  }

  TEST_CASE("group recognition") {
    const auto v4 = testutil::load("groups/z2xz2.tab");
    const auto g = is_group_like(quotient_by(v4, ClosedSubset{{0}}));
    REQUIRE(g);
    CHECK(g->type == "klein-four");
    CHECK(g->invariant_factors == std::vector<std::int64_t>{2, 2});
    const auto z6 = testutil::load("groups/z6.tab");
    CHECK(is_group_like(quotient_by(z6, ClosedSubset{{0}}))->type == "cyclic(6)");
    // Class products of S3 are not single classes.
    const auto s3 = testutil::load("groups/s3.tab");
    CHECK_FALSE(is_group_like(quotient_by(s3, ClosedSubset{{0}})));
    // Z12 split as Z2 x Z6.
    QuotientClassTable q;
    for (int p = 0; p < 12; ++p) q.classes.push_back({"e" + std::to_string(p), {p}});
    q.compose.assign(12, std::vector<std::vector<int>>(12));
    for (int p = 0; p < 12; ++p)
      for (int r = 0; r < 12; ++r) {
        const int x = (p / 6 + r / 6) % 2, y = (p % 6 + r % 6) % 6;
        q.compose[p][r] = {x * 6 + y};
      }
    const auto g12 = is_group_like(q);
    REQUIRE(g12);
    CHECK(g12->type == "abelian(2,6)");
  }

  TEST_CASE("group lattices match normal subgroups") {
    struct Case {
      oracle::Group g;
      const char* file;
    };
    for (const auto& c : {Case{oracle::cyclic(6), "groups/z6.tab"},
                          Case{oracle::symmetric3(), "groups/s3.tab"},
                          Case{oracle::cyclic(4), "groups/z4.tab"},
                          Case{oracle::klein_four(), "groups/z2xz2.tab"}}) {
      CAPTURE(c.file);
      const auto a = testutil::load(c.file);
      std::set<std::vector<int>> got;
      for (const auto& s : all_closed_subsets(a)) got.insert({s.members.begin(), s.members.end()});
      CHECK(got == oracle::normal_subgroups(c.g));
    }
    CHECK(all_closed_subsets(testutil::load("groups/z6.tab")).size() == 4);
  }

  TEST_CASE("group algebra of a quotient") {
    const auto& b = bundled("B32");
    const auto q = quotient_by(b, ClosedSubset{named(b, "C")});
    const auto ga = group_algebra(*is_group_like(q), q, "B32/C");
    CHECK(ga.size() == 6);
    CHECK(ga.basis().name(0) == "b1");
  }
}
