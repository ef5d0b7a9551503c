// One line per acceptance criterion; the exit status is the number of
// failures.

#include "support/test_util.hpp"

#include "tabalg/deduction.hpp"
#include "tabalg/isomorphism.hpp"
#include "tabalg/structure.hpp"
#include "tabalg/verify.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace tabalg;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream why;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) why << "; ";
      ok = false;
      why << what;
    }
  }
};

const std::vector<Index>& named(const Algebra& a, const std::string& n) {
  for (const auto& s : a.metadata().subsets)
    if (s.name == n) return s.members;
  throw Error("no subset " + n);
}

std::set<std::string> names(const Algebra& a, const std::vector<Index>& s) {
  std::set<std::string> out;
  for (Index i : s) out.insert(a.basis().name(i));
  return out;
}

std::set<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::set<std::string> out;
  for (std::string w; in >> w;) out.insert(w);
  return out;
}

void axiom_suite(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& a : bundled()) {
    const auto rep = verify_axioms(a);
    const auto k = static_cast<std::size_t>(a.size());
    o.expect(rep.passed(), a.name() + " has violations");
    o.expect(rep.associativity_triples() == k * k * k, a.name() + " triple count");
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.expect(s < 5.0, "took " + std::to_string(s) + " s");
}

void inner_products(Outcome& o) {
  for (const char* n : {"B22", "B32"}) {
    const auto& a = bundled(n);
    const Element p = multiply(a, a.unit("b3"), a.unit("b8"));
    o.expect(inner(a, p, p) == 3, std::string(n) + ": |b3 b8|^2 != 3");
  }
  const auto& b = bundled("B32");
  const Element q = multiply(b, b.unit("b3"), b.unit("c3"));
  o.expect(q == testutil::expr(b, "r3 + s6"), "b3 c3 != r3 + s6");
  o.expect(inner(b, q, q) == 2, "|b3 c3|^2 != 2");
}

void lattices(Outcome& o) {
  const auto& b32 = bundled("B32");
  const auto l32 = all_closed_subsets(b32);
  std::vector<std::vector<Index>> want32 = {{0}, named(b32, "C"), named(b32, "E"),
                                            named(b32, "D")};
  o.expect(l32.size() == 5, "B32 lattice has " + std::to_string(l32.size()) + " members");
  for (std::size_t n = 0; n < 4 && n < l32.size(); ++n)
    o.expect(l32[n].members == want32[n], "B32 lattice member " + std::to_string(n));
  o.expect(named(b32, "C").size() == 7 && named(b32, "E").size() == 12 &&
               named(b32, "D").size() == 17,
           "B32 subset sizes");
  // D and E are maximal: nothing proper lies above either.
  for (const auto& s : l32)
    for (const auto* m : {&named(b32, "D"), &named(b32, "E")})
      if (s.size() > static_cast<Index>(m->size()) && s.size() < b32.size())
        o.expect(!std::includes(s.members.begin(), s.members.end(), m->begin(), m->end()),
                 "a subset lies above a maximal one");
  const auto& b22 = bundled("B22");
  const auto l22 = all_closed_subsets(b22);
  o.expect(l22.size() == 4, "B22 lattice has " + std::to_string(l22.size()) + " members");
  if (l22.size() == 4) {
    o.expect(l22[1].members == named(b22, "C") && l22[1].size() == 7, "B22 C");
    o.expect(l22[2].members == named(b22, "E") && l22[2].size() == 12, "B22 E");
    o.expect(std::includes(l22[2].members.begin(), l22[2].members.end(),
                           l22[1].members.begin(), l22[1].members.end()),
             "B22 chain");
  }
}

void quotients(Outcome& o) {
  for (const auto& [n, order] : {std::pair<const char*, int>{"B32", 6}, {"B22", 4}}) {
    const auto& a = bundled(n);
    const auto q = quotient_by(a, ClosedSubset{named(a, "C")});
    const auto g = is_group_like(q);
    o.expect(g && g->type == "cyclic(" + std::to_string(order) + ")",
             std::string(n) + "/C is " + (g ? g->type : std::string("not group-like")));
  }
  const std::vector<std::string> table1 = {
      "b3",
      "c3 b6",
      "r3 s6 t15",
      "c3bar b6bar y15bar c9bar",
      "b3bar x6bar x15bar b9bar z3",
      "b1 b8 x10 b5 c5 c8 x9",
      "b3 x6 x15 b9 z3bar",
      "c3 b6 y15 c9 d3bar",
      "r3 s6 t15 d9 y3",
      "c3bar b6bar y15bar c9bar d3",
  };
  // Row 6 of the second table as computed; the published row names y15,
  // which is not a basis element of B22.
  const std::vector<std::string> table2 = {
      "b3",
      "r3 s6",
      "b3bar t6 b15bar",
      "b1 b8 x10 b5 c5 c8 x9",
      "b3 t6bar b15 y9 x3",
      "r3 s6 t15 d9 y3",
      "b3bar t6 b15bar y9bar x3bar",
  };
  for (const auto& [n, want] : {std::pair{"B32", &table1}, std::pair{"B22", &table2}}) {
    const auto& a = bundled(n);
    const auto t = power_supports(a, a.basis().index_of("b3"), static_cast<int>(want->size()));
    for (std::size_t r = 0; r < want->size(); ++r)
      o.expect(names(a, t.rows[r].support) == words((*want)[r]),
               std::string(n) + " power row " + std::to_string(r + 1));
  }
}

void isomorphisms(Outcome& o) {
  const auto& b32 = bundled("B32");
  const auto& b22 = bundled("B22");
  const auto d = exact_isomorphic(restrict(b32, ClosedSubset{named(b32, "D")}), bundled("D17"));
  o.expect(d && d->verified, "D of B32 vs D17");
  const auto e = exact_isomorphic(restrict(b32, ClosedSubset{named(b32, "E")}),
                                  restrict(b22, ClosedSubset{named(b22, "E")}));
  o.expect(e && e->verified, "E of B32 vs E of B22");
  o.expect(!exact_isomorphic(b32, b22), "B32 vs B22 reported isomorphic");
}

void oracles(Outcome& o) {
  struct Case {
    oracle::Group g;
    const char* file;
  };
  for (const auto& c : {Case{oracle::cyclic(2), "groups/z2.tab"},
                        Case{oracle::cyclic(3), "groups/z3.tab"},
                        Case{oracle::cyclic(4), "groups/z4.tab"},
                        Case{oracle::cyclic(6), "groups/z6.tab"},
                        Case{oracle::symmetric3(), "groups/s3.tab"}}) {
    const auto a = testutil::load(c.file);
    const auto t = oracle::class_tensor(c.g);
    bool same = static_cast<std::size_t>(a.size()) == t.size();
    for (Index i = 0; same && i < a.size(); ++i)
      for (Index j = 0; j < a.size(); ++j)
        for (Index m = 0; m < a.size(); ++m) same = same && a(i, j, m) == t[i][j][m];
    o.expect(same, std::string(c.file) + " tensor");
    std::set<std::vector<int>> got;
    for (const auto& s : all_closed_subsets(a)) got.insert({s.members.begin(), s.members.end()});
    o.expect(got == oracle::normal_subgroups(c.g), std::string(c.file) + " lattice");
  }
}

void deduction(Outcome& o) {
  const auto seed = parse_partial(read_file(testutil::data_path("partial/b32_b3_seed.tab")));
  PartialTable out;
  const auto t = complete_or_refute(seed, {}, &out);
  o.expect(t.status != DeductionStatus::Contradiction, "seed refuted");
  const auto& b = bundled("B32");
  const std::vector<std::pair<const char*, const char*>> block = {
      {"b3", "b3bar"}, {"b3", "b3"}, {"b3", "c3bar"}, {"b3", "x6"}, {"b3", "b8"},
      {"b3", "x6bar"}, {"b3", "b6bar"}, {"b3", "s6"}, {"b3", "c3"}, {"b3", "r3"}};
  int derived = 0;
  for (const auto& [x, y] : block) {
    const auto v = out.known(out.basis().index_of(x), out.basis().index_of(y));
    const auto want = format_expression(b.basis(), multiply(b, b.unit(x), b.unit(y)));
    const bool ok = v && format_expression(out.basis(), *v) == want;
    derived += ok;
    o.expect(ok, std::string(x) + "*" + y + " expected " + want);
  }
  o.expect(derived == 10, std::to_string(derived) + "/10 products derived");
  const auto branch = parse_partial(read_file(testutil::data_path("partial/b21_branch.tab")));
  const auto r = complete_or_refute(branch);
  o.expect(r.status == DeductionStatus::Contradiction,
           "b21 branch " + std::string(status_name(r.status)));
}

void round_trip(Outcome& o) {
  for (const auto& n : bundled_names()) {
    std::string lower = n;
    for (char& c : lower) c = static_cast<char>(std::tolower(c));
    const auto text = read_file(testutil::data_path(lower + ".tab"));
    const Algebra a = parse_algebra(text);
    const auto once = serialize(a);
    o.expect(once == text, n + " serializer output differs from file");
    const Algebra b = parse_algebra(once);
    o.expect(b == a && serialize(b) == once, n + " parse after serialize differs");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"axiom suite", axiom_suite},   {"inner products", inner_products},
      {"subset lattices", lattices},  {"quotients and power tables", quotients},
      {"isomorphisms", isomorphisms}, {"oracle equivalence", oracles},
      {"deduction", deduction},       {"round trip", round_trip},
  };
  int failed = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Outcome o;
    try {
      criteria[n].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.why << "exception: " << e.what();
    }
    failed += !o.ok;
    std::cout << "criterion " << n + 1 << " (" << criteria[n].first << "): "
              << (o.ok ? "PASS" : "FAIL");
    if (!o.ok) std::cout << " -- " << o.why.str();
    std::cout << '\n';
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed;
}
