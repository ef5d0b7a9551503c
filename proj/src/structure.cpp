#include "tabalg/structure.hpp"

#include <numeric>
#include <set>

namespace tabalg {

int QuotientClassTable::class_of(Index i) const {
  for (int c = 0; c < size(); ++c) {
    const auto& m = classes[c].members;
    if (std::binary_search(m.begin(), m.end(), i)) return c;
  }
  throw Error("basis index " + std::to_string(i) + " is in no class");
}

namespace detail {

using Supports = std::vector<std::vector<std::vector<Index>>>;

std::vector<Index> mask_to_list(const std::vector<char>& mask) {
  std::vector<Index> out;
  for (Index i = 0; i < static_cast<Index>(mask.size()); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

std::vector<char> close_mask(const TableBasis& b, const Supports& supp,
                             std::vector<char> mask) {
  if (mask.empty()) return mask;
  mask[0] = 1;
  std::vector<Index> members = mask_to_list(mask);
  // Products of every new member with every member, until nothing is added.
  std::size_t done = 0;
  while (done < members.size()) {
    const Index i = members[done++];
    auto add = [&](Index m) {
      if (!mask[m]) {
        mask[m] = 1;
        members.push_back(m);
      }
    };
    add(b.dual(i));
    for (std::size_t t = 0; t < members.size(); ++t) {
      const Index j = members[t];
      for (Index m : supp[i][j]) add(m);
      for (Index m : supp[j][i]) add(m);
    }
  }
  return mask;
}

std::vector<ClosedSubset> lattice_from_supports(const TableBasis& b,
                                                const Supports& supp) {
  constexpr std::size_t kNodeCap = 4096;
  const Index k = b.size();
  std::set<std::vector<char>> seen;
  std::vector<std::vector<char>> nodes;
  auto insert = [&](std::vector<char> m) {
    if (seen.insert(m).second) {
      if (seen.size() > kNodeCap) {
        throw SizeCapExceeded("more than 4096 closed subsets");
      }
      nodes.push_back(std::move(m));
    }
  };
  for (Index i = 0; i < k; ++i) {
    std::vector<char> m(k, 0);
    m[i] = 1;
    insert(close_mask(b, supp, std::move(m)));
  }
  // Joins of every pair; new nodes are joined with all earlier ones.
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    for (std::size_t q = 0; q < p; ++q) {
      std::vector<char> u = nodes[p];
      for (Index i = 0; i < k; ++i) u[i] |= nodes[q][i];
      if (seen.count(u)) continue;
      insert(close_mask(b, supp, std::move(u)));
    }
  }
  std::vector<ClosedSubset> out;
  for (const auto& m : nodes) out.push_back({mask_to_list(m)});
  std::sort(out.begin(), out.end());
  return out;
}

QuotientClassTable quotient_from_supports(const TableBasis& b, const Supports& supp,
                                          const ClosedSubset& c) {
  const Index k = b.size();
  std::vector<Index> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // b ~ b' when b' lies in Supp(C b C).
  for (Index x = 0; x < k; ++x) {
    std::vector<char> left(k, 0);
    for (Index u : c.members)
      for (Index m : supp[u][x]) left[m] = 1;
    for (Index m = 0; m < k; ++m) {
      if (!left[m]) continue;
      for (Index v : c.members)
        for (Index y : supp[m][v]) parent[find(y)] = find(x);
    }
  }
  std::vector<int> cls(k, -1);
  QuotientClassTable q;
  for (Index x = 0; x < k; ++x) {
    const Index r = find(x);
    if (cls[r] < 0) {
      cls[r] = q.size();
      q.classes.push_back({b.name(x), {}});
    }
    auto& qc = q.classes[cls[r]];
    qc.members.push_back(x);
    qc.label = std::min(qc.label, b.name(x));
  }
  const int n = q.size();
  auto class_of = [&](Index x) { return cls[find(x)]; };
  q.dual.assign(n, -1);
  for (Index x = 0; x < k; ++x) {
    const int d = class_of(b.dual(x));
    int& slot = q.dual[class_of(x)];
    if (slot >= 0 && slot != d) {
      throw RepresentativeDependence("involution does not respect the classes");
    }
    slot = d;
  }
  q.compose.assign(n, std::vector<std::vector<int>>(n));
  for (int p = 0; p < n; ++p) {
    for (int r = 0; r < n; ++r) {
      std::optional<std::vector<int>> first;
      for (Index x : q.classes[p].members) {
        for (Index y : q.classes[r].members) {
          std::vector<int> hit;
          for (Index m : supp[x][y]) hit.push_back(class_of(m));
          std::sort(hit.begin(), hit.end());
          hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
          if (!first) {
            first = std::move(hit);
          } else if (*first != hit) {
            throw RepresentativeDependence(
                "product of classes " + q.classes[p].label + " and " +
                q.classes[r].label + " depends on the representatives");
          }
        }
      }
      q.compose[p][r] = std::move(*first);
    }
  }
  return q;
}

}  // namespace detail

namespace {

/// Invariant-factor lists n_1 | n_2 | ... with product n and n_1 > 1.
void factor_lists(std::int64_t n, std::int64_t min_first,
                  std::vector<std::int64_t>& cur,
                  std::vector<std::vector<std::int64_t>>& out) {
  if (n == 1) {
    out.push_back(cur);
    return;
  }
  for (std::int64_t d = min_first; d <= n; ++d) {
    if (n % d != 0) continue;
    if (!cur.empty() && d % cur.back() != 0) continue;
    // The remaining factors are multiples of d.
    std::int64_t rest = n / d;
    if (rest != 1 && rest % d != 0) continue;
    cur.push_back(d);
    factor_lists(rest, d, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::optional<GroupTable> is_group_like(const QuotientClassTable& q) {
  const int n = q.size();
  if (n == 0) return std::nullopt;
  GroupTable g;
  g.cayley.assign(n, std::vector<int>(n));
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      if (q.compose[p][r].size() != 1) return std::nullopt;
      g.cayley[p][r] = q.compose[p][r][0];
    }
  const auto& t = g.cayley;
  for (int p = 0; p < n; ++p) {
    if (t[0][p] != p || t[p][0] != p) return std::nullopt;
    if (std::find(t[p].begin(), t[p].end(), 0) == t[p].end()) return std::nullopt;
    for (int r = 0; r < n; ++r) {
      if (t[p][r] != t[r][p]) g.abelian = false;
      for (int s = 0; s < n; ++s)
        if (t[t[p][r]][s] != t[p][t[r][s]]) return std::nullopt;
    }
  }
  if (!g.abelian) {
    g.type = "non-abelian(" + std::to_string(n) + ")";
    return g;
  }
  if (n == 1) {
    g.type = "trivial";
    return g;
  }
  // A finite abelian group is determined by d -> #{x : x^d = 1}.
  auto power = [&](int x, std::int64_t d) {
    int y = 0;
    for (std::int64_t e = 0; e < d; ++e) y = t[y][x];
    return y;
  };
  std::vector<std::int64_t> count(n + 1, 0);
  for (std::int64_t d = 1; d <= n; ++d)
    for (int x = 0; x < n; ++x)
      if (power(x, d) == 0) ++count[d];
  std::vector<std::vector<std::int64_t>> lists;
  std::vector<std::int64_t> cur;
  factor_lists(n, 2, cur, lists);
  for (const auto& l : lists) {
    bool match = true;
    for (std::int64_t d = 1; d <= n && match; ++d) {
      std::int64_t c = 1;
      for (std::int64_t f : l) c *= std::gcd(d, f);
      match = c == count[d];
    }
    if (!match) continue;
    g.invariant_factors = l;
    break;
  }
  const auto& f = g.invariant_factors;
  if (f.size() == 1) {
    g.type = "cyclic(" + std::to_string(f[0]) + ")";
  } else if (f == std::vector<std::int64_t>{2, 2}) {
    g.type = "klein-four";
  } else {
    g.type = "abelian(";
    for (std::size_t i = 0; i < f.size(); ++i) {
      g.type += (i ? "," : "") + std::to_string(f[i]);
    }
    g.type += ")";
  }
  return g;
}

Algebra group_algebra(const GroupTable& g, const QuotientClassTable& q,
                      std::string name) {
  const int n = g.order();
  if (q.size() != n) throw Error("group table and quotient differ in size");
  std::vector<BasisElement> elems;
  for (int p = 0; p < n; ++p) {
    const auto& row = g.cayley[p];
    const int inv = static_cast<int>(std::find(row.begin(), row.end(), 0) - row.begin());
    elems.push_back({q.classes[p].label, 1, inv});
  }
  StructureConstants<Integer> c(n);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) c(p, r, g.cayley[p][r]) = 1;
  AlgebraMetadata meta;
  meta.name = std::move(name);
  return Algebra(TableBasis(std::move(elems)), std::move(c), std::move(meta));
}

}  // namespace tabalg
