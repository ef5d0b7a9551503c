#include "tabalg/deduction.hpp"

#include "tabalg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace tabalg {

// ---------------------------------------------------------------------------
// PartialTable

PartialTable::PartialTable(TableBasis basis, std::string name)
    : basis_(std::move(basis)), name_(std::move(name)) {}

Element PartialTable::transport(Index i, Index j, const Element& rep_value) const {
  const auto rep = product_orbit_rep(basis_, i, j);
  if (sorted_pair(i, j) == rep) return rep_value;
  Element out = Element::Zero(size());
  for (Index m = 0; m < size(); ++m) out(basis_.dual(m)) = rep_value(m);
  return out;
}

namespace {

Integer element_degree(const TableBasis& b, const Element& x) {
  Integer d(0);
  for (Index m = 0; m < b.size(); ++m) d += x(m) * Integer(b.degree(m));
  return d;
}

void check_index(const TableBasis& b, Index i, Index j) {
  if (i < 0 || j < 0 || i >= b.size() || j >= b.size()) {
    throw MalformedElement("basis index out of range");
  }
}

}  // namespace

void PartialTable::set_known(Index i, Index j, const Element& value) {
  check_index(basis_, i, j);
  if (value.size() != size()) throw MalformedElement("element size mismatch");
  for (Index m = 0; m < size(); ++m) {
    if (value(m) < 0) throw Error("negative coefficient in product");
  }
  const Integer want = Integer(basis_.degree(i)) * Integer(basis_.degree(j));
  if (element_degree(basis_, value) != want) {
    throw Error("product " + basis_.name(i) + "*" + basis_.name(j) +
                " has degree " + element_degree(basis_, value).str() +
                ", expected " + want.str());
  }
  const auto rep = product_orbit_rep(basis_, i, j);
  const Element v = transport(i, j, value);  // transport is an involution
  auto it = known_.find(rep);
  if (it != known_.end() && it->second != v) {
    throw Error("conflicting values for product " + basis_.name(i) + "*" +
                basis_.name(j));
  }
  if (sorted_pair(basis_.dual(i), basis_.dual(j)) == sorted_pair(i, j)) {
    Element c = Element::Zero(size());
    for (Index m = 0; m < size(); ++m) c(basis_.dual(m)) = v(m);
    if (c != v) {
      throw Error("product " + basis_.name(i) + "*" + basis_.name(j) +
                  " must be invariant under the involution");
    }
  }
  known_[rep] = v;
}

void PartialTable::set_pending(Index i, Index j, const Element& lower,
                               std::string remainder) {
  check_index(basis_, i, j);
  if (lower.size() != size()) throw MalformedElement("element size mismatch");
  const Integer want = Integer(basis_.degree(i)) * Integer(basis_.degree(j));
  if (element_degree(basis_, lower) > want) {
    throw Error("lower bound for " + basis_.name(i) + "*" + basis_.name(j) +
                " exceeds the product degree");
  }
  const auto rep = product_orbit_rep(basis_, i, j);
  pending_[rep] = {transport(i, j, lower), std::move(remainder)};
}

bool PartialTable::is_known(Index i, Index j) const {
  return known_.count(product_orbit_rep(basis_, i, j)) != 0;
}

std::optional<Element> PartialTable::known(Index i, Index j) const {
  check_index(basis_, i, j);
  auto it = known_.find(product_orbit_rep(basis_, i, j));
  if (it == known_.end()) return std::nullopt;
  return transport(i, j, it->second);
}

const PendingConstraint* PartialTable::pending(Index i, Index j) const {
  auto it = pending_.find(product_orbit_rep(basis_, i, j));
  return it == pending_.end() ? nullptr : &it->second;
}

std::int64_t PartialTable::remainder_degree(Index i, Index j) const {
  std::int64_t d = basis_.degree(i) * basis_.degree(j);
  if (auto* p = pending(i, j)) {
    Element v = transport(i, j, p->lower);
    d -= static_cast<std::int64_t>(element_degree(basis_, v));
  }
  return d;
}

std::vector<PartialTable::Key> PartialTable::unresolved() const {
  std::vector<Key> out;
  for (Index i = 0; i < size(); ++i)
    for (Index j = i; j < size(); ++j) {
      if (product_orbit_rep(basis_, i, j) != Key{i, j}) continue;
      if (!known_.count({i, j})) out.push_back({i, j});
    }
  return out;
}

std::string_view status_name(DeductionStatus s) {
  switch (s) {
    case DeductionStatus::Completed: return "completed";
    case DeductionStatus::Stalled: return "stalled";
    case DeductionStatus::Contradiction: return "contradiction";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Engine
//
// Unknowns are the coefficients delta(i,j,m). The triple function
// gamma(a,b,c) = delta(a,b,dual c) is invariant under permutations of its
// arguments and under simultaneous dualization, so each orbit of triples is
// one variable with an integer interval [lo, hi].

namespace {

using i64 = std::int64_t;

i64 isqrt_floor(i64 v) {
  if (v <= 0) return 0;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

i64 isqrt_ceil(i64 v) {
  if (v <= 0) return 0;
  i64 r = isqrt_floor(v);
  return r * r == v ? r : r + 1;
}

i64 div_ceil(i64 a, i64 b) { return a <= 0 ? 0 : (a + b - 1) / b; }

struct Layout {
  Index k = 0;
  const TableBasis* basis = nullptr;
  std::vector<int> var;                      // delta position -> variable
  std::vector<std::vector<int>> positions;   // variable -> delta positions
  int nvars = 0;
  std::vector<std::array<Index, 3>> triples; // associativity triples i<=j<=l

  int pos(Index i, Index j, Index m) const { return (i * k + j) * k + m; }
  int v(Index i, Index j, Index m) const { return var[pos(i, j, m)]; }
};

std::shared_ptr<const Layout> make_layout(const TableBasis& b) {
  auto L = std::make_shared<Layout>();
  const Index k = b.size();
  L->k = k;
  L->basis = &b;
  const int n = k * k * k;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int x, int y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  };
  auto g = [&](Index a, Index bb, Index c) { return (a * k + bb) * k + c; };
  for (Index a = 0; a < k; ++a)
    for (Index bb = 0; bb < k; ++bb)
      for (Index c = 0; c < k; ++c) {
        const int t = g(a, bb, c);
        unite(t, g(bb, a, c));
        unite(t, g(a, c, bb));
        unite(t, g(b.dual(a), b.dual(bb), b.dual(c)));
      }
  std::vector<int> id(n, -1);
  L->var.assign(n, -1);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      for (Index m = 0; m < k; ++m) {
        const int root = find(g(i, j, b.dual(m)));
        if (id[root] < 0) id[root] = L->nvars++;
        L->var[L->pos(i, j, m)] = id[root];
      }
  L->positions.resize(L->nvars);
  for (int p = 0; p < n; ++p) L->positions[L->var[p]].push_back(p);
  for (Index i = 0; i < k; ++i)
    for (Index j = i; j < k; ++j)
      for (Index l = j; l < k; ++l) {
        if (i == j && j == l) continue;
        // The dual triple yields the same equations over the same variables.
        std::array<Index, 3> d{b.dual(i), b.dual(j), b.dual(l)};
        std::sort(d.begin(), d.end());
        if (d < std::array<Index, 3>{i, j, l}) continue;
        L->triples.push_back({i, j, l});
      }
  return L;
}

struct Conflict {
  std::string rule;
  std::array<Index, 3> triple{-1, -1, -1};
  std::string detail;
};

class Engine {
 public:
  Engine(std::shared_ptr<const Layout> layout, const PartialTable& seed)
      : L_(std::move(layout)), b_(*L_->basis), k_(L_->k), open_(seed.open_basis()) {
    lo_.assign(L_->nvars, 0);
    hi_.assign(L_->nvars, std::numeric_limits<i64>::max() / 4);
    stamp_.assign(L_->nvars, 0);
    row_stamp_.assign(static_cast<std::size_t>(k_) * k_, 0);
    for (Index i = 0; i < k_; ++i)
      for (Index j = 0; j < k_; ++j)
        for (Index m = 0; m < k_; ++m) {
          const int x = L_->v(i, j, m);
          hi_[x] = std::min(hi_[x], b_.degree(i) * b_.degree(j) / b_.degree(m));
        }
    for (Index j = 0; j < k_; ++j)
      for (Index m = 0; m < k_; ++m) {
        const int x = L_->v(0, j, m);
        lo_[x] = hi_[x] = (j == m) ? 1 : 0;
      }
    logged_.assign(static_cast<std::size_t>(k_) * k_, false);
    for (const auto& [key, val] : seed.known_entries()) {
      for (Index m = 0; m < k_; ++m) {
        seed_set(L_->v(key.first, key.second, m),
                 static_cast<i64>(val(m)), static_cast<i64>(val(m)), key);
      }
      logged_[key.first * k_ + key.second] = true;
    }
    for (const auto& [key, pc] : seed.pending_entries()) {
      for (Index m = 0; m < k_; ++m) {
        const i64 v = static_cast<i64>(pc.lower(m));
        if (v > 0) seed_set(L_->v(key.first, key.second, m), v, hi_[L_->v(key.first, key.second, m)], key);
      }
    }
    for (Index i = 0; i < k_; ++i)
      for (Index j = i; j < k_; ++j)
        if (product_orbit_rep(b_, i, j) == std::make_pair(i, j) &&
            row_complete(i, j)) {
          logged_[i * k_ + j] = true;
        }
    settled_.assign(L_->triples.size() * k_, false);
    eq_epoch_.assign(L_->triples.size() * k_, 0);
  }

  std::optional<Conflict> seed_conflict() const { return seed_conflict_; }

  i64 lo(int x) const { return lo_[x]; }
  i64 hi(int x) const { return hi_[x]; }
  const std::vector<std::pair<int, int>>& orders() const { return orders_; }

  bool row_fixed(Index i, Index j) const {
    for (Index m = 0; m < k_; ++m) {
      const int x = L_->v(i, j, m);
      if (lo_[x] != hi_[x]) return false;
    }
    return true;
  }

  /// All coefficients fixed and, over an open basis, the listed
  /// constituents account for the full degree.
  bool row_complete(Index i, Index j) const {
    return row_fixed(i, j) && (!open_ || row_lo_degree(i, j) == b_.degree(i) * b_.degree(j));
  }

  i64 row_lo_degree(Index i, Index j) const {
    i64 d = 0;
    for (Index m = 0; m < k_; ++m) d += lo_[L_->v(i, j, m)] * b_.degree(m);
    return d;
  }

  Element row_lower(Index i, Index j) const {
    Element e = Element::Zero(k_);
    for (Index m = 0; m < k_; ++m) e(m) = Integer(lo_[L_->v(i, j, m)]);
    return e;
  }

  /// Runs R1-R4 sweeps to a fixed point.
  std::optional<Conflict> run(DeductionTrace& trace, std::size_t max_steps,
                              std::optional<std::uint64_t> shuffle_seed,
                              std::size_t max_sweeps = 0) {
    trace_ = &trace;
    max_steps_ = max_steps;
    std::vector<std::size_t> order(L_->triples.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::pair<Index, Index>> rows;
    for (Index i = 0; i < k_; ++i)
      for (Index j = i; j < k_; ++j)
        if (product_orbit_rep(b_, i, j) == std::make_pair(i, j)) rows.push_back({i, j});
    std::mt19937_64 rng(shuffle_seed.value_or(0));
    bool changed = true;
    for (std::size_t sweep = 0; changed && (max_sweeps == 0 || sweep < max_sweeps);
         ++sweep) {
      changed = false;
      if (shuffle_seed) {
        std::shuffle(order.begin(), order.end(), rng);
        std::shuffle(rows.begin(), rows.end(), rng);
      }
      const std::size_t before = trace.firings;
      for (auto [i, j] : rows) {
        if (auto c = degree_rule(i, j)) return c;
        if (exhausted()) return std::nullopt;
      }
      if (auto c = order_rule()) return c;
      rebuild_candidates();
      for (std::size_t t : order) {
        for (Index n = 0; n < k_; ++n) {
          if (settled_[t * k_ + n]) continue;
          if (auto c = assoc_rule(t, n)) return c;
          if (exhausted()) return std::nullopt;
        }
      }
      changed = trace.firings != before;
    }
    return std::nullopt;
  }

  bool exhausted() const {
    return trace_ && trace_->firings >= max_steps_;
  }

  /// Narrows x to [l, h] as rule `rule`; returns false on an empty interval.
  bool narrow(int x, i64 l, i64 h, const char* rule,
              std::array<Index, 3> triple, int home_pos) {
    l = std::max(l, lo_[x]);
    h = std::min(h, hi_[x]);
    if (l > h) return false;
    if (l == lo_[x] && h == hi_[x]) return true;
    // Past the budget, tightenings are dropped; dropping one is always sound.
    if (exhausted()) return true;
    lo_[x] = l;
    hi_[x] = h;
    stamp_[x] = ++epoch_;
    for (int p : L_->positions[x]) row_stamp_[p / k_] = epoch_;
    if (trace_) ++trace_->firings;
    if (l == h) on_fixed(x, rule, triple, home_pos);
    return true;
  }

  /// Marks the rows of x and y for re-enumeration.
  void add_order(int x, int y) {
    orders_.push_back({x, y});
    for (int z : {x, y}) {
      stamp_[z] = ++epoch_;
      for (int p : L_->positions[z]) row_stamp_[p / k_] = epoch_;
    }
  }

  void set_trace(DeductionTrace* t) { trace_ = t; }
  void set_enum_cap(std::size_t cap) { enum_cap_ = cap; }

  std::vector<std::pair<Index, Index>> unresolved_rows() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < k_; ++i)
      for (Index j = i; j < k_; ++j)
        if (product_orbit_rep(b_, i, j) == std::make_pair(i, j) &&
            !logged_[i * k_ + j]) {
          out.push_back({i, j});
        }
    return out;
  }

  const Layout& layout() const { return *L_; }

 private:
  void seed_set(int x, i64 l, i64 h, std::pair<Index, Index> key) {
    if (std::max(l, lo_[x]) > std::min(h, hi_[x])) {
      if (!seed_conflict_) {
        seed_conflict_ = Conflict{"R2", {key.first, key.second, -1},
                                  "seed products disagree on a shared coefficient of " +
                                      b_.name(key.first) + "*" + b_.name(key.second)};
      }
      return;
    }
    lo_[x] = std::max(l, lo_[x]);
    hi_[x] = std::min(h, hi_[x]);
  }

  void on_fixed(int x, const char* rule, std::array<Index, 3> triple,
                int home_pos) {
    if (!trace_) return;
    const int home_row = home_pos < 0 ? -1 : home_pos / k_;
    for (int p : L_->positions[x]) {
      const Index i = p / (k_ * k_), j = (p / k_) % k_;
      const auto rep = product_orbit_rep(b_, i, j);
      const int r = rep.first * k_ + rep.second;
      if (logged_[r]) continue;
      if (!row_complete(rep.first, rep.second)) continue;
      logged_[r] = true;
      DeductionStep s;
      s.number = trace_->steps.size() + 1;
      bool home = false;
      if (home_row >= 0) {
        const Index hi_i = home_row / k_, hj = home_row % k_;
        home = product_orbit_rep(b_, hi_i, hj) == rep;
      }
      s.rule = home ? rule : "R2";
      s.triple = triple;
      s.i = rep.first;
      s.j = rep.second;
      s.value = row_lower(rep.first, rep.second);
      trace_->steps.push_back(std::move(s));
    }
  }

  std::optional<Conflict> degree_rule(Index i, Index j) {
    // Aggregate repeated variables in the row.
    std::vector<std::pair<int, i64>> terms;
    for (Index m = 0; m < k_; ++m) {
      const int x = L_->v(i, j, m);
      auto it = std::find_if(terms.begin(), terms.end(),
                             [x](const auto& t) { return t.first == x; });
      if (it == terms.end()) {
        terms.push_back({x, b_.degree(m)});
      } else {
        it->second += b_.degree(m);
      }
    }
    const i64 D = b_.degree(i) * b_.degree(j);
    i64 slo = 0, shi = 0;
    for (auto [x, c] : terms) {
      slo += c * lo_[x];
      shi += c * std::min(hi_[x], D);
    }
    const std::array<Index, 3> tr{i, j, -1};
    auto fail = [&] {
      return Conflict{"R1", tr, "degree of " + b_.name(i) + "*" + b_.name(j) +
                                    " cannot equal " + std::to_string(D)};
    };
    if (open_ && slo < D) {
      // Unlisted constituents may absorb the remaining degree.
      if (slo > D) return fail();
      for (auto [x, c] : terms) {
        if (!narrow(x, lo_[x], (D - (slo - c * lo_[x])) / c, "R1", tr, L_->pos(i, j, 0)))
          return fail();
      }
      return std::nullopt;
    }
    if (slo > D || shi < D) return fail();
    for (auto [x, c] : terms) {
      const i64 rest_lo = slo - c * lo_[x];
      const i64 rest_hi = shi - c * std::min(hi_[x], D);
      const i64 h = (D - rest_lo) / c;
      const i64 l = div_ceil(D - rest_hi, c);
      if (!narrow(x, l, h, "R1", tr, L_->pos(i, j, 0))) return fail();
    }
    return enumerate_row(i, j, fail);
  }

  /// Exact solutions of the degree equation of row (i,j), restricted by the
  /// row norm sum_m delta(i,j,m)^2 = sum_m delta(i,di,m) delta(j,dj,m) and by
  /// ordering choices; each variable narrows to its range over solutions.
  template <typename Fail>
  std::optional<Conflict> enumerate_row(Index i, Index j, Fail fail) {
    // The result depends only on rows (i,j), (i,di), (j,dj) and orders among
    // their variables; skip when none of them changed since the last run.
    const std::size_t r = static_cast<std::size_t>(i) * k_ + j;
    if (enum_epoch_.empty()) enum_epoch_.assign(static_cast<std::size_t>(k_) * k_, 0);
    if (enum_epoch_[r] != 0) {
      bool dirty = false;
      for (Index m = 0; m < k_ && !dirty; ++m) {
        dirty = stamp_[L_->v(i, j, m)] > enum_epoch_[r] ||
                stamp_[L_->v(i, b_.dual(i), m)] > enum_epoch_[r] ||
                stamp_[L_->v(j, b_.dual(j), m)] > enum_epoch_[r];
      }
      if (!dirty) return std::nullopt;
    }
    enum_epoch_[r] = ++epoch_;
    struct Term {
      int x;
      i64 deg = 0, mult = 0;
    };
    std::vector<Term> free;
    i64 R = b_.degree(i) * b_.degree(j), fixed_sq = 0;
    for (Index m = 0; m < k_; ++m) {
      const int x = L_->v(i, j, m);
      if (lo_[x] == hi_[x]) {
        R -= lo_[x] * b_.degree(m);
        fixed_sq += lo_[x] * lo_[x];
        continue;
      }
      auto it = std::find_if(free.begin(), free.end(),
                             [x](const Term& t) { return t.x == x; });
      if (it == free.end()) it = free.insert(free.end(), Term{x});
      it->deg += b_.degree(m);
      it->mult += 1;
    }
    if (free.empty()) return std::nullopt;
    const Index di = b_.dual(i), dj = b_.dual(j);
    i64 nlo = 0, nhi = 0;
    for (Index m = 0; m < k_; ++m) {
      const int x = L_->v(i, di, m), y = L_->v(j, dj, m);
      nlo += lo_[x] * lo_[y];
      nhi += std::min(hi_[x], i64{1} << 20) * std::min(hi_[y], i64{1} << 20);
    }
    nlo -= fixed_sq;
    nhi -= fixed_sq;
    std::sort(free.begin(), free.end(),
              [](const Term& a, const Term& b) { return a.deg > b.deg; });
    const std::size_t n = free.size();
    std::vector<std::pair<std::size_t, std::size_t>> ord;  // a >= b
    for (auto [x, y] : orders_) {
      std::size_t a = n, b = n;
      for (std::size_t t = 0; t < n; ++t) {
        if (free[t].x == x) a = t;
        if (free[t].x == y) b = t;
      }
      if (a < n && b < n) ord.push_back({a, b});
    }
    std::vector<i64> val(n), mn(n, std::numeric_limits<i64>::max()), mx(n, -1);
    std::vector<i64> tail_lo(n + 1, 0);  // minimal degree of terms t..n-1
    for (std::size_t t = n; t-- > 0;)
      tail_lo[t] = tail_lo[t + 1] + free[t].deg * lo_[free[t].x];
    std::size_t nodes = 0;
    bool aborted = false;
    const std::size_t cap = enum_cap_;
    auto rec = [&](auto&& self, std::size_t t, i64 rem, i64 sq) -> void {
      if (aborted) return;
      if (++nodes > cap) {
        aborted = true;
        return;
      }
      if (sq > nhi) return;
      if (t == n) {
        if (rem != 0 || sq < nlo) return;
        for (auto [a, b] : ord)
          if (val[a] < val[b]) return;
        for (std::size_t u = 0; u < n; ++u) {
          mn[u] = std::min(mn[u], val[u]);
          mx[u] = std::max(mx[u], val[u]);
        }
        return;
      }
      const auto& f = free[t];
      const i64 top = std::min(hi_[f.x], (rem - tail_lo[t + 1]) / f.deg);
      for (i64 v = lo_[f.x]; v <= top; ++v) {
        val[t] = v;
        self(self, t + 1, rem - v * f.deg, sq + f.mult * v * v);
      }
    };
    rec(rec, 0, R, 0);
    if (aborted) return std::nullopt;
    const std::array<Index, 3> tr{i, j, -1};
    if (mx[0] < 0) return fail();
    for (std::size_t u = 0; u < n; ++u) {
      if (!narrow(free[u].x, mn[u], mx[u], "R1", tr, L_->pos(i, j, 0))) return fail();
    }
    return std::nullopt;
  }

  std::optional<Conflict> order_rule() {
    for (auto [x, y] : orders_) {
      // x >= y
      if (!narrow(x, lo_[y], hi_[x], "R6", {-1, -1, -1}, -1) ||
          !narrow(y, lo_[y], hi_[x], "R6", {-1, -1, -1}, -1)) {
        return Conflict{"R6", {-1, -1, -1}, "ordering choice is infeasible"};
      }
    }
    return std::nullopt;
  }

  void rebuild_candidates() {
    cand_.assign(static_cast<std::size_t>(k_) * k_, {});
    exact_.assign(static_cast<std::size_t>(k_) * k_, true);
    for (Index i = 0; i < k_; ++i)
      for (Index j = 0; j < k_; ++j) {
        if (open_) exact_[i * k_ + j] = row_lo_degree(i, j) == b_.degree(i) * b_.degree(j);
        auto& c = cand_[i * k_ + j];
        for (Index m = 0; m < k_; ++m)
          if (hi_[L_->v(i, j, m)] > 0) c.push_back(m);
      }
  }

  bool is_transfer_shape(const std::array<Index, 3>& t, Index n) const {
    static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perm) {
      if (t[p[0]] == n && b_.dual(t[p[1]]) == t[p[2]]) return true;
    }
    return false;
  }

  struct Side {
    Index a, b, c;  // (b_a b_b) b_c
  };

  std::optional<Conflict> assoc_rule(std::size_t t, Index n) {
    const auto tr = L_->triples[t];
    const Index i = tr[0], j = tr[1], l = tr[2];
    Side sides[3] = {{i, j, l}, {j, l, i}, {i, l, j}};
    int nsides = 3;
    if (i == j) {
      sides[1] = {i, l, i};
      nsides = 2;
    } else if (j == l) {
      sides[1] = {j, j, i};
      nsides = 2;
    }
    // Side (a,b,c) reads rows (a,b) and (n,dc) only.
    const std::size_t eq = t * k_ + n;
    if (eq_epoch_[eq] != 0) {
      bool dirty = false;
      for (int s = 0; s < nsides && !dirty; ++s) {
        const auto& sd = sides[s];
        dirty = row_stamp_[sd.a * k_ + sd.b] > eq_epoch_[eq] ||
                row_stamp_[n * k_ + b_.dual(sd.c)] > eq_epoch_[eq];
      }
      if (!dirty) return std::nullopt;
    }
    eq_epoch_[eq] = ++epoch_;
    i64 slo[3], shi[3];
    bool exact[3];
    bool all_fixed = true;
    for (int s = 0; s < nsides; ++s) {
      slo[s] = shi[s] = 0;
      const auto& sd = sides[s];
      // Over an open basis a side whose first product is not complete has
      // unlisted terms: only its lower bound is usable.
      exact[s] = exact_[sd.a * k_ + sd.b];
      if (!exact[s]) all_fixed = false;
      for (Index m : cand_[sd.a * k_ + sd.b]) {
        const int x = L_->v(sd.a, sd.b, m), y = L_->v(m, sd.c, n);
        slo[s] += lo_[x] * lo_[y];
        shi[s] += hi_[x] * hi_[y];
        if (hi_[y] != 0 && (lo_[x] != hi_[x] || lo_[y] != hi_[y])) all_fixed = false;
      }
    }
    constexpr i64 kInf = std::numeric_limits<i64>::max() / 4;
    i64 L = 0, H = kInf;
    for (int s = 0; s < nsides; ++s) {
      L = std::max(L, slo[s]);
      if (exact[s]) H = std::min(H, shi[s]);
    }
    const char* rule = is_transfer_shape(tr, n) ? "R4" : "R3";
    auto fail = [&] {
      std::ostringstream os;
      os << "coefficient of " << b_.name(n) << ":";
      for (int s = 0; s < nsides; ++s) {
        const auto& sd = sides[s];
        os << (s ? "," : "") << " (" << b_.name(sd.a) << "*" << b_.name(sd.b)
           << ")*" << b_.name(sd.c) << " in [" << slo[s] << ",";
        if (exact[s]) {
          os << shi[s] << "]";
        } else {
          os << "inf)";
        }
      }
      return Conflict{rule, tr, os.str()};
    };
    if (L > H) return fail();
    if (all_fixed) {
      settled_[t * k_ + n] = true;
      return std::nullopt;
    }
    for (int s = 0; s < nsides; ++s) {
      const auto& sd = sides[s];
      for (Index m : cand_[sd.a * k_ + sd.b]) {
        const int x = L_->v(sd.a, sd.b, m), y = L_->v(m, sd.c, n);
        const i64 tl = lo_[x] * lo_[y], th = hi_[x] * hi_[y];
        const i64 Th = H == kInf ? kInf : H - (slo[s] - tl);
        const i64 Tl = exact[s] ? L - (shi[s] - th) : 0;
        if (tl == th && Tl <= tl && tl <= Th) continue;
        if (x == y) {
          if (!narrow(x, isqrt_ceil(Tl), Th < 0 ? -1 : isqrt_floor(Th), rule, tr,
                      L_->pos(sd.a, sd.b, m)))
            return fail();
          continue;
        }
        const i64 ly = lo_[y], hy = hi_[y], lx = lo_[x], hx = hi_[x];
        i64 nhx = hx, nlx = lx, nhy = hy, nly = ly;
        if (Th < 0) return fail();
        if (ly > 0) nhx = Th / ly;
        if (lx > 0) nhy = Th / lx;
        if (Tl > 0) {
          if (hy == 0 || hx == 0) return fail();
          nlx = div_ceil(Tl, hy);
          nly = div_ceil(Tl, hx);
        }
        if (!narrow(x, nlx, nhx, rule, tr, L_->pos(sd.a, sd.b, m))) return fail();
        if (!narrow(y, nly, nhy, rule, tr, L_->pos(m, sd.c, n))) return fail();
      }
    }
    return std::nullopt;
  }

  std::shared_ptr<const Layout> L_;
  const TableBasis& b_;
  Index k_;
  std::vector<i64> lo_, hi_;
  std::vector<std::uint64_t> stamp_, enum_epoch_, row_stamp_, eq_epoch_;
  std::uint64_t epoch_ = 0;
  std::size_t enum_cap_ = 200000;
  std::vector<std::pair<int, int>> orders_;
  std::vector<bool> logged_;
  std::vector<bool> settled_;
  std::vector<std::vector<Index>> cand_;
  std::vector<bool> exact_;
  bool open_ = false;
  std::optional<Conflict> seed_conflict_;
  DeductionTrace* trace_ = nullptr;
  std::size_t max_steps_ = 0;
};

void record_conflict(DeductionTrace& trace, const Conflict& c) {
  trace.status = DeductionStatus::Contradiction;
  trace.witness = c.triple;
  trace.detail = c.rule + ": " + c.detail;
}

PartialTable export_table(const PartialTable& seed, const Engine& e) {
  PartialTable out = seed;
  const Index k = seed.size();
  for (Index i = 0; i < k; ++i)
    for (Index j = i; j < k; ++j) {
      if (product_orbit_rep(seed.basis(), i, j) != std::make_pair(i, j)) continue;
      if (out.is_known(i, j)) continue;
      if (e.row_complete(i, j)) {
        out.set_known(i, j, e.row_lower(i, j));
      } else {
        Element lower = e.row_lower(i, j);
        if (!lower.isZero()) {
          const auto* p = seed.pending(i, j);
          out.set_pending(i, j, lower,
                          p ? p->remainder
                            : "r" + seed.basis().name(i) + seed.basis().name(j));
        }
      }
    }
  return out;
}

void finish(DeductionTrace& trace, const PartialTable& table) {
  trace.unresolved = table.unresolved();
  if (trace.status == DeductionStatus::Contradiction) return;
  trace.status = trace.unresolved.empty() ? DeductionStatus::Completed
                                          : DeductionStatus::Stalled;
}

/// Basis permutations that preserve degrees and duals, generated by swaps
/// of a non-real pair and exchanges of two same-shaped classes.
std::vector<std::vector<Index>> candidate_symmetries(const TableBasis& b) {
  const Index k = b.size();
  std::vector<std::vector<Index>> out;
  std::vector<Index> id(k);
  std::iota(id.begin(), id.end(), 0);
  for (Index x = 1; x < k; ++x) {
    if (b.dual(x) > x) {
      auto s = id;
      std::swap(s[x], s[b.dual(x)]);
      out.push_back(s);
    }
  }
  for (Index x = 1; x < k; ++x) {
    if (b.dual(x) < x) continue;
    for (Index y = x + 1; y < k; ++y) {
      if (b.dual(y) < y || b.degree(x) != b.degree(y)) continue;
      if (b.is_real(x) != b.is_real(y)) continue;
      auto s = id;
      std::swap(s[x], s[y]);
      if (!b.is_real(x)) std::swap(s[b.dual(x)], s[b.dual(y)]);
      out.push_back(s);
      if (!b.is_real(x)) {
        auto t = id;
        t[x] = b.dual(y);
        t[b.dual(y)] = x;
        t[b.dual(x)] = y;
        t[y] = b.dual(x);
        out.push_back(t);
      }
    }
  }
  return out;
}

bool is_symmetry(const Engine& e, const std::vector<Index>& s) {
  const auto& L = e.layout();
  const Index k = L.k;
  std::vector<int> image(L.nvars, -1);
  for (int x = 0; x < L.nvars; ++x) {
    const int p = L.positions[x].front();
    const Index i = p / (k * k), j = (p / k) % k, m = p % k;
    const int y = L.v(s[i], s[j], s[m]);
    if (e.lo(x) != e.lo(y) || e.hi(x) != e.hi(y)) return false;
    image[x] = y;
  }
  for (auto [x, y] : e.orders()) {
    const std::pair<int, int> img{image[x], image[y]};
    if (std::find(e.orders().begin(), e.orders().end(), img) == e.orders().end())
      return false;
  }
  return true;
}

}  // namespace

std::pair<PartialTable, DeductionTrace> propagate(const PartialTable& p,
                                                  const DeductionOptions& opts) {
  DeductionTrace trace;
  auto layout = make_layout(p.basis());
  Engine e(layout, p);
  if (auto c = e.seed_conflict()) {
    record_conflict(trace, *c);
    finish(trace, p);
    return {p, trace};
  }
  auto c = e.run(trace, opts.max_steps, opts.order_seed);
  if (c) record_conflict(trace, *c);
  trace.budget_exhausted = e.exhausted();
  PartialTable out = export_table(p, e);
  finish(trace, out);
  return {std::move(out), std::move(trace)};
}

namespace {

/// R6: under a symmetry of the current state that fixes b_i and b_j, the
/// lower-indexed of two exchanged constituents of b_i b_j takes the larger
/// coefficient.
bool choose_by_symmetry(Engine& e, const std::vector<std::vector<Index>>& syms,
                        DeductionTrace& trace) {
  const auto& L = e.layout();
  const auto rows = e.unresolved_rows();
  for (const auto& s : syms) {
    if (!is_symmetry(e, s)) continue;
    for (auto [i, j] : rows) {
      if (s[i] != i || s[j] != j) continue;
      for (Index m = 0; m < L.k; ++m) {
        if (s[m] <= m) continue;
        const int x = L.v(i, j, m), y = L.v(i, j, s[m]);
        if (x == y || e.lo(x) == e.hi(x)) continue;
        e.add_order(x, y);
        DeductionStep st;
        st.number = trace.steps.size() + 1;
        st.rule = "R6";
        st.triple = {i, j, m};
        st.i = i;
        st.j = j;
        st.value = e.row_lower(i, j);
        st.choice = {m, s[m]};
        trace.steps.push_back(std::move(st));
        return true;
      }
    }
  }
  return false;
}

/// R5: an endpoint of a narrow interval whose assignment propagates to a
/// contradiction is removed. Returns a conflict when both endpoints of a
/// fixed-width-zero remainder fail.
std::optional<Conflict> probe(Engine& e, const DeductionOptions& opts,
                              DeductionTrace& trace, bool& progress,
                              std::size_t& probes) {
  const auto& L = e.layout();
  const auto& b = *L.basis;
  for (auto [i, j] : e.unresolved_rows()) {
    for (Index m = 0; m < L.k; ++m) {
      const int x = L.v(i, j, m);
      if (e.lo(x) == e.hi(x) || e.hi(x) - e.lo(x) > opts.probe_width) continue;
      for (int end = 0; end < 2; ++end) {
        if (probes >= opts.max_probes) return std::nullopt;
        ++probes;
        const i64 val = end == 0 ? e.lo(x) : e.hi(x);
        Engine trial = e;
        DeductionTrace scratch;
        trial.set_trace(&scratch);
        trial.set_enum_cap(4096);
        bool dead = !trial.narrow(x, val, val, "R5", {i, j, m}, -1);
        if (!dead) {
          dead = trial.run(scratch, opts.max_steps, std::nullopt, opts.probe_sweeps)
                     .has_value();
        }
        if (!dead) continue;
        e.set_trace(&trace);
        const i64 l = end == 0 ? val + 1 : e.lo(x);
        const i64 h = end == 0 ? e.hi(x) : val - 1;
        if (!e.narrow(x, l, h, "R5", {i, j, m}, L.pos(i, j, m))) {
          return Conflict{"R5", {i, j, m},
                          "no value of the coefficient of " + b.name(m) + " in " +
                              b.name(i) + "*" + b.name(j) + " survives"};
        }
        progress = true;
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

DeductionTrace complete_or_refute(const PartialTable& p,
                                  const DeductionOptions& opts,
                                  PartialTable* out) {
  DeductionTrace trace;
  auto layout = make_layout(p.basis());
  Engine e(layout, p);
  auto done = [&]() {
    PartialTable t = export_table(p, e);
    trace.budget_exhausted = e.exhausted();
    finish(trace, t);
    if (out) *out = std::move(t);
    return trace;
  };
  if (auto c = e.seed_conflict()) {
    record_conflict(trace, *c);
    return done();
  }
  const auto syms = candidate_symmetries(p.basis());
  std::size_t probes = 0;
  while (true) {
    if (auto c = e.run(trace, opts.max_steps, opts.order_seed)) {
      record_conflict(trace, *c);
      return done();
    }
    if (e.exhausted() || e.unresolved_rows().empty()) return done();
    if (opts.symmetry_choice && choose_by_symmetry(e, syms, trace)) continue;
    if (opts.probing) {
      bool progress = false;
      if (auto c = probe(e, opts, trace, progress, probes)) {
        record_conflict(trace, *c);
        return done();
      }
      if (progress) continue;
    }
    return done();
  }
}

std::string format_trace(const TableBasis& b, const DeductionTrace& t) {
  std::ostringstream os;
  auto nm = [&](Index x) { return x < 0 ? std::string("-") : b.name(x); };
  for (const auto& s : t.steps) {
    os << "STEP " << s.number << " RULE " << s.rule << " TRIPLE "
       << nm(s.triple[0]) << ',' << nm(s.triple[1]) << ',' << nm(s.triple[2]);
    if (s.choice) {
      os << " CHOOSE " << b.name(s.i) << '*' << b.name(s.j) << " coefficient "
         << b.name(s.choice->first) << " >= " << b.name(s.choice->second);
    } else {
      os << " SET " << b.name(s.i) << '*' << b.name(s.j) << " = "
         << format_expression(b, s.value);
    }
    os << '\n';
  }
  os << "STATUS " << status_name(t.status);
  if (t.witness) {
    os << " WITNESS " << nm((*t.witness)[0]) << ',' << nm((*t.witness)[1]) << ','
       << nm((*t.witness)[2]);
  }
  if (!t.detail.empty()) os << " DETAIL " << t.detail;
  if (t.budget_exhausted) os << " BUDGET-EXHAUSTED";
  os << " FIRINGS " << t.firings << " UNRESOLVED " << t.unresolved.size() << '\n';
  return os.str();
}

}  // namespace tabalg
