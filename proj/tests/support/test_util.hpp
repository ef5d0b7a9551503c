#pragma once

#include "group_oracle.hpp"

#include "tabalg/algebra.hpp"
#include "tabalg/corpus.hpp"

#include <string>
#include <vector>

namespace testutil {

inline std::string data_path(const std::string& rel) {
  return std::string(TABALG_TEST_DATA) + "/" + rel;
}

inline tabalg::Algebra load(const std::string& rel) {
  return tabalg::parse_algebra(tabalg::read_file(data_path(rel)));
}

/// Class algebra of g built from the oracle tensor; names are supplied in
/// class order.
inline tabalg::Algebra oracle_algebra(const oracle::Group& g,
                                      const std::vector<std::string>& names,
                                      const std::string& name) {
  using namespace tabalg;
  const auto cls = oracle::classes(g);
  const auto t = oracle::class_tensor(g);
  const Index k = static_cast<Index>(cls.size());
  std::vector<BasisElement> elems;
  for (Index c = 0; c < k; ++c) {
    const int inv = oracle::inverse(g, cls[c].front());
    Index d = 0;
    for (Index e = 0; e < k; ++e)
      for (int x : cls[e])
        if (x == inv) d = e;
    elems.push_back({names[c], static_cast<std::int64_t>(cls[c].size()), d});
  }
  StructureConstants<Integer> s(k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      for (Index m = 0; m < k; ++m) s(i, j, m) = t[i][j][m];
  AlgebraMetadata meta;
  meta.name = name;
  return Algebra(TableBasis(std::move(elems)), std::move(s), std::move(meta));
}

inline tabalg::Element expr(const tabalg::Algebra& a, const std::string& text) {
  return tabalg::parse_expression(a.basis(), text);
}

}  // namespace testutil
