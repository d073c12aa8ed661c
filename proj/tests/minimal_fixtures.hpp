// Minimal L-infinity[1] structures in degrees {0,1} built from prescribed
// relation series: r_k(e_I) = I! * coeff * eps_j. Squares to zero for degree
// reasons, so any relation tuple is a valid fixture.
#pragma once

#include <linf/kuranishi.hpp>

namespace linf_test {

inline linf::LInftyAlgebra minimal_from_relations(int n, int m,
                                                  const std::vector<linf::TruncatedSeries>& rels,
                                                  int cap) {
  using namespace linf;
  std::vector<std::string> names;
  std::vector<int> degs;
  for (int i = 0; i < n; ++i) {
    names.push_back("e" + std::to_string(i + 1));
    degs.push_back(0);
  }
  for (int j = 0; j < m; ++j) {
    names.push_back("eps" + std::to_string(j + 1));
    degs.push_back(1);
  }
  GradedSpace h(names, degs);
  Coderivation r(h, 1, cap);
  for (int j = 0; j < m; ++j) {
    for (const auto& [idx, c] : rels[j].coeffs()) {
      const int deg = total_degree(idx);
      if (deg < 2 || deg > cap) continue;
      SymWord w;
      for (int v = 0; v < n; ++v)
        for (int e = 0; e < idx[v]; ++e) w.letters.push_back(v);
      Rational fact(1);
      for (int e : idx)
        for (int t = 2; t <= e; ++t) fact *= t;
      Vec val = r.coeff(deg).eval_word(w);
      val(n + j) += c * fact;
      r.coeff(deg).set(w, std::move(val));
    }
  }
  return LInftyAlgebra(h, std::move(r));
}

inline linf::TruncatedSeries series_of(int nvars, int order,
                                       const std::vector<std::pair<std::vector<int>, linf::Rational>>& terms) {
  linf::TruncatedSeries s(nvars, order);
  for (const auto& [idx, c] : terms) s.add_coeff(idx, c);
  return s;
}

}  // namespace linf_test
