// Randomized valid DG-Lie algebras: a Lie algebra tensored with a small CDGA
// (Jacobi and Leibniz hold by construction), then scrambled by a random
// degree-preserving change of basis.
#pragma once

#include <linf/linfty.hpp>

#include "test_util.hpp"

namespace linf_test {

struct LieAlgebra {
  int dim;
  // structure constants c[i][j] as columns; antisymmetric, Jacobi holds
  std::vector<std::vector<linf::Vec>> c;
};

inline LieAlgebra lie_abelian(int n) {
  LieAlgebra g{n, {}};
  g.c.assign(n, std::vector<linf::Vec>(n, linf::Vec::Zero(n)));
  return g;
}

inline LieAlgebra lie_solvable2() {
  LieAlgebra g = lie_abelian(2);  // [x,y] = y
  g.c[0][1](1) = 1;
  g.c[1][0](1) = -1;
  return g;
}

inline LieAlgebra lie_sl2() {
  LieAlgebra g = lie_abelian(3);  // h, e, f
  g.c[0][1](1) = 2;
  g.c[1][0](1) = -2;
  g.c[0][2](2) = -2;
  g.c[2][0](2) = 2;
  g.c[1][2](0) = 1;
  g.c[2][1](0) = -1;
  return g;
}

inline LieAlgebra lie_heisenberg() {
  LieAlgebra g = lie_abelian(3);  // [x,y] = z
  g.c[0][1](2) = 1;
  g.c[1][0](2) = -1;
  return g;
}

struct SmallCdga {
  int dim;
  std::vector<int> deg;
  std::vector<std::vector<linf::Vec>> mult;  // graded-commutative, associative
  linf::Mat d;                               // degree +1 derivation, d^2 = 0
};

// the ground field alone
inline SmallCdga cdga_point() {
  SmallCdga a{1, {0}, {}, linf::mat_zero(1, 1)};
  a.mult.assign(1, std::vector<linf::Vec>(1, linf::Vec::Zero(1)));
  a.mult[0][0](0) = 1;
  return a;
}

// 1, u (degree 0), v (degree 1), du = v; u^2 = 0, uv = 0
inline SmallCdga cdga_acyclic() {
  SmallCdga a{3, {0, 0, 1}, {}, linf::mat_zero(3, 3)};
  a.mult.assign(3, std::vector<linf::Vec>(3, linf::Vec::Zero(3)));
  auto set = [&](int i, int j, int t, long c) {
    a.mult[i][j](t) = linf::rat(c);
    a.mult[j][i](t) = ((a.deg[i] & 1) && (a.deg[j] & 1)) ? linf::rat(-c) : linf::rat(c);
  };
  set(0, 0, 0, 1);
  set(0, 1, 1, 1);
  set(0, 2, 2, 1);
  a.d(2, 1) = 1;
  return a;
}

// exterior algebra on one odd generator: 1, xi (degree 1)
inline SmallCdga cdga_exterior1() {
  SmallCdga a{2, {0, 1}, {}, linf::mat_zero(2, 2)};
  a.mult.assign(2, std::vector<linf::Vec>(2, linf::Vec::Zero(2)));
  a.mult[0][0](0) = 1;
  a.mult[0][1](1) = 1;
  a.mult[1][0](1) = 1;
  return a;
}

inline linf::DGLieAlgebra tensor_dgla(const LieAlgebra& g, const SmallCdga& a) {
  using namespace linf;
  const int n = g.dim * a.dim;
  std::vector<std::string> names;
  std::vector<int> degs;
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      names.push_back("t" + std::to_string(i) + "_" + std::to_string(j));
      degs.push_back(a.deg[j]);
    }
  GradedSpace space(names, degs);
  auto idx = [&](int i, int j) { return i * a.dim + j; };
  Mat d = mat_zero(n, n);
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      for (int j2 = 0; j2 < a.dim; ++j2)
        if (a.d(j2, j) != 0) d(idx(i, j2), idx(i, j)) = a.d(j2, j);
  DGLieAlgebra l(space, GradedMap(space, space, 1, d));
  // [g (x) u, h (x) w] = [g,h] (x) uw   (the Lie factor sits in degree 0)
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      for (int i2 = 0; i2 < g.dim; ++i2)
        for (int j2 = 0; j2 < a.dim; ++j2) {
          const int p = idx(i, j), q = idx(i2, j2);
          if (p > q) continue;
          Vec val = Vec::Zero(n);
          for (int t = 0; t < g.dim; ++t) {
            if (g.c[i][i2](t) == 0) continue;
            for (int u = 0; u < a.dim; ++u)
              if (a.mult[j][j2](u) != 0) val(idx(t, u)) += g.c[i][i2](t) * a.mult[j][j2](u);
          }
          if (p == q && !(space.degree(p) & 1)) continue;  // even diagonal must vanish
          if (!val.isZero(0)) l.set_bracket(p, q, val);
        }
  return l;
}

// scramble by a random degree-preserving change of basis
inline linf::DGLieAlgebra scramble(Rng& rng, const linf::DGLieAlgebra& l) {
  using namespace linf;
  const GradedSpace& v = l.space();
  const int n = v.dim();
  Mat s = mat_identity(n);
  for (int rep = 0; rep < 2 * n; ++rep) {
    const int i = rng.uniform(0, n - 1), j = rng.uniform(0, n - 1);
    if (i == j || v.degree(i) != v.degree(j)) continue;
    s.col(i) += s.col(j) * rng.rational(2, 2);
  }
  Mat sinv = *solve_consistent(s, mat_identity(n));
  DGLieAlgebra out(v, GradedMap(v, v, 1, Mat(sinv * l.d().matrix() * s)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j && !(v.degree(i) & 1)) continue;
      Vec val = sinv * l.bracket(Vec(s.col(i)), Vec(s.col(j)));
      if (!val.isZero(0)) out.set_bracket(i, j, val);
    }
  return out;
}

// dim <= 6, validated by construction
inline linf::DGLieAlgebra random_dgla(Rng& rng) {
  const int pick_g = rng.uniform(0, 3);
  LieAlgebra g = pick_g == 0   ? lie_abelian(rng.uniform(1, 2))
                 : pick_g == 1 ? lie_solvable2()
                 : pick_g == 2 ? lie_sl2()
                               : lie_heisenberg();
  const int pick_a = rng.uniform(0, 2);
  SmallCdga a = pick_a == 0 ? cdga_point() : pick_a == 1 ? cdga_acyclic() : cdga_exterior1();
  if (g.dim * a.dim > 6) a = cdga_exterior1();
  if (g.dim * a.dim > 6) a = cdga_point();
  return scramble(rng, tensor_dgla(g, a));
}

}  // namespace linf_test
