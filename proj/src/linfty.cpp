#include <linf/linfty.hpp>

namespace linf {

GradedMap linear_coefficient(const Coderivation& q) {
  const GradedSpace& v = q.space();
  Mat m = mat_zero(v.dim(), v.dim());
  for (int i = 0; i < v.dim(); ++i) m.col(i) = q.coeff(1).eval_word(SymWord{{i}});
  return GradedMap(v, v, q.degree(), std::move(m));
}

StructureReport check_coderivation_squares_to_zero(const Coderivation& q) {
  const GradedSpace& v = q.space();
  const int top = q.top_nonzero_arity();
  const int bound = std::min(q.max_arity(), top < 0 ? 0 : 2 * top - 1);
  for (int n = 1; n <= bound; ++n) {
    for (const SymWord& w : enumerate_words(v, n)) {
      WordCombo mid = apply_coderivation(q, w);
      Vec acc = Vec::Zero(v.dim());
      for (const auto& [u, coeff] : mid) {
        if (u.arity() > q.max_arity() || q.arity_is_zero(u.arity())) continue;
        acc += q.coeff(u.arity()).eval_word(u) * coeff;
      }
      if (!acc.isZero(0)) {
        StructureReport r;
        r.ok = false;
        r.arity = n;
        r.word = w;
        r.detail = "Q o Q nonzero on word '" + w.str(v) + "' at arity " + std::to_string(n);
        return r;
      }
    }
  }
  return StructureReport{};
}

LInftyAlgebra::LInftyAlgebra(GradedSpace space, Coderivation q)
    : space_(std::move(space)), q_(std::move(q)) {
  if (!(q_.space() == space_)) throw validation_error("L-infinity algebra: coderivation on wrong space");
  if (q_.degree() != 1) throw validation_error("L-infinity algebra: coderivation must have degree +1");
  if (!q_.arity_is_zero(0)) throw validation_error("L-infinity algebra: curved structures (q0 != 0) rejected");
  StructureReport r = check_coderivation_squares_to_zero(q_);
  if (!r.ok) throw validation_error("L-infinity algebra: " + r.detail);
}

GradedMap LInftyAlgebra::differential() const { return linear_coefficient(q_); }

StructureReport check_structure(const LInftyAlgebra& a) {
  return check_coderivation_squares_to_zero(a.q());
}

MorphismReport check_morphism(const CoalgMorphism& f, const Coderivation& q_source,
                              const Coderivation& r_target) {
  if (!(f.source() == q_source.space()) || !(f.target() == r_target.space()))
    throw validation_error("check_morphism: space mismatch");
  if (f.max_arity() != q_source.max_arity() || f.max_arity() != r_target.max_arity())
    throw validation_error("check_morphism: truncation mismatch");
  const GradedSpace& v = f.source();
  const GradedSpace& w_space = f.target();
  const int cap = f.max_arity();

  int top_f = 0, top_q = q_source.top_nonzero_arity(), top_r = r_target.top_nonzero_arity();
  for (int n = cap; n >= 1; --n)
    if (!f.coeff(n).is_zero()) { top_f = n; break; }
  int bound = 0;
  if (top_f > 0 && top_q >= 0) bound = std::max(bound, top_f + top_q - 1);
  if (top_f > 0 && top_r >= 0) bound = std::min(std::max(bound, top_r * top_f), cap);
  bound = std::min(std::max(bound, 1), cap);

  for (int n = 1; n <= bound; ++n) {
    for (const SymWord& w : enumerate_words(v, n)) {
      Vec lhs = Vec::Zero(w_space.dim());
      for (const auto& [u, coeff] : apply_coderivation(q_source, w))
        if (u.arity() <= cap) lhs += f.coeff(u.arity()).eval_word(u) * coeff;
      Vec rhs = Vec::Zero(w_space.dim());
      for (const auto& [u, coeff] : apply_morphism(f, w))
        if (u.arity() <= cap && !r_target.arity_is_zero(u.arity()))
          rhs += r_target.coeff(u.arity()).eval_word(u) * coeff;
      if (lhs != rhs) {
        MorphismReport r;
        r.ok = false;
        r.arity = n;
        r.word = w;
        r.detail = "F o Q != R o F on word '" + w.str(v) + "' at arity " + std::to_string(n);
        return r;
      }
    }
  }
  return MorphismReport{};
}

MorphismReport check_morphism(const LInftyMorphism& f) {
  return check_morphism(f.map, f.q_source, f.r_target);
}

bool is_weak_equivalence(const LInftyMorphism& f) {
  const GradedSpace& v = f.map.source();
  const GradedSpace& w = f.map.target();
  CohomologyData hv = cohomology(v, linear_coefficient(f.q_source));
  CohomologyData hw = cohomology(w, linear_coefficient(f.r_target));
  GradedMap f1 = f.map.linear_part();
  // induced map on cohomology: g_W o f1 o f_V
  GradedMap ind = compose(hw.project, compose(f1, hv.include));
  if (hv.H.dim() != hw.H.dim()) return false;
  for (int d : hv.H.degrees_present())
    if (hv.H.indices_of_degree(d).size() != hw.H.indices_of_degree(d).size()) return false;
  return rank(ind.matrix()) == hv.H.dim();
}

DGLieAlgebra::DGLieAlgebra(GradedSpace space, GradedMap d)
    : space_(std::move(space)), d_(std::move(d)) {
  if (!(d_.source() == space_) || !(d_.target() == space_) || d_.degree() != 1)
    throw validation_error("DG-Lie algebra: d must be a degree +1 endomorphism");
  Mat sq = d_.matrix() * d_.matrix();
  if (!sq.isZero(0)) throw validation_error("DG-Lie algebra: d^2 != 0");
}

void DGLieAlgebra::set_bracket(int i, int j, Vec value) {
  if (i > j) throw validation_error("set_bracket: use ordered pairs");
  if (value.size() != space_.dim()) throw validation_error("set_bracket: bad value dimension");
  if (i == j && !(space_.degree(i) & 1) && !value.isZero(0))
    throw validation_error("set_bracket: [x,x] must vanish for even x");
  const int out_deg = space_.degree(i) + space_.degree(j);
  for (int t = 0; t < space_.dim(); ++t)
    if (value(t) != 0 && space_.degree(t) != out_deg)
      throw validation_error("set_bracket: bracket entry violates degree 0");
  if (value.isZero(0))
    bracket_.erase({i, j});
  else
    bracket_[{i, j}] = std::move(value);
}

Vec DGLieAlgebra::bracket(int i, int j) const {
  const bool flip = i > j;
  if (flip) std::swap(i, j);
  auto it = bracket_.find({i, j});
  Vec val = (it == bracket_.end()) ? Vec(Vec::Zero(space_.dim())) : it->second;
  if (flip) {
    const int s = (space_.degree(i) * space_.degree(j)) & 1 ? 1 : -1;
    val *= rat(s);  // [y,x] = -(-1)^{|x||y|}[x,y]
  }
  return val;
}

Vec DGLieAlgebra::bracket(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(space_.dim());
  for (int i = 0; i < space_.dim(); ++i) {
    if (x(i) == 0) continue;
    for (int j = 0; j < space_.dim(); ++j) {
      if (y(j) == 0) continue;
      out += bracket(i, j) * (x(i) * y(j));
    }
  }
  return out;
}

void DGLieAlgebra::validate() const {
  const int n = space_.dim();
  // Leibniz: d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec lhs = d_.matrix() * bracket(i, j);
      Vec rhs = bracket(Vec(d_.matrix().col(i)), Vec(Vec::Unit(n, j))) +
                bracket(Vec(Vec::Unit(n, i)), Vec(d_.matrix().col(j))) * rat((space_.degree(i) & 1) ? -1 : 1);
      if (lhs != rhs)
        throw validation_error("DG-Lie algebra: Leibniz fails on (" + space_.name(i) + ", " + space_.name(j) + ")");
    }
  // graded Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec lhs = bracket(Vec(Vec::Unit(n, i)), bracket(j, k));
        Vec rhs = bracket(bracket(i, j), Vec(Vec::Unit(n, k))) +
                  bracket(Vec(Vec::Unit(n, j)), bracket(i, k)) *
                      rat((space_.degree(i) * space_.degree(j)) & 1 ? -1 : 1);
        if (lhs != rhs)
          throw validation_error("DG-Lie algebra: Jacobi fails on (" + space_.name(i) + ", " +
                                 space_.name(j) + ", " + space_.name(k) + ")");
      }
}

LInftyAlgebra from_dgla(const DGLieAlgebra& l, int max_arity) {
  l.validate();
  const GradedSpace& ls = l.space();
  GradedSpace v = shift(ls);
  Coderivation q(v, 1, max_arity);
  // q1 = -d under the desuspension
  for (int i = 0; i < ls.dim(); ++i) {
    Vec col = -l.d().matrix().col(i);
    if (!col.isZero(0)) q.coeff(1).set(SymWord{{i}}, col);
  }
  // q2(x smash y) = (-1)^{|x|} [x,y] on sorted shifted words
  for (int i = 0; i < ls.dim(); ++i)
    for (int j = i; j < ls.dim(); ++j) {
      if (i == j && (v.degree(i) & 1)) continue;  // zero word in the shifted space
      Vec val = l.bracket(i, j) * rat((ls.degree(i) & 1) ? -1 : 1);
      if (!val.isZero(0)) q.coeff(2).set(SymWord{{i, j}}, std::move(val));
    }
  return LInftyAlgebra(v, std::move(q));  // constructor re-checks Q o Q = 0
}

MultiBracket induced_bracket(const LInftyAlgebra& a) {
  const GradedSpace& v = a.space();
  CohomologyData coh = cohomology(v, a.differential());
  MultiBracket r2(coh.H, coh.H, 2, 1);
  for (int i = 0; i < coh.H.dim(); ++i)
    for (int j = i; j < coh.H.dim(); ++j) {
      if (i == j && (coh.H.degree(i) & 1)) continue;
      Vec val = a.q().coeff(2).eval_args({Vec(coh.include.matrix().col(i)), Vec(coh.include.matrix().col(j))});
      val = coh.project.matrix() * val;
      if (!val.isZero(0)) r2.set(SymWord{{i, j}}, std::move(val));
    }
  // Remark-level consistency: the induced bracket is itself a structure.
  Coderivation r(coh.H, 1, std::max(2, a.max_arity()));
  r.coeff(2) = r2;
  StructureReport rep = check_coderivation_squares_to_zero(r);
  if (!rep.ok) throw internal_error("induced_bracket: [r2, r2] != 0: " + rep.detail);
  return r2;
}

LInftyAlgebra product(const LInftyAlgebra& a, const LInftyAlgebra& b) {
  if (a.max_arity() != b.max_arity()) throw validation_error("product: truncation arity mismatch");
  bool collide = false;
  for (int i = 0; i < a.space().dim() && !collide; ++i)
    for (int j = 0; j < b.space().dim(); ++j)
      if (a.space().name(i) == b.space().name(j)) { collide = true; break; }
  const std::string pa = collide ? "l:" : "", pb = collide ? "r:" : "";
  GradedSpace v = direct_sum(a.space(), b.space(), pa, pb);
  const int na = a.space().dim();
  Coderivation q(v, 1, a.max_arity());
  for (int n = 1; n <= a.max_arity(); ++n) {
    for (const auto& [w, val] : a.q().coeff(n).entries()) {
      Vec big = Vec::Zero(v.dim());
      big.head(na) = val;
      q.coeff(n).set(w, std::move(big));
    }
    for (const auto& [w, val] : b.q().coeff(n).entries()) {
      SymWord shifted;
      for (int i : w.letters) shifted.letters.push_back(i + na);
      Vec big = Vec::Zero(v.dim());
      big.tail(b.space().dim()) = val;
      q.coeff(n).set(shifted, std::move(big));
    }
  }
  return LInftyAlgebra(v, std::move(q));
}

}  // namespace linf
