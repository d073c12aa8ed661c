#include <linf/equivariant.hpp>

#include <set>

namespace linf {

int FiniteGroup::inverse(int a) const {
  for (int b = 0; b < size(); ++b)
    if (mul(a, b) == identity) return b;
  throw validation_error("group: element '" + elements.at(a) + "' has no inverse");
}

void FiniteGroup::validate() {
  const int n = size();
  if (n == 0) throw validation_error("group: empty element list");
  if (static_cast<int>(table.size()) != n) throw validation_error("group: table has wrong row count");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw validation_error("group: table has wrong column count");
    for (int x : row)
      if (x < 0 || x >= n) throw validation_error("group: table entry out of range");
  }
  identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n; ++a) ok = ok && mul(e, a) == a && mul(a, e) == a;
    if (ok) { identity = e; break; }
  }
  if (identity < 0) throw validation_error("group: no identity element");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw validation_error("group: table not associative");
  for (int a = 0; a < n; ++a) inverse(a);  // throws if missing
  if (generators.empty())
    for (int a = 0; a < n; ++a) generators.push_back(a);
  std::set<int> gen(generators.begin(), generators.end());
  std::set<int> closure{identity};
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<int> next = closure;
    for (int a : closure)
      for (int g : gen)
        if (next.insert(mul(a, g)).second) grew = true;
    closure = next;
  }
  if (static_cast<int>(closure.size()) != n) throw validation_error("group: generators do not generate");
}

std::vector<int> FiniteGroup::class_of_element() const {
  const int n = size();
  std::vector<int> cls(n, -1);
  int next = 0;
  for (int a = 0; a < n; ++a) {
    if (cls[a] >= 0) continue;
    for (int g = 0; g < n; ++g) {
      const int b = mul(mul(g, a), inverse(g));
      cls[b] = next;
    }
    ++next;
  }
  return cls;
}

void CharacterTable::validate(const FiniteGroup& g) const {
  const int n = g.size();
  if (labels.empty()) throw validation_error("characters: no rows");
  if (values.rows() != static_cast<Eigen::Index>(labels.size()) || values.cols() != n)
    throw validation_error("characters: table shape mismatch");
  const auto cls = g.class_of_element();
  for (size_t r = 0; r < labels.size(); ++r) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (cls[a] == cls[b] && values(static_cast<Eigen::Index>(r), a) != values(static_cast<Eigen::Index>(r), b))
          throw validation_error("characters: '" + labels[r] + "' is not a class function");
    if (values(static_cast<Eigen::Index>(r), g.identity) <= 0)
      throw validation_error("characters: '" + labels[r] + "' has nonpositive dimension");
  }
  for (size_t r = 0; r < labels.size(); ++r)
    for (size_t s = 0; s < labels.size(); ++s) {
      Rational inner(0);
      for (int a = 0; a < n; ++a)
        inner += values(static_cast<Eigen::Index>(r), a) * values(static_cast<Eigen::Index>(s), g.inverse(a));
      inner /= n;
      if (r != s && inner != 0)
        throw validation_error("characters: rows '" + labels[r] + "' and '" + labels[s] + "' not orthogonal");
      if (r == s && (inner <= 0 || !is_integer(inner)))
        throw validation_error("characters: row '" + labels[r] + "' has non-integral self-pairing");
    }
}

void GroupAction::validate() const {
  const int n = group.size();
  if (static_cast<int>(rho.size()) != n) throw validation_error("action: one matrix per element required");
  for (int a = 0; a < n; ++a) {
    const Mat& m = rho[a];
    if (m.rows() != space.dim() || m.cols() != space.dim())
      throw validation_error("action: matrix shape mismatch for '" + group.elements[a] + "'");
    for (int i = 0; i < space.dim(); ++i)
      for (int j = 0; j < space.dim(); ++j)
        if (m(i, j) != 0 && space.degree(i) != space.degree(j))
          throw validation_error("action: '" + group.elements[a] + "' does not preserve degree");
  }
  if (!(rho[group.identity] == mat_identity(space.dim())))
    throw validation_error("action: identity element must act as the identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!(rho[a] * rho[b] == rho[group.mul(a, b)]))
        throw validation_error("action: not a homomorphism at ('" + group.elements[a] + "','" +
                               group.elements[b] + "')");
  if (characters) characters->validate(group);
}

GroupAction trivial_action(const GradedSpace& v) {
  GroupAction a;
  a.group.elements = {"e"};
  a.group.table = {{0}};
  a.group.generators = {0};
  a.group.validate();
  a.space = v;
  a.rho = {mat_identity(v.dim())};
  CharacterTable t;
  t.labels = {"triv"};
  t.values = mat_identity(1);
  a.characters = t;
  return a;
}

GradedMap reynolds_average(const GroupAction& a, const GradedMap& m) {
  if (!(m.source() == a.space) || !(m.target() == a.space))
    throw validation_error("reynolds: endomorphism of the acted space required");
  Mat acc = mat_zero(a.space.dim(), a.space.dim());
  for (int g = 0; g < a.group.size(); ++g) acc += a.act(g) * m.matrix() * a.act_inverse(g);
  return GradedMap(a.space, a.space, m.degree(), acc / Rational(a.group.size()));
}

MultiBracket reynolds_average(const GroupAction& a, const MultiBracket& q) {
  if (!(q.source() == a.space) || !(q.target() == a.space))
    throw validation_error("reynolds: bracket on the acted space required");
  MultiBracket out(q.source(), q.target(), q.arity(), q.degree());
  const Rational inv_n = Rational(1) / Rational(a.group.size());
  for (const SymWord& w : enumerate_words(a.space, q.arity())) {
    Vec acc = Vec::Zero(a.space.dim());
    for (int g = 0; g < a.group.size(); ++g) {
      std::vector<Vec> args;
      args.reserve(w.arity());
      const Mat gi = a.act_inverse(g);
      for (int l : w.letters) args.push_back(Vec(gi.col(l)));
      acc += a.act(g) * q.eval_args(args);
    }
    acc *= inv_n;
    if (!acc.isZero(0)) out.set(w, std::move(acc));
  }
  return out;
}

bool is_equivariant(const GroupAction& a, const GradedMap& m) {
  for (int g : a.group.generators)
    if (!(a.act(g) * m.matrix() == m.matrix() * a.act(g))) return false;
  return true;
}

bool is_equivariant(const GroupAction& a, const MultiBracket& q) {
  for (int g : a.group.generators) {
    const Mat& gm = a.act(g);
    for (const SymWord& w : enumerate_words(a.space, q.arity())) {
      std::vector<Vec> args;
      args.reserve(w.arity());
      for (int l : w.letters) args.push_back(Vec(gm.col(l)));
      if (!(q.eval_args(args) == gm * q.eval_word(w))) return false;
    }
  }
  return true;
}

bool is_equivariant(const GroupAction& a, const Coderivation& q) {
  for (int n = 0; n <= q.max_arity(); ++n)
    if (!q.arity_is_zero(n) && !is_equivariant(a, q.coeff(n))) return false;
  return true;
}

bool is_equivariant_morphism(const GroupAction& a, const GroupAction& b, const CoalgMorphism& f) {
  if (!(f.source() == a.space) || !(f.target() == b.space))
    throw validation_error("equivariance check: morphism spaces mismatch");
  for (int n = 1; n <= f.max_arity(); ++n) {
    if (f.coeff(n).is_zero()) continue;
    for (int g : a.group.generators) {
      const Mat& gm = a.act(g);
      const Mat& gt = b.act(g);
      for (const SymWord& w : enumerate_words(a.space, n)) {
        std::vector<Vec> args;
        for (int l : w.letters) args.push_back(Vec(gm.col(l)));
        if (!(f.coeff(n).eval_args(args) == gt * f.coeff(n).eval_word(w))) return false;
      }
    }
  }
  return true;
}

std::vector<IsotypicComponent> isotypic_decomposition(const GroupAction& a) {
  if (!a.characters) throw validation_error("isotypic decomposition: character table required");
  a.characters->validate(a.group);
  const int n = a.group.size();
  std::vector<IsotypicComponent> out;
  Mat total = mat_zero(a.space.dim(), a.space.dim());
  std::vector<Mat> idems;
  for (size_t r = 0; r < a.characters->labels.size(); ++r) {
    Rational self(0);
    for (int g = 0; g < n; ++g)
      self += a.characters->values(static_cast<Eigen::Index>(r), g) *
              a.characters->values(static_cast<Eigen::Index>(r), a.group.inverse(g));
    self /= n;
    Mat e = mat_zero(a.space.dim(), a.space.dim());
    for (int g = 0; g < n; ++g)
      e += a.act(g) * (a.characters->values(static_cast<Eigen::Index>(r), a.group.inverse(g)));
    e *= a.characters->values(static_cast<Eigen::Index>(r), a.group.identity) / (self * n);
    if (!((e * e) == e))
      throw validation_error("isotypic decomposition: idempotent check failed for '" +
                             a.characters->labels[r] + "'");
    total += e;
    idems.push_back(e);
    out.push_back(IsotypicComponent{a.characters->labels[r], image_basis(e)});
  }
  if (!(total == mat_identity(a.space.dim())))
    throw validation_error("isotypic decomposition: idempotents do not sum to the identity "
                           "(character table incomplete for this action)");
  for (size_t i = 0; i < idems.size(); ++i)
    for (size_t j = i + 1; j < idems.size(); ++j)
      if (!(idems[i] * idems[j]).isZero(0))
        throw validation_error("isotypic decomposition: idempotents not orthogonal");
  return out;
}

std::vector<std::string> support(const GroupAction& a) {
  std::vector<std::string> out;
  for (const auto& c : isotypic_decomposition(a))
    if (c.basis.cols() > 0) out.push_back(c.label);
  return out;
}

GroupAction restrict_action(const GroupAction& a, const GradedSpace& sub, const Mat& basis) {
  GroupAction out;
  out.group = a.group;
  out.space = sub;
  out.characters = a.characters;
  for (int g = 0; g < a.group.size(); ++g) out.rho.push_back(coordinates_in(basis, Mat(a.act(g) * basis)));
  out.validate();
  return out;
}

std::pair<GroupAction, Mat> quotient_action(const GroupAction& a, const Mat& u) {
  Mat comp = extend_basis(u.cols() ? u : mat_zero(a.space.dim(), 0), mat_identity(a.space.dim()));
  std::vector<std::string> names;
  std::vector<int> degs;
  for (Eigen::Index j = 0; j < comp.cols(); ++j) {
    int lead = -1;
    for (int i = 0; i < a.space.dim(); ++i)
      if (comp(i, j) != 0) { lead = i; break; }
    names.push_back("q" + std::to_string(j + 1));
    degs.push_back(a.space.degree(lead));
  }
  GradedSpace qspace(names, degs);
  Mat full(a.space.dim(), u.cols() + comp.cols());
  if (u.cols()) full.leftCols(u.cols()) = u;
  full.rightCols(comp.cols()) = comp;
  GroupAction out;
  out.group = a.group;
  out.space = qspace;
  out.characters = a.characters;
  for (int g = 0; g < a.group.size(); ++g) {
    Mat coords = coordinates_in(full, Mat(a.act(g) * comp));
    out.rho.push_back(Mat(coords.bottomRows(comp.cols())));
  }
  out.validate();
  return {out, comp};
}

void EquivariantLInfty::validate() const {
  action.validate();
  if (!(action.space == algebra.space())) throw validation_error("equivariant algebra: action on wrong space");
  if (!is_equivariant(action, algebra.q()))
    throw validation_error("equivariant algebra: Taylor coefficients are not equivariant");
}

namespace {

// Invariant complement of `sub` (columns, coords of an invariant subspace of
// `within`-columns) inside the span of `within`: averaged projector kernel.
// All matrices are in the coordinates of the `within` columns.
Mat invariant_complement(const std::vector<Mat>& action_in_within, const Mat& sub_coords) {
  const Eigen::Index nz = action_in_within.empty() ? 0 : action_in_within[0].rows();
  if (sub_coords.cols() == 0) return mat_identity(nz);
  // deterministic projector onto sub along the lexicographic complement
  Mat det_comp = extend_basis(sub_coords, mat_identity(nz));
  Mat basis(nz, sub_coords.cols() + det_comp.cols());
  basis.leftCols(sub_coords.cols()) = sub_coords;
  basis.rightCols(det_comp.cols()) = det_comp;
  Mat coords = coordinates_in(basis, mat_identity(nz));
  Mat proj = sub_coords * coords.topRows(sub_coords.cols());
  Mat avg = mat_zero(nz, nz);
  for (const Mat& x : action_in_within) {
    Mat xinv = *solve_consistent(x, mat_identity(nz));
    avg += x * proj * xinv;
  }
  avg /= Rational(static_cast<long>(action_in_within.size()));
  if (!((avg * avg) == avg)) throw internal_error("invariant complement: averaged projector not idempotent");
  return kernel_basis(avg);
}

}  // namespace

EquivariantMinimalModel equivariant_minimal_model(const EquivariantLInfty& a) {
  a.validate();
  const GradedSpace& v = a.algebra.space();
  const GradedMap q1 = a.algebra.differential();
  CohomologyData det = cohomology(v, q1);

  std::map<int, HodgeSplit> split;
  for (int deg : v.degrees_present()) {
    const auto idx = v.indices_of_degree(deg);
    const int n = static_cast<int>(idx.size());
    const auto& sp = det.split.at(deg);
    // slice action
    std::vector<Mat> slice;
    for (int g = 0; g < a.action.group.size(); ++g) {
      Mat m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = a.action.act(g)(idx[i], idx[j]);
      slice.push_back(std::move(m));
    }
    // invariant complement of B inside Z
    Mat z(n, sp.B.cols() + sp.H.cols());
    if (sp.B.cols()) z.leftCols(sp.B.cols()) = sp.B;
    if (sp.H.cols()) z.rightCols(sp.H.cols()) = sp.H;
    std::vector<Mat> action_on_z;
    for (const Mat& m : slice) action_on_z.push_back(coordinates_in(z, Mat(m * z)));
    Mat b_in_z = mat_zero(z.cols(), sp.B.cols());
    for (Eigen::Index j = 0; j < sp.B.cols(); ++j) b_in_z(j, j) = 1;
    Mat h_inv = z * invariant_complement(action_on_z, b_in_z);
    // invariant complement of Z inside the slice
    std::vector<Mat> action_on_slice = slice;
    Mat z_in_slice = z;
    Mat w_inv = invariant_complement(action_on_slice, z_in_slice);
    split[deg] = HodgeSplit{sp.B, h_inv, w_inv};
  }

  CohomologyData coh = assemble_cohomology_data(v, std::move(split));
  MinimalModelResult mm = minimal_model_with_split(a.algebra, coh);

  // induced action on H
  GroupAction h_action;
  h_action.group = a.action.group;
  h_action.space = mm.model.space();
  h_action.characters = a.action.characters;
  for (int g = 0; g < a.action.group.size(); ++g)
    h_action.rho.push_back(coh.project.matrix() * a.action.act(g) * coh.include.matrix());
  h_action.validate();

  if (!is_equivariant(h_action, mm.model.q()))
    throw internal_error("equivariant minimal model: transferred structure not equivariant");
  if (!is_equivariant_morphism(h_action, a.action, mm.into_big.map))
    throw internal_error("equivariant minimal model: inclusion morphism not equivariant");
  if (!is_equivariant_morphism(a.action, h_action, mm.onto_small.map))
    throw internal_error("equivariant minimal model: projection morphism not equivariant");

  return EquivariantMinimalModel{std::move(mm), std::move(h_action)};
}

FormalityCertificate equivariant_formality(const LInftyAlgebra& minimal, const GroupAction& h_action) {
  h_action.validate();
  if (!(h_action.space == minimal.space()))
    throw validation_error("equivariant formality: action on wrong space");
  if (!is_equivariant(h_action, minimal.q()))
    throw validation_error("equivariant formality: structure not equivariant");
  const GradedSpace& h = minimal.space();
  const int cap = minimal.max_arity();

  FormalityCertificate cert;
  cert.iso = CoalgMorphism::identity(h, cap);
  Coderivation cur = minimal.q();

  for (int k = 3; k <= cap; ++k) {
    if (cur.arity_is_zero(k)) continue;
    GaugeStep step = gauge_step(cur, k);
    if (!step.solvable) {
      cert.formal = false;
      cert.obstruction_arity = k;
      cert.obstruction = step.obstruction;
      cert.target = quadratic_target(minimal);
      return cert;
    }
    MultiBracket alpha = reynolds_average(h_action, step.alpha);
    if (!is_equivariant(h_action, alpha))
      throw internal_error("equivariant gauge: averaged gauge not equivariant");
    Coderivation ac(h, 0, cap);
    ac.coeff(k - 1) = alpha;
    Coderivation conj = conjugate(cur, ac);
    for (int j = 3; j <= k; ++j)
      if (!conj.arity_is_zero(j))
        throw internal_error("equivariant gauge: averaged gauge fails to kill arity " + std::to_string(j));
    cur = std::move(conj);
    cert.gauges.push_back(alpha);
    cert.iso = compose(exponential(ac), cert.iso);
  }

  cert.formal = true;
  cert.target = cur;
  MorphismReport rep = check_morphism(cert.iso, minimal.q(), cert.target);
  if (!rep.ok) throw internal_error("equivariant formality: certificate failed: " + rep.detail);
  if (!is_equivariant_morphism(h_action, h_action, cert.iso))
    throw internal_error("equivariant formality: certificate not equivariant");
  return cert;
}

KMResult build_K_M(const DGLieAlgebra& l, const GroupAction& action, const GradedMap& iota) {
  l.validate();
  action.validate();
  if (!(action.space == l.space())) throw validation_error("build_K_M: action on wrong space");
  for (int g : action.group.generators) {
    // the action must be by DG-Lie automorphisms
    const Mat& gm = action.act(g);
    if (!(gm * l.d().matrix() == l.d().matrix() * gm))
      throw validation_error("build_K_M: action does not commute with d");
    for (int i = 0; i < l.space().dim(); ++i)
      for (int j = 0; j < l.space().dim(); ++j)
        if (!(l.bracket(Vec(gm.col(i)), Vec(gm.col(j))) == gm * l.bracket(i, j)))
          throw validation_error("build_K_M: action is not by Lie automorphisms");
  }

  const GradedSpace& ls = l.space();
  CohomologyData coh = cohomology(ls, l.d());
  for (int i = 0; i < coh.H.dim(); ++i)
    if (coh.H.degree(i) < 0) throw validation_error("build_K_M: nonzero cohomology in negative degree");

  // iota: a Lie section of Z^0 -> H^0
  const GradedSpace& gs = iota.source();
  for (int i = 0; i < gs.dim(); ++i)
    if (gs.degree(i) != 0) throw validation_error("build_K_M: iota source must sit in degree 0");
  if (iota.degree() != 0 || !(iota.target() == ls)) throw validation_error("build_K_M: iota must land in L, degree 0");
  if (!(l.d().matrix() * iota.matrix()).isZero(0))
    throw validation_error("build_K_M: iota does not land in cocycles");
  {
    const auto h0 = coh.H.indices_of_degree(0);
    Mat classes(static_cast<Eigen::Index>(h0.size()), gs.dim());
    Mat proj = coh.project.matrix() * iota.matrix();
    for (size_t i = 0; i < h0.size(); ++i) classes.row(static_cast<Eigen::Index>(i)) = proj.row(h0[i]);
    if (gs.dim() != static_cast<int>(h0.size()) || rank(classes) != gs.dim())
      throw validation_error("build_K_M: iota is not a section of Z^0 -> H^0");
  }
  for (int i = 0; i < gs.dim(); ++i)
    for (int j = 0; j < gs.dim(); ++j) {
      Vec br = l.bracket(Vec(iota.matrix().col(i)), Vec(iota.matrix().col(j)));
      if (!solve_consistent(iota.matrix(), Mat(br))) throw validation_error("build_K_M: iota image not closed under bracket");
    }
  for (int g : action.group.generators)
    if (!solve_consistent(iota.matrix(), Mat(action.act(g) * iota.matrix())))
      throw validation_error("build_K_M: iota image not G-invariant");

  // K^1: invariant complement of B^1 inside the degree-1 slice
  const auto idx1 = ls.indices_of_degree(1);
  Mat k1_full(ls.dim(), 0);
  if (!idx1.empty()) {
    const int n = static_cast<int>(idx1.size());
    std::vector<Mat> slice;
    for (int g = 0; g < action.group.size(); ++g) {
      Mat m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = action.act(g)(idx1[i], idx1[j]);
      slice.push_back(std::move(m));
    }
    const Mat& b1 = coh.split.at(1).B;
    Mat k1 = invariant_complement(slice, b1);
    k1_full = mat_zero(ls.dim(), k1.cols());
    for (int i = 0; i < n; ++i) k1_full.row(idx1[i]) = k1.row(i);
  }

  // K = K^1 + everything in degrees >= 2
  std::vector<std::string> knames;
  std::vector<int> kdegs;
  std::vector<Vec> kcols;
  for (Eigen::Index j = 0; j < k1_full.cols(); ++j) {
    knames.push_back("k" + std::to_string(kcols.size() + 1));
    kdegs.push_back(1);
    kcols.push_back(k1_full.col(j));
  }
  for (int i = 0; i < ls.dim(); ++i)
    if (ls.degree(i) >= 2) {
      knames.push_back("k" + std::to_string(kcols.size() + 1));
      kdegs.push_back(ls.degree(i));
      kcols.push_back(Vec(Vec::Unit(ls.dim(), i)));
    }
  GradedSpace kspace(knames, kdegs);
  Mat kmat = mat_zero(ls.dim(), kspace.dim());
  for (size_t j = 0; j < kcols.size(); ++j) kmat.col(static_cast<Eigen::Index>(j)) = kcols[j];
  GradedMap include_k(kspace, ls, 0, kmat);

  auto in_span = [&](const Mat& basis, const Vec& v) { return static_cast<bool>(solve_consistent(basis, Mat(v))); };
  for (int j = 0; j < kspace.dim(); ++j)
    if (!in_span(kmat, Vec(l.d().matrix() * kmat.col(j))))
      throw internal_error("build_K_M: K not closed under d");

  // K as its own DG-Lie algebra
  Mat dk = coordinates_in(kmat, Mat(l.d().matrix() * kmat));
  DGLieAlgebra k(kspace, GradedMap(kspace, kspace, 1, dk));
  for (int i = 0; i < kspace.dim(); ++i)
    for (int j = i; j < kspace.dim(); ++j) {
      Vec br = l.bracket(Vec(kmat.col(i)), Vec(kmat.col(j)));
      auto co = solve_consistent(kmat, Mat(br));
      if (!co) throw internal_error("build_K_M: K not closed under bracket");
      if (!br.isZero(0)) k.set_bracket(i, j, Vec(co->col(0)));
    }
  k.validate();

  // M = iota(g) + K
  GradedSpace mspace = direct_sum(gs, kspace);
  Mat mmat(ls.dim(), mspace.dim());
  mmat.leftCols(gs.dim()) = iota.matrix();
  mmat.rightCols(kspace.dim()) = kmat;
  GradedMap include_m(mspace, ls, 0, mmat);
  Mat dm_coords = mat_zero(mspace.dim(), mspace.dim());
  {
    Mat dm = l.d().matrix() * mmat;
    auto co = solve_consistent(mmat, dm);
    if (!co) throw internal_error("build_K_M: M not closed under d");
    dm_coords = *co;
  }
  DGLieAlgebra m(mspace, GradedMap(mspace, mspace, 1, dm_coords));
  for (int i = 0; i < mspace.dim(); ++i)
    for (int j = i; j < mspace.dim(); ++j) {
      Vec br = l.bracket(Vec(mmat.col(i)), Vec(mmat.col(j)));
      auto co = solve_consistent(mmat, Mat(br));
      if (!co)
        throw validation_error("build_K_M: M = iota(g) + K is not closed under the bracket "
                               "(the invariant complement is not ad(g)-stable)");
      if (!br.isZero(0)) m.set_bracket(i, j, Vec(co->col(0)));
    }
  m.validate();

  // inclusion M -> L is a quasi-isomorphism
  {
    CohomologyData coh_m = cohomology(mspace, m.d());
    if (coh_m.H.dim() != coh.H.dim())
      throw internal_error("build_K_M: H(M) and H(L) dimensions differ");
    for (int d : coh.H.degrees_present())
      if (coh.H.indices_of_degree(d).size() != coh_m.H.indices_of_degree(d).size())
        throw internal_error("build_K_M: H(M) and H(L) differ in degree " + std::to_string(d));
    GradedMap induced = compose(coh.project, compose(include_m, coh_m.include));
    if (rank(induced.matrix()) != coh.H.dim())
      throw internal_error("build_K_M: inclusion M -> L is not a quasi-isomorphism");
  }

  KMResult out{gs, std::move(k), std::move(m), include_k, include_m, Mat(), {}};
  out.k_in_m = mat_zero(mspace.dim(), kspace.dim());
  for (int j = 0; j < kspace.dim(); ++j) out.k_in_m(gs.dim() + j, j) = 1;
  for (int i = 0; i < gs.dim(); ++i) out.g_in_m.push_back(i);
  return out;
}

ExtendedMorphism extend_morphism_over_g(const LInftyMorphism& f_tilde, const KMResult& km, int max_arity) {
  LInftyAlgebra a_m = from_dgla(km.m, max_arity);
  const GradedSpace mshift = a_m.space();
  const GradedSpace& hk = f_tilde.map.source();
  if (!(f_tilde.map.target() == shift(km.k.space())))
    throw validation_error("extend_morphism_over_g: f_tilde must land in K[1]");
  if (f_tilde.map.max_arity() != max_arity)
    throw validation_error("extend_morphism_over_g: truncation mismatch");

  // source space: g[1] (+) H(K)
  GradedSpace s = direct_sum(shift(km.g_space), hk, "", "");
  const int ng = km.g_space.dim();

  // linear part into M[1]
  Mat f1 = mat_zero(mshift.dim(), s.dim());
  for (int i = 0; i < ng; ++i) f1(km.g_in_m[i], i) = 1;
  GradedMap ft1 = f_tilde.map.linear_part();
  f1.rightCols(hk.dim()) = km.k_in_m * ft1.matrix();

  // identify H(M[1]) with S through classes of f1
  CohomologyData coh_m = cohomology(mshift, a_m.differential());
  Mat ps = coh_m.project.matrix() * f1;
  if (coh_m.H.dim() != s.dim() || rank(ps) != s.dim())
    throw validation_error("extend_morphism_over_g: f1 does not identify H(M[1]) with g[1] + H(K)");
  Mat ps_inv = *solve_consistent(ps, mat_identity(s.dim()));

  // source structure: r2 from classes, higher coefficients from f_tilde's source on pure-K words
  Coderivation rs(s, 1, max_arity);
  for (int i = 0; i < s.dim(); ++i)
    for (int j = i; j < s.dim(); ++j) {
      if (i == j && (s.degree(i) & 1)) continue;
      Vec val = a_m.q().coeff(2).eval_args({Vec(f1.col(i)), Vec(f1.col(j))});
      val = ps_inv * (coh_m.project.matrix() * val);
      if (!val.isZero(0)) rs.coeff(2).set(SymWord{{i, j}}, std::move(val));
    }
  for (int n = 3; n <= max_arity; ++n) {
    if (f_tilde.q_source.arity_is_zero(n)) continue;
    for (const auto& [w, val] : f_tilde.q_source.coeff(n).entries()) {
      SymWord shifted;
      for (int l : w.letters) shifted.letters.push_back(ng + l);
      Vec big = Vec::Zero(s.dim());
      big.tail(hk.dim()) = val;
      rs.coeff(n).set(shifted, std::move(big));
    }
  }
  // cross-check: the quadratic part restricted to pure-K words matches r2 of the K-model
  for (const auto& [w, val] : f_tilde.q_source.coeff(2).entries()) {
    SymWord shifted;
    for (int l : w.letters) shifted.letters.push_back(ng + l);
    Vec expect = Vec::Zero(s.dim());
    expect.tail(hk.dim()) = val;
    if (!(rs.coeff(2).eval_word(shifted) == expect))
      throw internal_error("extend_morphism_over_g: induced bracket disagrees with the K-model on pure-K words");
  }

  LInftyAlgebra source(s, rs);

  // the extension: f1 as above, f_n = f_tilde_n on pure-K words, 0 otherwise
  CoalgMorphism f(s, mshift, max_arity);
  for (int i = 0; i < s.dim(); ++i) {
    Vec col = f1.col(i);
    if (!col.isZero(0)) f.coeff(1).set(SymWord{{i}}, col);
  }
  for (int n = 2; n <= max_arity; ++n) {
    if (f_tilde.map.coeff(n).is_zero()) continue;
    for (const auto& [w, val] : f_tilde.map.coeff(n).entries()) {
      SymWord shifted;
      for (int l : w.letters) shifted.letters.push_back(ng + l);
      Vec big = km.k_in_m * val;
      if (!big.isZero(0)) f.coeff(n).set(shifted, std::move(big));
    }
  }

  ExtendedMorphism out{std::move(source), LInftyMorphism{f, rs, a_m.q()}, MorphismReport{}};
  out.report = check_morphism(out.morphism);
  return out;
}

}  // namespace linf
