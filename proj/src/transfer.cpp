#include <linf/transfer.hpp>

#include <functional>

namespace linf {

void Contraction::validate(const GradedMap& q1) const {
  const Mat& fm = f.matrix();
  const Mat& gm = g.matrix();
  const Mat& hm = h.matrix();
  const Mat& dm = q1.matrix();
  if (f.degree() != 0 || g.degree() != 0 || h.degree() != -1 || r1.degree() != 1)
    throw validation_error("contraction: wrong degrees");
  if (!(gm * fm == mat_identity(small.dim()))) throw validation_error("contraction: g f != id");
  if (!(fm * gm == mat_identity(big.dim()) + dm * hm + hm * dm))
    throw validation_error("contraction: f g != id + q1 h + h q1");
  if (!(gm * hm).isZero(0)) throw validation_error("contraction: g h != 0");
  if (!(hm * hm).isZero(0)) throw validation_error("contraction: h h != 0");
  if (!(hm * fm).isZero(0)) throw validation_error("contraction: h f != 0");
  if (!(dm * fm == fm * r1.matrix())) throw validation_error("contraction: f is not a chain map");
  if (!(r1.matrix() * gm == gm * dm)) throw validation_error("contraction: g is not a chain map");
}

Contraction contraction_from_split(const GradedSpace& v, const GradedMap& q1, const CohomologyData& coh) {
  const GradedMap& f = coh.include;
  const GradedMap& g = coh.project;

  Mat hmat = mat_zero(v.dim(), v.dim());
  for (int deg : v.degrees_present()) {
    auto it = coh.split.find(deg);
    if (it == coh.split.end()) continue;
    const Mat& b_coords = it->second.B;
    if (b_coords.cols() == 0) continue;
    const auto idx = v.indices_of_degree(deg);
    const auto idx_prev = v.indices_of_degree(deg - 1);
    auto itp = coh.split.find(deg - 1);
    if (itp == coh.split.end() || itp->second.W.cols() != b_coords.cols())
      throw internal_error("hodge contraction: B and W[-1] dimensions disagree");
    const Mat& w_prev = itp->second.W;

    // full-space columns of W^{deg-1}
    Mat w_full = mat_zero(v.dim(), w_prev.cols());
    for (size_t i = 0; i < idx_prev.size(); ++i) w_full.row(idx_prev[i]) = w_prev.row(static_cast<Eigen::Index>(i));
    // q1 restricted to W^{deg-1}, in B-coordinates of this degree
    Mat q1w = q1.matrix() * w_full;
    Mat q1w_slice(static_cast<Eigen::Index>(idx.size()), q1w.cols());
    for (size_t i = 0; i < idx.size(); ++i) q1w_slice.row(static_cast<Eigen::Index>(i)) = q1w.row(idx[i]);
    Mat m = coordinates_in(b_coords, q1w_slice);  // square, invertible
    Mat minv = *solve_consistent(m, mat_identity(m.rows()));

    // h on this degree: -(q1|W)^{-1} o proj_B; build via [B|H|W] coordinates
    const auto& sp = it->second;
    const int n = static_cast<int>(idx.size());
    const int nb = static_cast<int>(sp.B.cols()), nh = static_cast<int>(sp.H.cols());
    Mat basis(n, n);
    if (nb) basis.leftCols(nb) = sp.B;
    if (nh) basis.middleCols(nb, nh) = sp.H;
    if (sp.W.cols()) basis.rightCols(sp.W.cols()) = sp.W;
    Mat coords = coordinates_in(basis, mat_identity(n));
    Mat h_on_slice = -(w_full * (minv * coords.topRows(nb)));
    for (int j = 0; j < n; ++j) hmat.col(idx[j]) += h_on_slice.col(j);
  }

  GradedMap r1 = compose(g, compose(q1, f));
  Contraction c{v, coh.H, f, g, GradedMap(v, v, -1, std::move(hmat)), r1};
  c.validate(q1);
  return c;
}

Contraction contraction_from_hodge(const LInftyAlgebra& a) {
  CohomologyData coh = cohomology(a.space(), a.differential());
  return contraction_from_split(a.space(), a.differential(), coh);
}

namespace {

// Theta_n(w) = sum over partitions into >= 2 blocks of q_k на the F-blocks.
Vec theta_eval(const Coderivation& q, const CoalgMorphism& f, const SymWord& w) {
  const GradedSpace& small = f.source();
  const GradedSpace& big = f.target();
  const int m = w.arity();
  std::vector<int> degs(m);
  for (int i = 0; i < m; ++i) degs[i] = small.degree(w.letters[i]);
  Vec out = Vec::Zero(big.dim());
  for_each_set_partition(m, [&](const std::vector<std::vector<int>>& blocks) {
    const int k = static_cast<int>(blocks.size());
    if (k < 2 || q.arity_is_zero(k)) return;
    std::vector<int> perm;
    perm.reserve(m);
    for (const auto& b : blocks) perm.insert(perm.end(), b.begin(), b.end());
    const Rational regroup = koszul_sign(perm, degs);
    std::vector<Vec> vals;
    vals.reserve(k);
    for (const auto& b : blocks) {
      std::vector<int> seq;
      for (int pos : b) seq.push_back(w.letters[pos]);
      Vec val = f.coeff(static_cast<int>(b.size())).eval_seq(seq);
      if (val.isZero(0)) return;
      vals.push_back(std::move(val));
    }
    out += q.coeff(k).eval_args(vals) * regroup;
  });
  return out;
}

// pi o H_T o iota on one word. iota embeds the word as its full graded
// symmetrization (1/n! times the sum over all n! permutations, i.e.
// mult!/n! per distinct arrangement); pi collapses a tensor sequence to the
// normalized word with its Koszul sign. Both intertwine slotwise operators,
// so the contraction identity descends from the tensor level.
WordCombo sym_homotopy_raw(const Mat& p, const Mat& h, const GradedSpace& v, const SymWord& u) {
  WordCombo out;
  const int n = u.arity();
  if (n == 0) return out;
  Rational iota_factor(1);  // mult(u)! / n!
  {
    int run = 1;
    for (size_t i = 1; i < u.letters.size(); ++i) {
      if (u.letters[i] == u.letters[i - 1]) {
        ++run;
        iota_factor *= run;
      } else
        run = 1;
    }
    for (int i = 2; i <= n; ++i) iota_factor /= i;
  }

  std::vector<int> arr = u.letters;  // sorted; iterate distinct arrangements
  do {
    std::vector<int> sorted_copy = arr;
    std::vector<int> degs(n);
    for (int i = 0; i < n; ++i) degs[i] = v.degree(arr[i]);
    const Rational kappa = sort_with_koszul_sign(sorted_copy, degs);
    for (int a = 0; a < n; ++a) {
      int par = 0;
      for (int l = 0; l < a; ++l) par ^= (v.degree(arr[l]) & 1);
      const Rational slot_sign = par ? rat(-1) : rat(1);
      // columns: P on slots < a, h at slot a, units after
      std::vector<int> pick(n);
      std::function<void(int, const Rational&)> expand = [&](int slot, const Rational& coeff) {
        if (slot == n) {
          NormalizedWord nw = normalize_word(pick, v);
          if (nw.sign == 0) return;
          add_to(out, nw.word, coeff * nw.sign);
          return;
        }
        const Mat* op = slot < a ? &p : (slot == a ? &h : nullptr);
        if (!op) {
          pick[slot] = arr[slot];
          expand(slot + 1, coeff);
          return;
        }
        for (int t = 0; t < v.dim(); ++t) {
          if ((*op)(t, arr[slot]) == 0) continue;
          pick[slot] = t;
          expand(slot + 1, coeff * (*op)(t, arr[slot]));
        }
      };
      expand(0, kappa * slot_sign * iota_factor);
    }
  } while (std::next_permutation(arr.begin(), arr.end()));
  return out;
}

}  // namespace

WordCombo symmetric_homotopy(const Contraction& c, const SymWord& w) {
  Mat p = c.f.matrix() * c.g.matrix();
  return sym_homotopy_raw(p, c.h.matrix(), c.big, w);
}

TransferResult homotopy_transfer(const LInftyAlgebra& a, const Contraction& c) {
  if (!(c.big == a.space())) throw validation_error("homotopy_transfer: contraction on wrong space");
  c.validate(a.differential());
  const int cap = a.max_arity();
  const GradedSpace& big = c.big;
  const GradedSpace& small = c.small;

  // inclusion-side recursion
  CoalgMorphism f = CoalgMorphism::strict(c.f, cap);
  Coderivation r(small, 1, cap);
  for (int i = 0; i < small.dim(); ++i) {
    Vec col = c.r1.matrix().col(i);
    if (!col.isZero(0)) r.coeff(1).set(SymWord{{i}}, col);
  }
  for (int n = 2; n <= cap; ++n) {
    for (const SymWord& w : enumerate_words(small, n)) {
      Vec theta = theta_eval(a.q(), f, w);
      if (theta.isZero(0)) continue;
      Vec fw = c.h.matrix() * theta;
      Vec rw = c.g.matrix() * theta;
      if (!fw.isZero(0)) f.coeff(n).set(w, std::move(fw));
      if (!rw.isZero(0)) r.coeff(n).set(w, std::move(rw));
    }
  }

  LInftyAlgebra transferred(small, r);  // proves [R,R] = 0 through the truncation

  MorphismReport frep = check_morphism(f, r, a.q());
  if (!frep.ok) throw internal_error("homotopy_transfer: F fails the morphism identity: " + frep.detail);

  // projection side: g_n = -Psi_n o Hbar, verified arity by arity
  CoalgMorphism g = CoalgMorphism::strict(c.g, cap);
  const bool have_h = !c.h.is_zero();
  Mat p = c.f.matrix() * c.g.matrix();
  Coderivation q1only(big, 1, cap);
  {
    GradedMap q1 = a.differential();
    for (int i = 0; i < big.dim(); ++i) {
      Vec col = q1.matrix().col(i);
      if (!col.isZero(0)) q1only.coeff(1).set(SymWord{{i}}, col);
    }
  }

  for (int n = 2; n <= cap && have_h; ++n) {
    std::map<SymWord, Vec> psi_memo;
    std::function<const Vec&(const SymWord&)> psi = [&](const SymWord& u) -> const Vec& {
      auto it = psi_memo.find(u);
      if (it != psi_memo.end()) return it->second;
      Vec val = Vec::Zero(small.dim());
      // R-side: partitions into 2..n blocks of lower g's
      const int m = u.arity();
      std::vector<int> degs(m);
      for (int i = 0; i < m; ++i) degs[i] = big.degree(u.letters[i]);
      for_each_set_partition(m, [&](const std::vector<std::vector<int>>& blocks) {
        const int k = static_cast<int>(blocks.size());
        if (k < 2 || r.arity_is_zero(k)) return;
        std::vector<int> perm;
        for (const auto& b : blocks) perm.insert(perm.end(), b.begin(), b.end());
        const Rational regroup = koszul_sign(perm, degs);
        std::vector<Vec> vals;
        for (const auto& b : blocks) {
          std::vector<int> seq;
          for (int pos : b) seq.push_back(u.letters[pos]);
          Vec bv = g.coeff(static_cast<int>(b.size())).eval_seq(seq);
          if (bv.isZero(0)) return;
          vals.push_back(std::move(bv));
        }
        val += r.coeff(k).eval_args(vals) * regroup;
      });
      // minus the lower coderivation terms (j >= 2 shortens the word)
      for (const auto& [w2, coeff] : apply_coderivation(a.q(), u))
        if (w2.arity() < m) val -= g.coeff(w2.arity()).eval_word(w2) * coeff;
      return psi_memo.emplace(u, std::move(val)).first->second;
    };

    for (const SymWord& u : enumerate_words(big, n)) {
      WordCombo hb = sym_homotopy_raw(p, c.h.matrix(), big, u);
      Vec val = Vec::Zero(small.dim());
      for (const auto& [w2, coeff] : hb) val -= psi(w2) * coeff;
      if (!val.isZero(0)) g.coeff(n).set(u, std::move(val));
    }
    // the identity at this arity: g_n o D1 - r1 o g_n = Psi_n
    for (const SymWord& u : enumerate_words(big, n)) {
      Vec lhs = Vec::Zero(small.dim());
      for (const auto& [w2, coeff] : apply_coderivation(q1only, u)) lhs += g.coeff(n).eval_word(w2) * coeff;
      lhs -= c.r1.matrix() * g.coeff(n).eval_word(u);
      if (lhs != psi(u))
        throw internal_error("homotopy_transfer: projection morphism obstructed at arity " +
                             std::to_string(n) + " on word '" + u.str(big) + "'");
    }
  }

  // G o F = id through the truncation
  CoalgMorphism gf = compose(g, f);
  if (!(gf.linear_part().matrix() == mat_identity(small.dim())))
    throw internal_error("homotopy_transfer: (G F)_1 != id");
  for (int n = 2; n <= cap; ++n)
    if (!gf.coeff(n).is_zero()) throw internal_error("homotopy_transfer: G F has a nonzero coefficient at arity " + std::to_string(n));

  return TransferResult{transferred,
                        LInftyMorphism{f, r, a.q()},
                        LInftyMorphism{g, a.q(), r}};
}

namespace {

// Conjugate the whole structure into the split basis, transfer there (the
// tensor-trick operators are sparse in those coordinates), then transport the
// morphisms back. The results agree entry for entry with transferring along
// contraction_from_split directly.
MinimalModelResult minimal_model_via_split(const LInftyAlgebra& a, const CohomologyData& coh) {
  const GradedSpace& v = a.space();
  const int cap = a.max_arity();

  // split basis: per degree B, H, W columns
  std::vector<std::string> names;
  std::vector<int> degs;
  Mat s = mat_zero(v.dim(), v.dim());
  int col = 0;
  for (int deg : v.degrees_present()) {
    const auto idx = v.indices_of_degree(deg);
    const auto& sp = coh.split.at(deg);
    auto push = [&](const Mat& block, const std::string& tag) {
      for (Eigen::Index j = 0; j < block.cols(); ++j) {
        for (size_t i = 0; i < idx.size(); ++i) s(idx[i], col) = block(static_cast<Eigen::Index>(i), j);
        names.push_back(tag + std::to_string(col + 1));
        degs.push_back(deg);
        ++col;
      }
    };
    push(sp.B, "b");
    push(sp.H, "e");
    push(sp.W, "w");
  }
  GradedSpace vs(names, degs);
  GradedMap s_map(vs, v, 0, s);
  Mat sinv = *solve_consistent(s, mat_identity(v.dim()));
  GradedMap sinv_map(v, vs, 0, sinv);

  // conjugated structure on the split space
  Coderivation qs(vs, 1, cap);
  for (int n = 1; n <= cap; ++n) {
    if (a.q().arity_is_zero(n)) continue;
    for (const SymWord& w : enumerate_words(vs, n)) {
      std::vector<Vec> args;
      args.reserve(n);
      for (int l : w.letters) args.push_back(Vec(s.col(l)));
      Vec val = sinv * a.q().coeff(n).eval_args(args);
      if (!val.isZero(0)) qs.coeff(n).set(w, std::move(val));
    }
  }
  LInftyAlgebra as(vs, qs);

  // Hodge data is diagonal here
  CohomologyData coh_s;
  {
    std::vector<std::string> hn;
    std::vector<int> hd;
    std::vector<int> h_cols;
    for (int i = 0; i < vs.dim(); ++i)
      if (vs.name(i)[0] == 'e') {
        hn.push_back("h" + std::to_string(hn.size() + 1));
        hd.push_back(vs.degree(i));
        h_cols.push_back(i);
      }
    GradedSpace hs(hn, hd);
    Mat f = mat_zero(vs.dim(), hs.dim());
    Mat g = mat_zero(hs.dim(), vs.dim());
    for (size_t j = 0; j < h_cols.size(); ++j) {
      f(h_cols[j], static_cast<Eigen::Index>(j)) = 1;
      g(static_cast<Eigen::Index>(j), h_cols[j]) = 1;
    }
    coh_s.H = hs;
    coh_s.include = GradedMap(hs, vs, 0, std::move(f));
    coh_s.project = GradedMap(vs, hs, 0, std::move(g));
    for (int deg : vs.degrees_present()) {
      const auto idx = vs.indices_of_degree(deg);
      const int n = static_cast<int>(idx.size());
      std::vector<int> bs, hs2, ws;
      for (int i = 0; i < n; ++i) {
        const char t = vs.name(idx[i])[0];
        (t == 'b' ? bs : t == 'e' ? hs2 : ws).push_back(i);
      }
      HodgeSplit spl{mat_zero(n, static_cast<Eigen::Index>(bs.size())),
                     mat_zero(n, static_cast<Eigen::Index>(hs2.size())),
                     mat_zero(n, static_cast<Eigen::Index>(ws.size()))};
      for (size_t j = 0; j < bs.size(); ++j) spl.B(bs[j], static_cast<Eigen::Index>(j)) = 1;
      for (size_t j = 0; j < hs2.size(); ++j) spl.H(hs2[j], static_cast<Eigen::Index>(j)) = 1;
      for (size_t j = 0; j < ws.size(); ++j) spl.W(ws[j], static_cast<Eigen::Index>(j)) = 1;
      coh_s.split[deg] = std::move(spl);
    }
  }

  Contraction cs = contraction_from_split(vs, as.differential(), coh_s);
  TransferResult t = homotopy_transfer(as, cs);

  // transport: F := S o F', G := G' o S^{-1}
  CoalgMorphism f_back(coh_s.H, v, cap);
  for (int n = 1; n <= cap; ++n)
    for (const auto& [w, val] : t.into_big.map.coeff(n).entries()) f_back.coeff(n).set(w, Vec(s * val));
  CoalgMorphism g_back(v, coh_s.H, cap);
  for (int n = 1; n <= cap; ++n) {
    if (t.onto_small.map.coeff(n).is_zero()) continue;
    for (const SymWord& w : enumerate_words(v, n)) {
      std::vector<Vec> args;
      args.reserve(n);
      for (int l : w.letters) args.push_back(Vec(sinv.col(l)));
      Vec val = t.onto_small.map.coeff(n).eval_args(args);
      if (!val.isZero(0)) g_back.coeff(n).set(w, std::move(val));
    }
  }

  // the cohomology data in the original coordinates, for callers
  CohomologyData coh_out = coh;

  return MinimalModelResult{t.transferred,
                            LInftyMorphism{f_back, t.transferred.q(), a.q()},
                            LInftyMorphism{g_back, a.q(), t.transferred.q()},
                            std::move(coh_out)};
}

}  // namespace

MinimalModelResult minimal_model(const LInftyAlgebra& a) {
  CohomologyData coh = cohomology(a.space(), a.differential());
  return minimal_model_via_split(a, coh);
}

MinimalModelResult minimal_model_with_split(const LInftyAlgebra& a, const CohomologyData& coh) {
  return minimal_model_via_split(a, coh);
}

}  // namespace linf
