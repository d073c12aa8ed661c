#include <linf/formality.hpp>

namespace linf {

namespace {

// Degree-0 unknown basis for alpha: (word, target index) with matching degrees.
struct AlphaBasis {
  std::vector<std::pair<SymWord, int>> items;
};

AlphaBasis alpha_basis(const GradedSpace& h, int arity) {
  AlphaBasis b;
  for (const SymWord& w : enumerate_words(h, arity)) {
    const int wd = word_degree(w, h);
    for (int t = 0; t < h.dim(); ++t)
      if (h.degree(t) == wd) b.items.emplace_back(w, t);
  }
  return b;
}

// Row basis for the arity-k, degree +1 coefficient space.
AlphaBasis row_basis(const GradedSpace& h, int arity) {
  AlphaBasis b;
  for (const SymWord& w : enumerate_words(h, arity)) {
    const int wd = word_degree(w, h);
    for (int t = 0; t < h.dim(); ++t)
      if (h.degree(t) == wd + 1) b.items.emplace_back(w, t);
  }
  return b;
}

Vec bracket_column(const Coderivation& r2_only, const MultiBracket& alpha, int k, const AlphaBasis& rows) {
  Coderivation ac(r2_only.space(), 0, r2_only.max_arity());
  ac.coeff(alpha.arity()) = alpha;
  MultiBracket out = compose_coefficient(r2_only, ac, k) - compose_coefficient(ac, r2_only, k);
  Vec col = Vec::Zero(static_cast<Eigen::Index>(rows.items.size()));
  for (size_t r = 0; r < rows.items.size(); ++r)
    col(static_cast<Eigen::Index>(r)) = out.eval_word(rows.items[r].first)(rows.items[r].second);
  return col;
}

Coderivation r2_only_part(const Coderivation& r) {
  Coderivation out(r.space(), 1, r.max_arity());
  out.coeff(2) = r.coeff(2);
  return out;
}

std::string describe_class(const AlphaBasis& rows, const Vec& residual, const GradedSpace& h) {
  std::string s;
  for (Eigen::Index c = 0; c < residual.size(); ++c) {
    if (residual(c) == 0) continue;
    if (!s.empty()) s += " + ";
    s += to_string(residual(c)) + "*(" + rows.items[c].first.str(h) + " -> " + h.name(rows.items[c].second) + ")";
  }
  return s.empty() ? "0" : s;
}

}  // namespace

GaugeStep gauge_step(const Coderivation& r, int k) {
  const GradedSpace& h = r.space();
  if (!r.arity_is_zero(1)) throw validation_error("gauge_step: structure is not minimal");
  for (int j = 3; j < k; ++j)
    if (!r.arity_is_zero(j))
      throw validation_error("gauge_step: coefficient at arity " + std::to_string(j) + " has not been killed yet");

  Coderivation r2c = r2_only_part(r);
  AlphaBasis unknowns = alpha_basis(h, k - 1);
  AlphaBasis rows = row_basis(h, k);

  Mat sys = mat_zero(static_cast<Eigen::Index>(rows.items.size()), static_cast<Eigen::Index>(unknowns.items.size()));
  for (size_t c = 0; c < unknowns.items.size(); ++c) {
    MultiBracket unit(h, h, k - 1, 0);
    Vec val = Vec::Zero(h.dim());
    val(unknowns.items[c].second) = 1;
    unit.set(unknowns.items[c].first, std::move(val));
    sys.col(static_cast<Eigen::Index>(c)) = bracket_column(r2c, unit, k, rows);
  }
  Vec target = Vec::Zero(static_cast<Eigen::Index>(rows.items.size()));
  for (size_t i = 0; i < rows.items.size(); ++i)
    target(static_cast<Eigen::Index>(i)) = r.coeff(k).eval_word(rows.items[i].first)(rows.items[i].second);

  GaugeStep out;
  auto sol = solve_consistent(sys, target);
  if (!sol) {
    out.solvable = false;
    out.obstruction = describe_class(rows, reduce_against_columns(sys, target), h);
    return out;
  }
  out.solvable = true;
  out.alpha = MultiBracket(h, h, k - 1, 0);
  for (size_t c = 0; c < unknowns.items.size(); ++c) {
    const Rational v = (*sol)(static_cast<Eigen::Index>(c), 0);
    if (v == 0) continue;
    Vec val = out.alpha.eval_word(unknowns.items[c].first);
    val(unknowns.items[c].second) += v;
    out.alpha.set(unknowns.items[c].first, std::move(val));
  }
  return out;
}

Coderivation quadratic_target(const LInftyAlgebra& minimal) {
  Coderivation t(minimal.space(), 1, minimal.max_arity());
  t.coeff(2) = minimal.q().coeff(2);
  return t;
}

FormalityCertificate formality_certificate(const LInftyAlgebra& minimal) {
  if (!minimal.is_minimal()) throw validation_error("formality_certificate: structure is not minimal");
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
    Coderivation ac(h, 0, cap);
    ac.coeff(k - 1) = step.alpha;
    cur = conjugate(cur, ac);
    for (int j = 3; j <= k; ++j)
      if (!cur.arity_is_zero(j))
        throw internal_error("formality: conjugation reintroduced arity " + std::to_string(j));
    cert.gauges.push_back(step.alpha);
    cert.iso = compose(exponential(ac), cert.iso);
  }

  cert.formal = true;
  cert.target = cur;  // now (0, r2, 0, ..., 0)
  if (!(cert.target.coeff(2).entries() == minimal.q().coeff(2).entries()))
    throw internal_error("formality: conjugation changed the quadratic bracket");
  MorphismReport rep = check_morphism(cert.iso, minimal.q(), cert.target);
  if (!rep.ok) throw internal_error("formality: certificate failed the morphism check: " + rep.detail);
  return cert;
}

QuadraticityFormality formality_from_quadraticity(const LInftyAlgebra& minimal, int order) {
  if (!minimal.is_minimal()) throw validation_error("formality_from_quadraticity: structure is not minimal");
  const GradedSpace& h = minimal.space();
  for (int i = 0; i < h.dim(); ++i)
    if (h.degree(i) != 0 && h.degree(i) != 1)
      throw validation_error("formality_from_quadraticity: tangent cohomology not concentrated in degrees {0,1}");
  const int cap = minimal.max_arity();
  const int order_eff = std::min(order, cap);

  QuadraticityFormality out;
  out.presentation = kuranishi_from_minimal(minimal, order_eff);
  out.quadraticity = quadraticity_check(out.presentation);
  out.target = quadratic_target(minimal);
  if (!out.quadraticity.quadratic) {
    out.formal = false;
    return out;
  }

  // Dualize (A, phi) into the morphism (H, r2) -> (H, R): on pure-H^0 words
  // the coefficients come from phi, on words with one H^1 letter from A.
  const auto h0 = h.indices_of_degree(0);
  const auto h1 = h.indices_of_degree(1);
  const int n = out.presentation.n, m = out.presentation.m;
  const QuadraticityWitness& w = *out.quadraticity.witness;

  CoalgMorphism dual(h, h, cap);
  auto word_of = [&](const MultiIndex& i, int extra) {
    SymWord word;
    for (int v = 0; v < n; ++v)
      for (int e = 0; e < i[v]; ++e) word.letters.push_back(h0[v]);
    if (extra >= 0) word.letters.push_back(extra);
    std::sort(word.letters.begin(), word.letters.end());
    return word;
  };
  for (int ar = 1; ar <= cap; ++ar) {
    // phi part: words e_I with |I| = ar
    for (const MultiIndex& i : monomials_of_degree(n, ar)) {
      Vec val = Vec::Zero(h.dim());
      Rational f(1);
      for (int e : i)
        for (int t = 2; t <= e; ++t) f *= t;
      bool nz = false;
      for (int tv = 0; tv < n; ++tv) {
        const Rational c = w.phi[tv].coeff(i);
        if (c == 0) continue;
        val(h0[tv]) += c * f;
        nz = true;
      }
      if (nz) dual.coeff(ar).add(word_of(i, -1), val);
    }
    // A part: words e_I (+) eps_j with |I| = ar - 1
    for (const MultiIndex& i : monomials_of_degree(n, ar - 1)) {
      Rational f(1);
      for (int e : i)
        for (int t = 2; t <= e; ++t) f *= t;
      for (int j = 0; j < m; ++j) {
        Vec val = Vec::Zero(h.dim());
        bool nz = false;
        for (int tv = 0; tv < m; ++tv) {
          const Rational c = w.a[tv][j].coeff(i);
          if (c == 0) continue;
          val(h1[tv]) += c * f;
          nz = true;
        }
        if (nz) dual.coeff(ar).add(word_of(i, h1[j]), val);
      }
    }
  }

  out.dual_check = check_morphism(dual, out.target, minimal.q());
  if (!out.dual_check.ok)
    throw internal_error("formality_from_quadraticity: dualized witness fails the morphism identity: " +
                         out.dual_check.detail);
  out.iso = invert_unipotent(dual);
  out.iso_check = check_morphism(out.iso, minimal.q(), out.target);
  if (!out.iso_check.ok)
    throw internal_error("formality_from_quadraticity: inverted certificate fails: " + out.iso_check.detail);
  out.formal = true;
  return out;
}

}  // namespace linf
