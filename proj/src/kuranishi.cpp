#include <linf/kuranishi.hpp>

namespace linf {

void KuranishiPresentation::validate() const {
  if (static_cast<int>(relations.size()) != m) throw validation_error("presentation: relation count != m");
  for (int j = 0; j < m; ++j) {
    if (relations[j].nvars() != n || relations[j].order() != order)
      throw validation_error("presentation: relation shape mismatch");
    auto mu = relations[j].multiplicity();
    if (mu && *mu < 2)
      throw validation_error("presentation: relation " + std::to_string(j + 1) + " has multiplicity < 2");
  }
}

std::string KuranishiPresentation::canonical_text() const {
  std::string s;
  s += "variables:";
  for (const auto& v : var_names) s += " " + v;
  s += "\norder: " + std::to_string(order) + "\n";
  if (m == 0) s += "relations: none (formally smooth)\n";
  for (int j = 0; j < m; ++j) s += "f" + std::to_string(j + 1) + " = " + relations[j].str(var_names) + "\n";
  return s;
}

namespace {

Rational multi_index_factorial(const MultiIndex& i) {
  Rational f(1);
  for (int e : i)
    for (int k = 2; k <= e; ++k) f *= k;
  return f;
}

}  // namespace

KuranishiPresentation kuranishi_from_minimal(const LInftyAlgebra& minimal, int order) {
  if (!minimal.is_minimal()) throw validation_error("kuranishi: structure is not minimal (q1 != 0)");
  if (order > minimal.max_arity())
    throw validation_error("kuranishi: truncation arity " + std::to_string(minimal.max_arity()) +
                           " too low for requested order " + std::to_string(order));
  const GradedSpace& h = minimal.space();
  const auto h0 = h.indices_of_degree(0);
  const auto h1 = h.indices_of_degree(1);

  KuranishiPresentation k;
  k.n = static_cast<int>(h0.size());
  k.m = static_cast<int>(h1.size());
  k.order = order;
  for (int i = 0; i < k.n; ++i) {
    k.var_names.push_back("x" + std::to_string(i + 1));
    k.source_h0.push_back(h.name(h0[i]));
  }
  for (int j = 0; j < k.m; ++j) {
    k.source_h1.push_back(h.name(h1[j]));
    k.relations.emplace_back(k.n, order);
  }

  for (int deg = 2; deg <= order; ++deg) {
    if (minimal.q().arity_is_zero(deg)) continue;
    const MultiBracket& r = minimal.q().coeff(deg);
    for (const MultiIndex& i : monomials_of_degree(k.n, deg)) {
      SymWord w;
      for (int v = 0; v < k.n; ++v)
        for (int e = 0; e < i[v]; ++e) w.letters.push_back(h0[v]);
      std::sort(w.letters.begin(), w.letters.end());
      Vec val = r.eval_word(w);
      if (val.isZero(0)) continue;
      const Rational fact = multi_index_factorial(i);
      for (int j = 0; j < k.m; ++j)
        if (val(h1[j]) != 0) k.relations[j].add_coeff(i, val(h1[j]) / fact);
    }
  }
  k.validate();
  return k;
}

TangentObstruction tangent_obstruction(const LInftyAlgebra& minimal, int order) {
  KuranishiPresentation k = kuranishi_from_minimal(minimal, std::max(order, 2) <= minimal.max_arity()
                                                                ? std::max(order, 2)
                                                                : minimal.max_arity());
  TangentObstruction out;
  out.tangent_dim = k.n;
  for (const auto& f : k.relations) out.primary_obstruction.push_back(f.homogeneous_part(2));
  return out;
}

namespace {

// Column-stacked coefficient vector of the degree-d part of a series, rows
// following monomials_of_degree(n, d).
Vec degree_slice(const TruncatedSeries& f, const std::vector<MultiIndex>& monos) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(monos.size()));
  for (size_t r = 0; r < monos.size(); ++r) v(static_cast<Eigen::Index>(r)) = f.coeff(monos[r]);
  return v;
}

// Diagnostic: do the relations generate the same truncated ideal as their
// quadratic parts, with no automorphism allowed?
bool ideal_spans_equal(const KuranishiPresentation& k) {
  const int n = k.n, order = k.order;
  std::vector<MultiIndex> all_monos;
  std::map<MultiIndex, int> pos;
  for (int d = 0; d <= order; ++d)
    for (const auto& mo : monomials_of_degree(n, d)) {
      pos[mo] = static_cast<int>(all_monos.size());
      all_monos.push_back(mo);
    }
  auto span_of = [&](const std::vector<TruncatedSeries>& gens) {
    std::vector<Vec> cols;
    for (const auto& g : gens) {
      if (g.is_zero()) continue;
      for (const auto& mo : all_monos) {
        TruncatedSeries mono(n, order);
        mono.set_coeff(mo, rat(1));
        TruncatedSeries prod = mono * g;
        if (prod.is_zero()) continue;
        Vec v = Vec::Zero(static_cast<Eigen::Index>(all_monos.size()));
        for (const auto& [i, c] : prod.coeffs()) v(pos.at(i)) = c;
        cols.push_back(std::move(v));
      }
    }
    Mat m(static_cast<Eigen::Index>(all_monos.size()), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = cols[j];
    return m;
  };
  std::vector<TruncatedSeries> quad;
  for (const auto& f : k.relations) quad.push_back(f.homogeneous_part(2));
  Mat a = span_of(k.relations);
  Mat b = span_of(quad);
  const Eigen::Index ra = rank(a), rb = rank(b);
  if (ra != rb) return false;
  Mat ab(a.rows(), a.cols() + b.cols());
  if (a.cols()) ab.leftCols(a.cols()) = a;
  if (b.cols()) ab.rightCols(b.cols()) = b;
  return rank(ab) == ra;
}

}  // namespace

QuadraticityResult quadraticity_check(const KuranishiPresentation& k) {
  k.validate();
  const int n = k.n, m = k.m, order = k.order;
  QuadraticityResult out;
  out.order = order;
  out.ideal_equal_on_the_nose = ideal_spans_equal(k);

  // working state: g = M_acc * (f o Psi_acc), degree by degree
  std::vector<TruncatedSeries> g = k.relations;
  std::vector<std::vector<TruncatedSeries>> m_acc(m, std::vector<TruncatedSeries>(m, TruncatedSeries(n, order)));
  for (int i = 0; i < m; ++i) m_acc[i][i] = TruncatedSeries::constant(n, order, rat(1));
  std::vector<TruncatedSeries> psi_acc;
  for (int v = 0; v < n; ++v) psi_acc.push_back(TruncatedSeries::variable(n, order, v));

  std::vector<TruncatedSeries> quad;
  for (const auto& f : k.relations) quad.push_back(f.homogeneous_part(2));

  for (int d = 3; d <= order; ++d) {
    bool need = false;
    for (const auto& gi : g)
      if (!gi.homogeneous_part(d).is_zero()) { need = true; break; }
    if (!need) continue;

    const auto rows_monos = monomials_of_degree(n, d);
    const auto b_monos = monomials_of_degree(n, d - 2);
    const auto p_monos = monomials_of_degree(n, d - 1);
    const Eigen::Index rows = static_cast<Eigen::Index>(m * rows_monos.size());
    const Eigen::Index cols_b = static_cast<Eigen::Index>(m * m * b_monos.size());
    const Eigen::Index cols_p = static_cast<Eigen::Index>(n * p_monos.size());
    Mat sys = mat_zero(rows, cols_b + cols_p);
    Mat rhs = mat_zero(rows, 1);

    std::map<MultiIndex, int> rowpos;
    for (size_t r = 0; r < rows_monos.size(); ++r) rowpos[rows_monos[r]] = static_cast<int>(r);

    for (int i = 0; i < m; ++i) {
      const Eigen::Index row0 = static_cast<Eigen::Index>(i * rows_monos.size());
      rhs.block(row0, 0, static_cast<Eigen::Index>(rows_monos.size()), 1) =
          -degree_slice(g[i].homogeneous_part(d), rows_monos);
      // b_{ij} columns: coefficient of (b mono * g_j^(2)) in degree d
      for (int j = 0; j < m; ++j) {
        for (size_t bm = 0; bm < b_monos.size(); ++bm) {
          const Eigen::Index col = static_cast<Eigen::Index>(((i * m) + j) * b_monos.size() + bm);
          TruncatedSeries mono(n, order);
          mono.set_coeff(b_monos[bm], rat(1));
          TruncatedSeries prod = mono * quad[j];
          for (const auto& [mi, c] : prod.coeffs()) sys(row0 + rowpos.at(mi), col) += c;
        }
      }
      // psi_k columns: d(g_i^(2))/dx_k * psi mono
      for (int v = 0; v < n; ++v) {
        TruncatedSeries dgi = quad[i].derivative(v);
        for (size_t pm = 0; pm < p_monos.size(); ++pm) {
          const Eigen::Index col = cols_b + static_cast<Eigen::Index>(v * p_monos.size() + pm);
          TruncatedSeries mono(n, order);
          mono.set_coeff(p_monos[pm], rat(1));
          TruncatedSeries prod = mono * dgi;
          for (const auto& [mi, c] : prod.coeffs()) sys(row0 + rowpos.at(mi), col) += c;
        }
      }
    }

    auto sol = solve_consistent(sys, rhs);
    if (!sol) {
      out.quadratic = false;
      out.obstruction_degree = d;
      std::string note = "recombination and coordinate change cannot remove the degree-" +
                         std::to_string(d) + " part of:";
      for (int i = 0; i < m; ++i) {
        TruncatedSeries slice = g[i].homogeneous_part(d);
        if (slice.is_zero()) continue;
        note += " f" + std::to_string(i + 1) + "^(" + std::to_string(d) + ") = " + slice.str(k.var_names) + ";";
      }
      out.obstruction_note = note;
      return out;
    }

    // extract the step and update the state exactly
    std::vector<std::vector<TruncatedSeries>> bstep(m, std::vector<TruncatedSeries>(m, TruncatedSeries(n, order)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (size_t bm = 0; bm < b_monos.size(); ++bm) {
          const Rational c = (*sol)(static_cast<Eigen::Index>(((i * m) + j) * b_monos.size() + bm), 0);
          if (c != 0) bstep[i][j].add_coeff(b_monos[bm], c);
        }
    std::vector<TruncatedSeries> psistep;
    for (int v = 0; v < n; ++v) {
      TruncatedSeries p = TruncatedSeries::variable(n, order, v);
      for (size_t pm = 0; pm < p_monos.size(); ++pm) {
        const Rational c = (*sol)(cols_b + static_cast<Eigen::Index>(v * p_monos.size() + pm), 0);
        if (c != 0) p.add_coeff(p_monos[pm], c);
      }
      psistep.push_back(std::move(p));
    }

    std::vector<TruncatedSeries> g_new;
    for (int i = 0; i < m; ++i) {
      TruncatedSeries gi = g[i].substitute(psistep);
      for (int j = 0; j < m; ++j) gi = gi + bstep[i][j] * g[j].substitute(psistep);
      g_new.push_back(std::move(gi));
    }
    g = std::move(g_new);
    for (int i = 0; i < m; ++i)
      if (!g[i].homogeneous_part(d).is_zero())
        throw internal_error("quadraticity: step did not kill degree " + std::to_string(d));

    // M_acc <- (Id + b) * (M_acc o psi); Psi_acc <- Psi_acc o psi
    std::vector<std::vector<TruncatedSeries>> m_new(m, std::vector<TruncatedSeries>(m, TruncatedSeries(n, order)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        TruncatedSeries acc = m_acc[i][j].substitute(psistep);
        for (int l = 0; l < m; ++l) acc = acc + bstep[i][l] * m_acc[l][j].substitute(psistep);
        m_new[i][j] = std::move(acc);
      }
    m_acc = std::move(m_new);
    for (int v = 0; v < n; ++v) psi_acc[v] = psi_acc[v].substitute(psistep);
  }

  // success: witness A = M_acc^{-1} (Neumann series), phi = Psi_acc
  QuadraticityWitness w;
  w.phi = psi_acc;
  // invert Id + E by alternating powers
  std::vector<std::vector<TruncatedSeries>> e(m, std::vector<TruncatedSeries>(m, TruncatedSeries(n, order)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      e[i][j] = m_acc[i][j];
      if (i == j) e[i][j] = e[i][j] - TruncatedSeries::constant(n, order, rat(1));
    }
  std::vector<std::vector<TruncatedSeries>> inv(m, std::vector<TruncatedSeries>(m, TruncatedSeries(n, order)));
  for (int i = 0; i < m; ++i) inv[i][i] = TruncatedSeries::constant(n, order, rat(1));
  std::vector<std::vector<TruncatedSeries>> powe = inv;  // E^0
  for (int p = 1; p <= order; ++p) {
    std::vector<std::vector<TruncatedSeries>> nxt(m, std::vector<TruncatedSeries>(m, TruncatedSeries(n, order)));
    bool nonzero = false;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        TruncatedSeries acc(n, order);
        for (int l = 0; l < m; ++l) acc = acc + powe[i][l] * e[l][j];
        if (!acc.is_zero()) nonzero = true;
        nxt[i][j] = std::move(acc);
      }
    powe = std::move(nxt);
    if (!nonzero) break;
    const Rational s = (p & 1) ? rat(-1) : rat(1);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) inv[i][j] = inv[i][j] + powe[i][j].scaled(s);
  }
  w.a = std::move(inv);

  out.quadratic = true;
  out.witness = std::move(w);
  if (!verify_quadraticity_witness(k, *out.witness))
    throw internal_error("quadraticity: witness identity failed verification");
  return out;
}

bool verify_quadraticity_witness(const KuranishiPresentation& k, const QuadraticityWitness& w) {
  for (int i = 0; i < k.m; ++i) {
    TruncatedSeries lhs(k.n, k.order);
    for (int j = 0; j < k.m; ++j) lhs = lhs + w.a[i][j] * k.relations[j].homogeneous_part(2);
    TruncatedSeries rhs = k.relations[i].substitute(w.phi);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

}  // namespace linf
