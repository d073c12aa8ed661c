#include <doctest.h>

#include <linf/coderivation.hpp>

#include "test_util.hpp"

#include <functional>

using namespace linf;
using linf_test::Rng;

namespace {

// Independent oracle for the coderivation extension: the full permutation sum
// with 1/(j! (m-j)!) weights instead of the unshuffle enumeration.
WordCombo oracle_extend(const Coderivation& q, const SymWord& w) {
  WordCombo out;
  const GradedSpace& v = q.space();
  const int m = w.arity();
  std::vector<int> degs(m);
  for (int i = 0; i < m; ++i) degs[i] = v.degree(w.letters[i]);
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end());
  do {
    const Rational eps = koszul_sign(perm, degs);
    for (int j = 0; j <= m; ++j) {
      if (q.arity_is_zero(j) || m - j + 1 > q.max_arity()) continue;
      Rational weight(1);
      for (int t = 2; t <= j; ++t) weight *= t;
      for (int t = 2; t <= m - j; ++t) weight *= t;
      std::vector<int> head;
      for (int i = 0; i < j; ++i) head.push_back(w.letters[perm[i]]);
      Vec val = q.coeff(j).eval_seq(head);
      if (val.isZero(0)) continue;
      for (int b = 0; b < v.dim(); ++b) {
        if (val(b) == 0) continue;
        std::vector<int> seq{b};
        for (int i = j; i < m; ++i) seq.push_back(w.letters[perm[i]]);
        NormalizedWord nw = normalize_word(seq, v);
        if (nw.sign == 0) continue;
        add_to(out, nw.word, eps * val(b) * nw.sign / weight);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

GradedSpace random_space(Rng& rng, int max_dim, int deg_lo = -1, int deg_hi = 2) {
  const int n = rng.uniform(1, max_dim);
  std::vector<std::string> names;
  std::vector<int> degs;
  for (int i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i));
    degs.push_back(rng.uniform(deg_lo, deg_hi));
  }
  return GradedSpace(names, degs);
}

Coderivation random_coderivation(Rng& rng, const GradedSpace& v, int degree, int cap, int density = 35) {
  Coderivation q(v, degree, cap);
  for (int n = 1; n <= cap; ++n) {
    for (const SymWord& w : enumerate_words(v, n)) {
      const int out_deg = word_degree(w, v) + degree;
      Vec val = Vec::Zero(v.dim());
      bool nz = false;
      for (int t = 0; t < v.dim(); ++t)
        if (v.degree(t) == out_deg && rng.chance(density)) {
          val(t) = rng.rational(4, 3);
          nz = nz || val(t) != 0;
        }
      if (nz) q.coeff(n).set(w, std::move(val));
    }
  }
  return q;
}

bool coderivations_equal(const Coderivation& a, const Coderivation& b) {
  for (int n = 0; n <= a.max_arity(); ++n)
    if (!(a.coeff(n) - b.coeff(n)).is_zero()) return false;
  return true;
}

WordCombo combo_sub(WordCombo a, const WordCombo& b) {
  for (const auto& [w, c] : b) add_to(a, w, -c);
  return a;
}

}  // namespace

TEST_CASE("extension: Leibniz shape on a length-2 word with q1 only") {
  GradedSpace v({"x", "y", "z"}, {0, 1, 1});
  Coderivation q(v, 1, 3);
  // q1: x -> y
  Vec qx = Vec::Zero(3);
  qx(1) = 1;
  q.coeff(1).set(SymWord{{0}}, qx);
  WordCombo ext = apply_coderivation(q, SymWord{{0, 2}});  // x (.) z
  // q1(x) (.) z only (q1 z = 0): y (.) z with sign +1
  REQUIRE(ext.size() == 1);
  CHECK(ext.begin()->first == SymWord{{1, 2}});
  CHECK(ext.begin()->second == rat(1));
}

TEST_CASE("extension: top coefficient on a full-length word") {
  GradedSpace v({"x", "y", "z"}, {0, 0, 1});
  Coderivation q(v, 1, 3);
  Vec val = Vec::Zero(3);
  val(2) = rat(5, 2);
  q.coeff(2).set(SymWord{{0, 1}}, val);
  WordCombo ext = apply_coderivation(q, SymWord{{0, 1}});
  REQUIRE(ext.size() == 1);
  CHECK(ext.begin()->first == SymWord{{2}});
  CHECK(ext.begin()->second == rat(5, 2));
}

TEST_CASE("extension: matches the permutation-sum oracle on random data") {
  Rng rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    GradedSpace v = random_space(rng, 4);
    Coderivation q = random_coderivation(rng, v, rng.uniform(0, 1), 4);
    for (int len = 1; len <= 4; ++len)
      for (const SymWord& w : enumerate_words(v, len)) {
        WordCombo a = apply_coderivation(q, w);
        WordCombo b = oracle_extend(q, w);
        CHECK(combo_sub(a, b).empty());
      }
  }
}

TEST_CASE("extension followed by corestriction recovers the Taylor coefficients") {
  Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    GradedSpace v = random_space(rng, 4);
    Coderivation q = random_coderivation(rng, v, 1, 4);
    for (int len = 1; len <= 4; ++len)
      for (const SymWord& w : enumerate_words(v, len)) {
        Vec lhs = corestrict(apply_coderivation(q, w), v);
        CHECK(lhs == q.coeff(len).eval_word(w));
      }
  }
}

TEST_CASE("nr_bracket: [Q,Q] of a differential is 2 q1 q1") {
  GradedSpace v({"a", "b", "c"}, {0, 1, 2});
  Coderivation q(v, 1, 3);
  Mat d = mat_zero(3, 3);
  d(1, 0) = 1;
  d(2, 1) = 3;  // d^2 != 0 on purpose
  for (int i = 0; i < 3; ++i) {
    Vec col = d.col(i);
    if (!col.isZero(0)) q.coeff(1).set(SymWord{{i}}, col);
  }
  Coderivation br = nr_bracket(q, q);
  CHECK(br.arity_is_zero(2));
  CHECK(br.arity_is_zero(3));
  Mat dd = d * d;
  for (int i = 0; i < 3; ++i) CHECK(br.coeff(1).eval_word(SymWord{{i}}) == Vec(2 * dd.col(i)));
}

TEST_CASE("nr_bracket: graded antisymmetry on random pairs") {
  Rng rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    GradedSpace v = random_space(rng, 4);
    const int dp = rng.uniform(0, 1), dq = rng.uniform(0, 1);
    Coderivation p = random_coderivation(rng, v, dp, 3);
    Coderivation q = random_coderivation(rng, v, dq, 3);
    Coderivation lhs = nr_bracket(p, q);
    Coderivation rhs = nr_bracket(q, p).scaled(rat(((dp * dq) & 1) ? 1 : -1));
    CHECK(coderivations_equal(lhs, rhs));
  }
}

TEST_CASE("nr_bracket: arity-2 coefficient of [q1-only, q2-only] against the composition oracle") {
  Rng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    GradedSpace v = random_space(rng, 3);
    Coderivation p(v, 1, 3);  // q1 only
    Coderivation r(v, 1, 3);  // q2 only
    {
      Coderivation tmp = random_coderivation(rng, v, 1, 1, 60);
      p.coeff(1) = tmp.coeff(1);
      Coderivation tmp2 = random_coderivation(rng, v, 1, 2, 60);
      r.coeff(2) = tmp2.coeff(2);
    }
    Coderivation br = nr_bracket(p, r);
    // oracle: corestriction of P o R-hat - (-1)^{1*1} R o P-hat via oracle_extend
    for (const SymWord& w : enumerate_words(v, 2)) {
      Vec acc = Vec::Zero(v.dim());
      for (const auto& [u, c] : oracle_extend(r, w))
        if (u.arity() <= 3) acc += p.coeff(u.arity()).eval_word(u) * c;
      for (const auto& [u, c] : oracle_extend(p, w))
        if (u.arity() <= 3) acc += r.coeff(u.arity()).eval_word(u) * c;
      CHECK(br.coeff(2).eval_word(w) == acc);
    }
  }
}

TEST_CASE("nr_bracket: graded Jacobi on randomized triples") {
  Rng rng(89);
  for (int trial = 0; trial < 15; ++trial) {
    GradedSpace v = random_space(rng, 3);
    const int da = rng.uniform(0, 1), db = rng.uniform(0, 1), dc = rng.uniform(0, 1);
    Coderivation a = random_coderivation(rng, v, da, 4, 25);
    Coderivation b = random_coderivation(rng, v, db, 4, 25);
    Coderivation c = random_coderivation(rng, v, dc, 4, 25);
    Coderivation lhs = nr_bracket(a, nr_bracket(b, c));
    Coderivation rhs = nr_bracket(nr_bracket(a, b), c) +
                       nr_bracket(b, nr_bracket(a, c)).scaled(rat(((da * db) & 1) ? -1 : 1));
    CHECK(coderivations_equal(lhs, rhs));
  }
}

TEST_CASE("exponential: zero gauge is the identity") {
  GradedSpace v({"x", "y"}, {0, 1});
  Coderivation alpha(v, 0, 4);
  CoalgMorphism e = exponential(alpha);
  CHECK(e.linear_part().matrix() == mat_identity(2));
  for (int n = 2; n <= 4; ++n) CHECK(e.coeff(n).is_zero());
}

TEST_CASE("exponential: single step on a length-2 word") {
  GradedSpace v({"x", "y"}, {0, 0});
  Coderivation alpha(v, 0, 4);
  Vec val = Vec::Zero(2);
  val(1) = rat(3);
  alpha.coeff(2).set(SymWord{{0, 0}}, val);  // alpha2(x,x) = 3y
  WordCombo e = apply_exponential(alpha, +1, SymWord{{0, 0}});
  CHECK(e.at(SymWord{{0, 0}}) == rat(1));
  CHECK(e.at(SymWord{{1}}) == rat(3));
}

TEST_CASE("exponential: truncated series oracle on length-3 words") {
  Rng rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    GradedSpace v = random_space(rng, 3, 0, 1);
    Coderivation alpha(v, 0, 4);
    Coderivation tmp = random_coderivation(rng, v, 0, 2, 60);
    alpha.coeff(2) = tmp.coeff(2);
    for (const SymWord& w : enumerate_words(v, 3)) {
      WordCombo expect;
      add_to(expect, w, rat(1));
      WordCombo a1 = apply_coderivation(alpha, w);
      for (const auto& [u, c] : a1) add_to(expect, u, c);
      WordCombo a2 = apply_coderivation(alpha, a1);
      for (const auto& [u, c] : a2) add_to(expect, u, c / 2);
      CHECK(combo_sub(apply_exponential(alpha, +1, w), expect).empty());
    }
  }
}

TEST_CASE("exponential composed with its inverse is the identity") {
  Rng rng(101);
  for (int trial = 0; trial < 15; ++trial) {
    GradedSpace v = random_space(rng, 3, 0, 1);
    Coderivation alpha = random_coderivation(rng, v, 0, 4, 30);
    alpha.coeff(1) = MultiBracket(v, v, 1, 0);  // strip the linear part
    CoalgMorphism e = exponential(alpha);
    CoalgMorphism em = exponential(alpha.scaled(rat(-1)));
    CoalgMorphism id = compose(e, em);
    CHECK(id.linear_part().matrix() == mat_identity(v.dim()));
    for (int n = 2; n <= 4; ++n) CHECK(id.coeff(n).is_zero());
  }
}

TEST_CASE("invert_unipotent inverts exponentials") {
  Rng rng(103);
  GradedSpace v = random_space(rng, 3, 0, 1);
  Coderivation alpha = random_coderivation(rng, v, 0, 4, 40);
  alpha.coeff(1) = MultiBracket(v, v, 1, 0);
  CoalgMorphism e = exponential(alpha);
  CoalgMorphism inv = invert_unipotent(e);
  CoalgMorphism expect = exponential(alpha.scaled(rat(-1)));
  for (int n = 1; n <= 4; ++n) CHECK((inv.coeff(n) - expect.coeff(n)).is_zero());
}

TEST_CASE("conjugate: zero gauge leaves the coderivation alone") {
  Rng rng(107);
  GradedSpace v = random_space(rng, 3);
  Coderivation q = random_coderivation(rng, v, 1, 4);
  Coderivation alpha(v, 0, 4);
  CHECK(coderivations_equal(conjugate(q, alpha), q));
}

TEST_CASE("conjugate: arity-3 coefficient against the operator-series oracle") {
  Rng rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    GradedSpace v = random_space(rng, 3, 0, 1);
    Coderivation q = random_coderivation(rng, v, 1, 4, 40);
    Coderivation alpha(v, 0, 4);
    Coderivation tmp = random_coderivation(rng, v, 0, 2, 50);
    alpha.coeff(2) = tmp.coeff(2);
    Coderivation conj = conjugate(q, alpha);
    for (const SymWord& w : enumerate_words(v, 3)) {
      // e^{a} Q e^{-a} via the independent exponential-series path
      WordCombo in = apply_exponential(alpha, -1, w);
      WordCombo mid;
      for (const auto& [u, c] : in)
        for (const auto& [x, c2] : oracle_extend(q, u)) add_to(mid, x, c * c2);
      Vec acc = Vec::Zero(v.dim());
      for (const auto& [u, c] : mid) {
        WordCombo fin = apply_exponential(alpha, +1, u);
        acc += corestrict(fin, v) * c;
      }
      CHECK(conj.coeff(3).eval_word(w) == acc);
    }
  }
}

TEST_CASE("conjugate is a Lie algebra automorphism of coderivations") {
  Rng rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    GradedSpace v = random_space(rng, 3, 0, 1);
    Coderivation p = random_coderivation(rng, v, 1, 4, 30);
    Coderivation q = random_coderivation(rng, v, 0, 4, 30);
    Coderivation alpha(v, 0, 4);
    Coderivation tmp = random_coderivation(rng, v, 0, 3, 40);
    alpha.coeff(2) = tmp.coeff(2);
    alpha.coeff(3) = tmp.coeff(3);
    Coderivation lhs = conjugate(nr_bracket(p, q), alpha);
    Coderivation rhs = nr_bracket(conjugate(p, alpha), conjugate(q, alpha));
    CHECK(coderivations_equal(lhs, rhs));
  }
}
