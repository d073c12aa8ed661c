#include <doctest.h>

#include <linf/graded.hpp>

#include "test_util.hpp"

using namespace linf;
using linf_test::Rng;

namespace {

GradedSpace q3() { return GradedSpace({"a", "b", "c"}, {0, 0, 0}); }

// independent dense product oracle
Mat naive_product(const Mat& a, const Mat& b) {
  Mat out = mat_zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

// independent rank oracle: forward elimination, count nonzero rows
Eigen::Index naive_rank(Mat m) {
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < m.cols() && r < m.rows(); ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    m.row(piv).swap(m.row(r));
    for (Eigen::Index i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const Rational f = m(i, c) / m(r, c);
      m.row(i) -= m.row(r) * f;
    }
    ++r;
  }
  return r;
}

}  // namespace

TEST_CASE("compose: identities and d^2 = 0") {
  GradedSpace v = q3();
  GradedMap id = GradedMap::identity(v);
  CHECK(compose(id, id).matrix() == mat_identity(3));

  // two-term complex with an exact pair: d^2 = 0 composes to zero
  GradedSpace w({"x", "y"}, {0, 1});
  Mat d = mat_zero(2, 2);
  d(1, 0) = 7;
  GradedMap dm(w, w, 1, d);
  CHECK(compose(dm, dm).is_zero());
}

TEST_CASE("compose: random rational products match the dense oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    GradedSpace v = q3();
    Mat a(3, 3), b(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a(i, j) = rng.rational(9, 7);
        b(i, j) = rng.rational(9, 7);
      }
    GradedMap am(v, v, 0, a), bm(v, v, 0, b);
    CHECK(compose(am, bm).matrix() == naive_product(a, b));
  }
}

TEST_CASE("kernel_image: trivial cases") {
  GradedSpace v = q3();
  auto ki_zero = kernel_image(GradedMap::zero(v, v, 0));
  CHECK(ki_zero.kernel.cols() == 3);
  CHECK(ki_zero.image.cols() == 0);

  GradedSpace w({"x", "y"}, {0, 0});
  auto ki_id = kernel_image(GradedMap::identity(w));
  CHECK(ki_id.kernel.cols() == 0);
  CHECK(ki_id.image.cols() == 2);
}

TEST_CASE("kernel_image: rank-one example") {
  GradedSpace w({"x", "y"}, {0, 0});
  Mat m(2, 2);
  m << 1, 1, 2, 2;
  auto ki = kernel_image(GradedMap(w, w, 0, m));
  CHECK(ki.kernel.cols() == 1);
  CHECK(ki.image.cols() == 1);
  CHECK((m * ki.kernel).isZero(0));
}

TEST_CASE("kernel_image: rank-nullity on 200 randomized maps, dims <= 8") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = rng.uniform(1, 8), cols = rng.uniform(1, 8);
    Mat m = mat_zero(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (rng.chance(60)) m(i, j) = rng.rational(5, 4);
    Mat k = kernel_basis(m);
    Mat img = image_basis(m);
    CHECK(k.cols() + img.cols() == cols);
    CHECK((m * k).isZero(0));
    CHECK(img.cols() == naive_rank(m));
    CHECK(naive_rank(k) == k.cols());
  }
}

TEST_CASE("koszul_sign: fixed examples") {
  // swap of two evens
  CHECK(koszul_sign({1, 0}, {0, 2}) == rat(1));
  // swap of two odds
  CHECK(koszul_sign({1, 0}, {1, 3}) == rat(-1));
  // 3-cycle pulling the even letter to the front on degrees (1,1,0)
  CHECK(koszul_sign({2, 0, 1}, {1, 1, 0}) == rat(1));
}

TEST_CASE("koszul_sign: agrees with transposition decomposition") {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform(2, 6);
    std::vector<int> degs(n);
    for (int& d : degs) d = rng.uniform(-2, 3);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform(0, i)]);
    // oracle: bubble the permutation back to the identity, multiplying the
    // Koszul factor of each adjacent transposition
    std::vector<int> work = perm;
    Rational sign = rat(1);
    for (size_t i = 1; i < work.size(); ++i)
      for (size_t j = i; j > 0 && work[j] < work[j - 1]; --j) {
        if ((degs[work[j]] & 1) && (degs[work[j - 1]] & 1)) sign = -sign;
        std::swap(work[j], work[j - 1]);
      }
    CHECK(koszul_sign(perm, degs) == sign);
  }
}

TEST_CASE("koszul_sign: group homomorphism on all-odd degrees") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform(2, 5);
    std::vector<int> degs(n, 1);
    auto random_perm = [&]() {
      std::vector<int> p(n);
      for (int i = 0; i < n; ++i) p[i] = i;
      for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.uniform(0, i)]);
      return p;
    };
    auto p = random_perm(), q = random_perm();
    std::vector<int> pq(n);
    for (int i = 0; i < n; ++i) pq[i] = q[p[i]];
    CHECK(koszul_sign(pq, degs) == koszul_sign(p, degs) * koszul_sign(q, degs));
  }
}

TEST_CASE("cohomology: zero differential keeps everything") {
  GradedSpace v({"a", "b", "c"}, {0, 1, 2});
  auto coh = cohomology(v, GradedMap::zero(v, v, 1));
  CHECK(coh.H.dim() == 3);
  CHECK(compose(coh.project, coh.include).matrix() == mat_identity(3));
}

TEST_CASE("cohomology: acyclic two-term complex") {
  GradedSpace v({"x", "y"}, {0, 1});
  Mat d = mat_zero(2, 2);
  d(1, 0) = 1;
  auto coh = cohomology(v, GradedMap(v, v, 1, d));
  CHECK(coh.H.dim() == 0);
}

TEST_CASE("cohomology: interval cover complex has H^0 = Q, H^1 = 0") {
  // 0 -> Q^2 -> Q -> 0, (a, b) -> a - b
  GradedSpace v({"s0", "s1", "t"}, {0, 0, 1});
  Mat d = mat_zero(3, 3);
  d(2, 0) = 1;
  d(2, 1) = -1;
  auto coh = cohomology(v, GradedMap(v, v, 1, d));
  REQUIRE(coh.H.dim() == 1);
  CHECK(coh.H.degree(0) == 0);
  // rank-nullity oracle: dim H^0 = 2 - rank(d), dim H^1 = 1 - rank(d)
  CHECK(naive_rank(d) == 1);
}

TEST_CASE("cohomology: idempotent in dimension") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform(2, 6);
    std::vector<std::string> names;
    std::vector<int> degs;
    for (int i = 0; i < n; ++i) {
      names.push_back("v" + std::to_string(i));
      degs.push_back(rng.uniform(0, 2));
    }
    GradedSpace v(names, degs);
    // random differential: d nonzero only degree i -> i+1, then force d^2 = 0
    // by zeroing the composite obstruction via construction: d on degree 0
    // chosen free, d on degree 1 chosen inside ker(d already built)? simplest:
    // pick d with image in degree 1 only from degree 0, rest zero.
    Mat d = mat_zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (v.degree(i) == 1 && v.degree(j) == 0 && rng.chance(50)) d(i, j) = rng.rational(3, 2);
    auto coh = cohomology(v, GradedMap(v, v, 1, d));
    auto again = cohomology(coh.H, GradedMap::zero(coh.H, coh.H, 1));
    CHECK(again.H.dim() == coh.H.dim());
  }
}

TEST_CASE("cohomology: splitting is exact on a random 6-dimensional complex") {
  // d: two degree-0 generators hit two of the degree-1 generators
  GradedSpace v({"a", "b", "c", "p", "q", "r"}, {0, 0, 0, 1, 1, 1});
  Mat d = mat_zero(6, 6);
  d(3, 0) = 2;
  d(4, 0) = 1;
  d(3, 1) = -1;
  d(4, 1) = 3;
  auto coh = cohomology(v, GradedMap(v, v, 1, d));
  // dims: rank d = 2, so H^0 = 1, H^1 = 1
  REQUIRE(coh.H.dim() == 2);
  CHECK(coh.H.degree(0) == 0);
  CHECK(coh.H.degree(1) == 1);
  // g f = id and the splitting blocks fill each slice
  CHECK(compose(coh.project, coh.include).matrix() == mat_identity(2));
  for (int deg : v.degrees_present()) {
    const auto& sp = coh.split.at(deg);
    CHECK(sp.B.cols() + sp.H.cols() + sp.W.cols() ==
          static_cast<Eigen::Index>(v.indices_of_degree(deg).size()));
  }
}
