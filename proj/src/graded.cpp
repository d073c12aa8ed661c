#include <linf/graded.hpp>

#include <algorithm>
#include <set>

namespace linf {

GradedSpace::GradedSpace(std::vector<std::string> names, std::vector<int> degrees)
    : names_(std::move(names)), degrees_(std::move(degrees)) {
  if (names_.size() != degrees_.size())
    throw validation_error("graded space: names/degrees length mismatch");
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw validation_error("graded space: empty basis name");
    if (!index_.emplace(names_[i], static_cast<int>(i)).second)
      throw validation_error("graded space: duplicate basis name '" + names_[i] + "'");
  }
}

int GradedSpace::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw validation_error("unknown basis name '" + name + "'");
  return it->second;
}

std::vector<int> GradedSpace::indices_of_degree(int d) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (degrees_[i] == d) out.push_back(i);
  return out;
}

std::vector<int> GradedSpace::degrees_present() const {
  std::set<int> s(degrees_.begin(), degrees_.end());
  return std::vector<int>(s.begin(), s.end());
}

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b,
                       const std::string& prefix_a, const std::string& prefix_b) {
  std::vector<std::string> names;
  std::vector<int> degs;
  for (int i = 0; i < a.dim(); ++i) {
    names.push_back(prefix_a + a.name(i));
    degs.push_back(a.degree(i));
  }
  for (int i = 0; i < b.dim(); ++i) {
    names.push_back(prefix_b + b.name(i));
    degs.push_back(b.degree(i));
  }
  return GradedSpace(std::move(names), std::move(degs));
}

GradedSpace shift(const GradedSpace& v, int by) {
  std::vector<std::string> names;
  std::vector<int> degs;
  for (int i = 0; i < v.dim(); ++i) {
    names.push_back(v.name(i));
    degs.push_back(v.degree(i) - by);
  }
  return GradedSpace(std::move(names), std::move(degs));
}

GradedMap::GradedMap(GradedSpace source, GradedSpace target, int degree, Mat matrix)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
    throw validation_error("graded map: matrix shape mismatch");
  for (int j = 0; j < source_.dim(); ++j)
    for (int i = 0; i < target_.dim(); ++i)
      if (matrix_(i, j) != 0 && target_.degree(i) != source_.degree(j) + degree_)
        throw validation_error("graded map: entry " + target_.name(i) + " <- " + source_.name(j) +
                               " violates degree " + std::to_string(degree_));
}

GradedMap GradedMap::zero(const GradedSpace& source, const GradedSpace& target, int degree) {
  return GradedMap(source, target, degree, mat_zero(target.dim(), source.dim()));
}

GradedMap GradedMap::identity(const GradedSpace& v) {
  return GradedMap(v, v, 0, mat_identity(v.dim()));
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
  if (!(source_ == o.source_) || !(target_ == o.target_) || degree_ != o.degree_)
    throw validation_error("graded map sum: shape mismatch");
  return GradedMap(source_, target_, degree_, matrix_ + o.matrix_);
}

GradedMap GradedMap::operator-(const GradedMap& o) const {
  if (!(source_ == o.source_) || !(target_ == o.target_) || degree_ != o.degree_)
    throw validation_error("graded map difference: shape mismatch");
  return GradedMap(source_, target_, degree_, matrix_ - o.matrix_);
}

GradedMap compose(const GradedMap& a, const GradedMap& b) {
  if (!(a.source() == b.target())) throw validation_error("compose: space mismatch");
  return GradedMap(b.source(), a.target(), a.degree() + b.degree(), a.matrix() * b.matrix());
}

Rational koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees) {
  if (perm.size() != degrees.size()) throw validation_error("koszul_sign: length mismatch");
  int sign = 1;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j] && (degrees[perm[i]] & 1) && (degrees[perm[j]] & 1)) sign = -sign;
  return rat(sign);
}

Rational sort_with_koszul_sign(std::vector<int>& items, const std::vector<int>& item_degrees) {
  std::vector<int> degs = item_degrees;
  int sign = 1;
  // insertion sort; each adjacent swap of odd/odd flips the sign
  for (size_t i = 1; i < items.size(); ++i) {
    for (size_t j = i; j > 0 && items[j] < items[j - 1]; --j) {
      if ((degs[j] & 1) && (degs[j - 1] & 1)) sign = -sign;
      std::swap(items[j], items[j - 1]);
      std::swap(degs[j], degs[j - 1]);
    }
  }
  return rat(sign);
}

KernelImage kernel_image(const GradedMap& a) {
  return KernelImage{kernel_basis(a.matrix()), image_basis(a.matrix())};
}

CohomologyData assemble_cohomology_data(const GradedSpace& v, std::map<int, HodgeSplit> split) {
  std::vector<std::string> h_names;
  std::vector<int> h_degs;
  std::vector<Vec> h_reps;
  for (int deg : v.degrees_present()) {
    const auto idx = v.indices_of_degree(deg);
    const auto& sp = split.at(deg);
    for (Eigen::Index j = 0; j < sp.H.cols(); ++j) {
      h_names.push_back("h" + std::to_string(h_reps.size() + 1));
      h_degs.push_back(deg);
      Vec rep = Vec::Zero(v.dim());
      for (size_t i = 0; i < idx.size(); ++i) rep(idx[i]) = sp.H(static_cast<Eigen::Index>(i), j);
      h_reps.push_back(rep);
    }
  }

  GradedSpace h_space(h_names, h_degs);
  Mat f = Mat::Zero(v.dim(), h_space.dim());
  for (size_t j = 0; j < h_reps.size(); ++j) f.col(static_cast<Eigen::Index>(j)) = h_reps[j];

  // g: project along B + W. Per degree, express slice coordinates in the
  // [B | H | W] basis and keep the H block.
  Mat g = Mat::Zero(h_space.dim(), v.dim());
  int h_offset = 0;
  for (int deg : v.degrees_present()) {
    const auto idx = v.indices_of_degree(deg);
    const auto& sp = split.at(deg);
    const int n = static_cast<int>(idx.size());
    const int nb = static_cast<int>(sp.B.cols()), nh = static_cast<int>(sp.H.cols()), nw = static_cast<int>(sp.W.cols());
    if (nb + nh + nw != n) throw internal_error("cohomology: splitting does not fill the degree slice");
    Mat basis(n, n);
    if (nb) basis.leftCols(nb) = sp.B;
    if (nh) basis.middleCols(nb, nh) = sp.H;
    if (nw) basis.rightCols(nw) = sp.W;
    Mat coords = coordinates_in(basis, mat_identity(n));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < nh; ++i) g(h_offset + i, idx[j]) = coords(nb + i, j);
    h_offset += nh;
  }

  CohomologyData out{h_space,
                     GradedMap(h_space, v, 0, std::move(f)),
                     GradedMap(v, h_space, 0, std::move(g)),
                     std::move(split)};
  if (compose(out.project, out.include).matrix() != mat_identity(h_space.dim()))
    throw internal_error("cohomology: g f != id");
  return out;
}

CohomologyData cohomology(const GradedSpace& v, const GradedMap& d) {
  if (!(d.source() == v) || !(d.target() == v) || d.degree() != 1)
    throw validation_error("cohomology: differential must be degree +1 on V");
  {
    const Mat sq = d.matrix() * d.matrix();
    for (int j = 0; j < v.dim(); ++j)
      if (!sq.col(j).isZero(0))
        throw validation_error("cohomology: d*d != 0, first offending basis vector '" + v.name(j) + "'");
  }

  std::map<int, HodgeSplit> split;
  for (int deg : v.degrees_present()) {
    const auto idx = v.indices_of_degree(deg);
    const auto idx_prev = v.indices_of_degree(deg - 1);
    const int n = static_cast<int>(idx.size());

    // d restricted to this degree, as a map out of the slice
    Mat d_here(v.dim(), n);
    for (int j = 0; j < n; ++j) d_here.col(j) = d.matrix().col(idx[j]);
    Mat z_coords = kernel_basis(d_here);  // in slice coordinates

    // image of d from the previous degree, in slice coordinates
    Mat d_prev(v.dim(), static_cast<Eigen::Index>(idx_prev.size()));
    for (size_t j = 0; j < idx_prev.size(); ++j) d_prev.col(static_cast<Eigen::Index>(j)) = d.matrix().col(idx_prev[j]);
    Mat b_full = image_basis(d_prev);
    Mat b_coords(n, b_full.cols());
    for (int i = 0; i < n; ++i) b_coords.row(i) = b_full.row(idx[i]);

    // H: deterministic complement of B inside Z; W: complement of Z in the slice
    Mat h_coords = extend_basis(b_coords, z_coords);
    Mat zb(n, b_coords.cols() + h_coords.cols());
    if (b_coords.cols() > 0) zb.leftCols(b_coords.cols()) = b_coords;
    if (h_coords.cols() > 0) zb.rightCols(h_coords.cols()) = h_coords;
    Mat w_coords = extend_basis(zb, mat_identity(n));
    split[deg] = HodgeSplit{b_coords, h_coords, w_coords};
  }
  return assemble_cohomology_data(v, std::move(split));
}

}  // namespace linf
