// Finite-dimensional integer-graded spaces over the rationals, degree-homogeneous
// maps between them, Koszul signs and cohomology with chosen representatives.
#pragma once

#include <linf/linalg.hpp>

#include <map>
#include <string>
#include <vector>

namespace linf {

// User-facing validation failure (malformed input data).
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A broken internal invariant; never a user error.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

class GradedSpace {
 public:
  GradedSpace() = default;
  GradedSpace(std::vector<std::string> names, std::vector<int> degrees);

  int dim() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(i); }
  int degree(int i) const { return degrees_.at(i); }
  const std::vector<int>& degrees() const { return degrees_; }
  int index_of(const std::string& name) const;
  std::vector<int> indices_of_degree(int d) const;
  std::vector<int> degrees_present() const;

  bool operator==(const GradedSpace& o) const {
    return names_ == o.names_ && degrees_ == o.degrees_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<int> degrees_;
  std::map<std::string, int> index_;
};

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b,
                       const std::string& prefix_a = "", const std::string& prefix_b = "");

// Shift [1]: same names, degree lowered by one (V[1]^i = V^{i+1}).
GradedSpace shift(const GradedSpace& v, int by = 1);

class GradedMap {
 public:
  GradedMap() = default;
  // Validates that every nonzero entry respects target deg = source deg + deg.
  GradedMap(GradedSpace source, GradedSpace target, int degree, Mat matrix);

  static GradedMap zero(const GradedSpace& source, const GradedSpace& target, int degree);
  static GradedMap identity(const GradedSpace& v);

  const GradedSpace& source() const { return source_; }
  const GradedSpace& target() const { return target_; }
  int degree() const { return degree_; }
  const Mat& matrix() const { return matrix_; }

  Vec apply(const Vec& x) const { return matrix_ * x; }
  bool is_zero() const { return matrix_.isZero(0); }

  GradedMap operator+(const GradedMap& o) const;
  GradedMap operator-(const GradedMap& o) const;
  GradedMap scaled(const Rational& c) const { return GradedMap(source_, target_, degree_, matrix_ * c); }

 private:
  GradedSpace source_, target_;
  int degree_ = 0;
  Mat matrix_;
};

// a after b; degrees add.
GradedMap compose(const GradedMap& a, const GradedMap& b);

// Sign of permuting graded symbols: y_i = x_{perm[i]}; one factor (-1)^{|u||v|}
// per inversion.
Rational koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees);

// Koszul sign accumulated while stably sorting `items`; returns 0 for a repeated
// odd item (used by symmetric-word normalization).
Rational sort_with_koszul_sign(std::vector<int>& items, const std::vector<int>& item_degrees);

struct KernelImage {
  Mat kernel;  // columns: basis of ker
  Mat image;   // columns: basis of im
};

// Exact kernel and image bases of the underlying matrix.
KernelImage kernel_image(const GradedMap& a);

// The three sub-bases of one degree slice, as column blocks in V coordinates.
struct HodgeSplit {
  Mat B, H, W;
};

struct CohomologyData {
  GradedSpace H;
  GradedMap include;  // f: H -> V, degree 0
  GradedMap project;  // g: V -> H, degree 0
  std::map<int, HodgeSplit> split;  // per degree of V
};

// Hodge-style splitting of (V, d), d of degree +1 with d^2 = 0. Deterministic:
// every complement comes from lexicographic pivoting.
CohomologyData cohomology(const GradedSpace& v, const GradedMap& d);

// Builds H, the inclusion and the projection from per-degree splittings
// (columns in slice coordinates; B + H + W must fill each slice).
CohomologyData assemble_cohomology_data(const GradedSpace& v, std::map<int, HodgeSplit> split);

}  // namespace linf
