// Kuranishi presentations from minimal models, multiplicity bookkeeping and
// the quadraticity decision with its (A, phi) witness.
#pragma once

#include <linf/linfty.hpp>
#include <linf/series.hpp>

namespace linf {

struct KuranishiPresentation {
  int n = 0;      // dim H^0, number of variables
  int m = 0;      // dim H^1, number of relations
  int order = 0;  // truncation order of the relations
  std::vector<TruncatedSeries> relations;  // m series in n variables
  std::vector<std::string> var_names;      // x1..xn
  std::vector<std::string> source_h0, source_h1;  // basis names in the model

  void validate() const;  // multiplicities >= 2
  std::string canonical_text() const;
};

// Relations f_j = sum_I (r^j_I / I!) x^I from the Taylor coefficients of a
// minimal structure restricted to (H^0)-words and projected to H^1.
// Requires order <= truncation arity.
KuranishiPresentation kuranishi_from_minimal(const LInftyAlgebra& minimal, int order);

struct TangentObstruction {
  int tangent_dim = 0;                       // dim H^0
  std::vector<TruncatedSeries> primary_obstruction;  // quadratic parts, one per H^1 basis vector
};

TangentObstruction tangent_obstruction(const LInftyAlgebra& minimal, int order = 2);

struct QuadraticityWitness {
  // sum_j a[i][j] * f_j^(2) = phi(f_i) with a == Id mod m, phi linear part id
  std::vector<std::vector<TruncatedSeries>> a;
  std::vector<TruncatedSeries> phi;  // images of the variables
};

struct QuadraticityResult {
  bool quadratic = false;
  int order = 0;                 // certified through this order
  int obstruction_degree = 0;    // first obstructed degree when not quadratic
  std::string obstruction_note;
  std::optional<QuadraticityWitness> witness;
  bool ideal_equal_on_the_nose = false;  // diagnostic: (f) == (f^(2)) without phi
};

QuadraticityResult quadraticity_check(const KuranishiPresentation& k);

// Direct check of the witness identity by truncated arithmetic.
bool verify_quadraticity_witness(const KuranishiPresentation& k, const QuadraticityWitness& w);

}  // namespace linf
