// L-infinity[1] algebras and morphisms: structure and morphism checkers, the
// DG-Lie dictionary, the induced bracket on tangent cohomology, products.
#pragma once

#include <linf/coderivation.hpp>

#include <optional>

namespace linf {

struct StructureReport {
  bool ok = true;
  int arity = 0;       // first failing arity when !ok
  SymWord word;        // witness word
  std::string detail;
};

struct MorphismReport {
  bool ok = true;
  int arity = 0;
  SymWord word;
  std::string detail;
};

// Diagnostic: first Taylor coefficient of Q o Q that fails to vanish.
StructureReport check_coderivation_squares_to_zero(const Coderivation& q);

class LInftyAlgebra {
 public:
  // Validates degree +1, q_0 = 0 and Q o Q = 0 through the truncation arity.
  LInftyAlgebra(GradedSpace space, Coderivation q);

  const GradedSpace& space() const { return space_; }
  const Coderivation& q() const { return q_; }
  int max_arity() const { return q_.max_arity(); }
  GradedMap differential() const;  // q_1 as a graded map
  bool is_minimal() const { return q_.arity_is_zero(1); }
  bool is_abelian() const { return q_.is_zero(); }

 private:
  GradedSpace space_;
  Coderivation q_;
};

StructureReport check_structure(const LInftyAlgebra& a);

// Coefficientwise check of F o Q = R o F through the truncation arity.
MorphismReport check_morphism(const CoalgMorphism& f, const Coderivation& q_source,
                              const Coderivation& r_target);

struct LInftyMorphism {
  CoalgMorphism map;
  Coderivation q_source;
  Coderivation r_target;
};

MorphismReport check_morphism(const LInftyMorphism& f);

// Whether f_1 induces an isomorphism on tangent cohomology in every degree.
bool is_weak_equivalence(const LInftyMorphism& f);

// A DG-Lie algebra on an unshifted graded space. The bracket is stored on
// ordered index pairs; evaluation uses graded antisymmetry.
class DGLieAlgebra {
 public:
  DGLieAlgebra(GradedSpace space, GradedMap d);

  const GradedSpace& space() const { return space_; }
  const GradedMap& d() const { return d_; }

  // Sets [x_i, x_j] for i <= j; [x,x] of even x must be zero.
  void set_bracket(int i, int j, Vec value);
  Vec bracket(int i, int j) const;           // any order, signs handled
  Vec bracket(const Vec& x, const Vec& y) const;

  // d^2 = 0 holds by construction of d; checks antisymmetry bookkeeping,
  // Leibniz and graded Jacobi exactly. Throws validation_error on failure.
  void validate() const;

 private:
  GradedSpace space_;
  GradedMap d_;
  std::map<std::pair<int, int>, Vec> bracket_;  // keys i <= j
};

// The L-infinity[1] algebra on L[1]: q1 = -d, q2(x, y) = (-1)^{|x|}[x, y].
LInftyAlgebra from_dgla(const DGLieAlgebra& l, int max_arity);

// r2 on tangent cohomology via the deterministic Hodge splitting; the result
// satisfies [r2, r2]_NR = 0.
MultiBracket induced_bracket(const LInftyAlgebra& a);

// Direct product: mixed Taylor coefficients vanish.
LInftyAlgebra product(const LInftyAlgebra& a, const LInftyAlgebra& b);

GradedMap linear_coefficient(const Coderivation& q);

}  // namespace linf
