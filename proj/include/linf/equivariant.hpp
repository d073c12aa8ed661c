// Finite group actions on graded spaces: Reynolds operators, isotypic
// decomposition and support, equivariant Hodge/transfer/gauge, and the K/M
// construction with the morphism extension over the degree-zero part.
#pragma once

#include <linf/formality.hpp>

namespace linf {

struct FiniteGroup {
  std::vector<std::string> elements;
  std::vector<std::vector<int>> table;  // table[a][b] = index of a*b
  std::vector<int> generators;
  int identity = -1;

  int size() const { return static_cast<int>(elements.size()); }
  int mul(int a, int b) const { return table.at(a).at(b); }
  int inverse(int a) const;
  void validate();  // associativity, identity, inverses, generators generate

  // conjugacy classes, by first-appearance order
  std::vector<int> class_of_element() const;
};

struct CharacterTable {
  std::vector<std::string> labels;
  Mat values;  // one row per label, one column per group element

  // class-constancy and orthogonality: <chi_i, chi_j> = 0 for i != j and a
  // positive integer on the diagonal (Q-irreducible rows).
  void validate(const FiniteGroup& g) const;
};

struct GroupAction {
  FiniteGroup group;
  GradedSpace space;
  std::vector<Mat> rho;  // per element
  std::optional<CharacterTable> characters;

  void validate() const;  // homomorphism, degree-preserving, invertible
  const Mat& act(int g) const { return rho.at(g); }
  Mat act_inverse(int g) const { return rho.at(group.inverse(g)); }
  bool trivial() const { return group.size() == 1; }
};

GroupAction trivial_action(const GradedSpace& v);

// (1/|G|) sum_g rho(g) m rho(g)^{-1} on endomorphism-type maps.
GradedMap reynolds_average(const GroupAction& a, const GradedMap& m);

// (1/|G|) sum_g g . q with (g.q)(x_1..x_n) = g q(g^{-1}x_1, ..., g^{-1}x_n).
MultiBracket reynolds_average(const GroupAction& a, const MultiBracket& q);

bool is_equivariant(const GroupAction& a, const GradedMap& m);
// checked on generators, over all words up to the bracket's arity
bool is_equivariant(const GroupAction& a, const MultiBracket& q);
bool is_equivariant(const GroupAction& a, const Coderivation& q);
// f: a.space -> b.space intertwines the two actions (same group)
bool is_equivariant_morphism(const GroupAction& a, const GroupAction& b, const CoalgMorphism& f);

struct IsotypicComponent {
  std::string label;
  Mat basis;  // columns in V
};

// Central-idempotent images; components sum directly to V.
std::vector<IsotypicComponent> isotypic_decomposition(const GroupAction& a);

// labels with nonzero isotypic component
std::vector<std::string> support(const GroupAction& a);

// induced action on an invariant subspace given by basis columns
GroupAction restrict_action(const GroupAction& a, const GradedSpace& sub, const Mat& basis);
// induced action on V / span(u-columns); returns the quotient basis too
std::pair<GroupAction, Mat> quotient_action(const GroupAction& a, const Mat& u);

struct EquivariantLInfty {
  LInftyAlgebra algebra;
  GroupAction action;

  void validate() const;  // action shapes + equivariance of the structure
};

struct EquivariantMinimalModel {
  MinimalModelResult mm;
  GroupAction h_action;  // induced action on tangent cohomology
};

// Reynolds-averaged Hodge complements, then the standard transfer; the
// transferred structure and both morphisms are checked equivariant on
// generators before returning.
EquivariantMinimalModel equivariant_minimal_model(const EquivariantLInfty& a);

// Gauge algorithm with Reynolds-averaged gauges; the certificate is
// equivariant, and plain/equivariant verdicts always agree.
FormalityCertificate equivariant_formality(const LInftyAlgebra& minimal, const GroupAction& h_action);

struct KMResult {
  GradedSpace g_space;   // the degree-0 part, abstract basis
  DGLieAlgebra k;        // strictly positive degrees
  DGLieAlgebra m;        // iota(g) + K
  GradedMap include_k;   // K -> L
  GradedMap include_m;   // M -> L
  Mat k_in_m;            // columns of K basis inside M coordinates
  std::vector<int> g_in_m;  // positions of the g-part inside M
};

// K^i = 0 for i <= 0, K^1 an invariant complement of B^1 in L^1, K^i = L^i
// beyond; M = iota(g) + K. Both closed under d and bracket, inclusion into L
// a quasi-isomorphism; all verified exactly.
KMResult build_K_M(const DGLieAlgebra& l, const GroupAction& action, const GradedMap& iota);

struct ExtendedMorphism {
  LInftyAlgebra source;   // (g[1] + H(K)[1], R)
  LInftyMorphism morphism;  // into M[1]
  MorphismReport report;
};

// Extends a weak equivalence H(K)[1] -> K[1] over the degree-zero part by
// iota, with vanishing mixed coefficients.
ExtendedMorphism extend_morphism_over_g(const LInftyMorphism& f_tilde, const KMResult& km, int max_arity);

}  // namespace linf
