// Contractions, Hodge-induced contractions and the homotopy transfer theorem.
//
// The transferred structure and the inclusion-side morphism follow the
// side-condition recursion (f_n and r_n from Theta_n); the projection-side
// morphism is assembled arity by arity against the graded-symmetrized
// tensor-trick homotopy. Every identity the theorem promises is asserted
// exactly before a result is returned.
#pragma once

#include <linf/linfty.hpp>

namespace linf {

struct Contraction {
  GradedSpace big;    // V
  GradedSpace small;  // W
  GradedMap f;        // W -> V, degree 0
  GradedMap g;        // V -> W, degree 0
  GradedMap h;        // V -> V, degree -1
  GradedMap r1;       // induced differential g q1 f on W

  // Checks gf = id, fg = id + q1 h + h q1, gh = h h = h f = 0 and that f, g
  // chain-commute with (q1, r1). Throws on violation.
  void validate(const GradedMap& q1) const;
};

// Contraction of (V, q1) onto (H, 0) from a Hodge splitting; the homotopy
// inverts q1 from W onto B.
Contraction contraction_from_split(const GradedSpace& v, const GradedMap& q1, const CohomologyData& coh);
Contraction contraction_from_hodge(const LInftyAlgebra& a);

struct TransferResult {
  LInftyAlgebra transferred;  // (W, R)
  LInftyMorphism into_big;    // F: (W,R) -> (V,Q), f1 = f
  LInftyMorphism onto_small;  // G: (V,Q) -> (W,R), g1 = g, G o F = id
};

TransferResult homotopy_transfer(const LInftyAlgebra& a, const Contraction& c);

struct MinimalModelResult {
  LInftyAlgebra model;        // minimal (r1 = 0)
  LInftyMorphism into_big;    // weak equivalence
  LInftyMorphism onto_small;
  CohomologyData coh;
};

MinimalModelResult minimal_model(const LInftyAlgebra& a);

// Same recursion against a caller-supplied Hodge splitting (the equivariant
// module passes Reynolds-averaged complements).
MinimalModelResult minimal_model_with_split(const LInftyAlgebra& a, const CohomologyData& coh);

// Graded-symmetrized tensor-trick homotopy on words of V: pi o H_T o iota,
// H_T = sum (fg)^a x h x 1^b. Exposed for the transfer tests.
WordCombo symmetric_homotopy(const Contraction& c, const SymWord& w);

}  // namespace linf
