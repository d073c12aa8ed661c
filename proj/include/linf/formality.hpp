// The gauge algorithm: kill higher Taylor coefficients of a minimal model one
// arity at a time by conjugating with exponentials, or report the obstruction.
// Plus the degrees-{0,1} equivalence with quadraticity, in both directions.
#pragma once

#include <linf/kuranishi.hpp>
#include <linf/transfer.hpp>

namespace linf {

struct GaugeStep {
  bool solvable = false;
  MultiBracket alpha;        // arity k-1, degree 0, with [r2, alpha] = r_k
  std::string obstruction;   // cokernel representative of r_k when unsolvable
};

// Solves [r2, alpha_{k-1}]_NR = r_k for a minimal structure of gap shape
// (0, r2, 0, ..., 0, r_k, ...).
GaugeStep gauge_step(const Coderivation& r, int k);

struct FormalityCertificate {
  bool formal = false;
  int obstruction_arity = 0;
  std::string obstruction;
  std::vector<MultiBracket> gauges;  // the alpha_{k-1} actually used
  CoalgMorphism iso;                 // (H, R) -> (H, r2), linear part id
  Coderivation target;               // (0, r2, 0, ...)
};

// Iterates gauge_step and conjugation from arity 3 up to the truncation.
FormalityCertificate formality_certificate(const LInftyAlgebra& minimal);

struct QuadraticityFormality {
  KuranishiPresentation presentation;
  QuadraticityResult quadraticity;
  bool formal = false;
  CoalgMorphism iso;          // (H, R) -> (H, r2) from the dualized witness
  Coderivation target;
  MorphismReport dual_check;  // the dualized morphism (H, r2) -> (H, R)
  MorphismReport iso_check;
};

// Theorem-level route for H concentrated in degrees {0,1}: quadraticity
// witness (A, phi) dualized into Taylor coefficients, then inverted.
QuadraticityFormality formality_from_quadraticity(const LInftyAlgebra& minimal, int order);

// The structure (0, r2, 0, ...) that certificates target.
Coderivation quadratic_target(const LInftyAlgebra& minimal);

}  // namespace linf
