// The symmetric coalgebra S^c(V) through a truncation arity: normalized
// symmetric words, graded-symmetric multibrackets, coderivations via Taylor
// coefficients, the Nijenhuis-Richardson bracket, coalgebra morphisms,
// exponentials of weight-raising coderivations and conjugation.
//
// Sign authority: Koszul signs are computed from the degrees in V itself (the
// shifted space). Extensions apply operators to the leading block of an
// unshuffle, so the only signs are the unshuffle and normalization signs.
#pragma once

#include <linf/graded.hpp>

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace linf {

// Multiset of basis indices, kept sorted. A word with a repeated odd-degree
// letter is zero and never stored.
struct SymWord {
  std::vector<int> letters;

  int arity() const { return static_cast<int>(letters.size()); }
  bool operator<(const SymWord& o) const { return letters < o.letters; }
  bool operator==(const SymWord& o) const { return letters == o.letters; }
  std::string str(const GradedSpace& v) const;
};

int word_degree(const SymWord& w, const GradedSpace& v);

struct NormalizedWord {
  SymWord word;
  Rational sign;  // 0 when the word dies (repeated odd letter)
};

NormalizedWord normalize_word(std::vector<int> seq, const GradedSpace& v);

// All normalized words of the given length, lexicographically.
std::vector<SymWord> enumerate_words(const GradedSpace& v, int length);

// Linear combination of symmetric words.
using WordCombo = std::map<SymWord, Rational>;

void add_to(WordCombo& c, const SymWord& w, const Rational& coeff);

// A graded-symmetric multilinear map V^{sym n} -> target of fixed degree,
// stored on normalized words only.
class MultiBracket {
 public:
  MultiBracket() = default;
  MultiBracket(GradedSpace source, GradedSpace target, int arity, int degree);

  const GradedSpace& source() const { return source_; }
  const GradedSpace& target() const { return target_; }
  int arity() const { return arity_; }
  int degree() const { return degree_; }
  bool is_zero() const;
  const std::map<SymWord, Vec>& entries() const { return entries_; }

  // Replaces the value on a normalized word; validates degrees.
  void set(const SymWord& w, Vec value);
  void add(const SymWord& w, const Vec& value);

  Vec eval_word(const SymWord& w) const;          // lookup, word assumed normalized
  Vec eval_seq(const std::vector<int>& seq) const; // normalize then lookup
  Vec eval_args(const std::vector<Vec>& args) const; // full multilinear expansion

  MultiBracket operator+(const MultiBracket& o) const;
  MultiBracket operator-(const MultiBracket& o) const;
  MultiBracket scaled(const Rational& c) const;

 private:
  GradedSpace source_, target_;
  int arity_ = 0;
  int degree_ = 0;
  std::map<SymWord, Vec> entries_;
};

// A coderivation of S^c(V) given by Taylor coefficients q_0..q_N of a common
// degree; everything beyond the truncation arity N is jet-dropped.
class Coderivation {
 public:
  Coderivation() = default;
  Coderivation(GradedSpace space, int degree, int max_arity);

  const GradedSpace& space() const { return space_; }
  int degree() const { return degree_; }
  int max_arity() const { return max_arity_; }

  const MultiBracket& coeff(int arity) const { return coeffs_.at(arity); }
  MultiBracket& coeff(int arity) { return coeffs_.at(arity); }
  bool arity_is_zero(int arity) const { return arity > max_arity_ || coeffs_.at(arity).is_zero(); }
  int top_nonzero_arity() const;
  bool is_zero() const { return top_nonzero_arity() < 0; }

  Coderivation operator+(const Coderivation& o) const;
  Coderivation operator-(const Coderivation& o) const;
  Coderivation scaled(const Rational& c) const;

 private:
  GradedSpace space_;
  int degree_ = 0;
  int max_arity_ = 0;
  std::vector<MultiBracket> coeffs_;
};

// Q-hat applied to one word: sum over unshuffles of q_j on the leading block.
WordCombo apply_coderivation(const Coderivation& q, const SymWord& w);
WordCombo apply_coderivation(const Coderivation& q, const WordCombo& c);

// Arity-n Taylor coefficient of P o Q-hat.
MultiBracket compose_coefficient(const Coderivation& p, const Coderivation& q, int n);

// [P,Q]_NR = P o Q-hat - (-1)^{|P||Q|} Q o P-hat, through the common truncation.
Coderivation nr_bracket(const Coderivation& p, const Coderivation& q);

// A morphism of coaugmented coalgebras S^c(V) -> S^c(W) via Taylor
// coefficients f_1..f_N (degree 0).
class CoalgMorphism {
 public:
  CoalgMorphism() = default;
  CoalgMorphism(GradedSpace source, GradedSpace target, int max_arity);
  static CoalgMorphism identity(const GradedSpace& v, int max_arity);
  static CoalgMorphism strict(const GradedMap& f1, int max_arity);

  const GradedSpace& source() const { return source_; }
  const GradedSpace& target() const { return target_; }
  int max_arity() const { return max_arity_; }
  const MultiBracket& coeff(int arity) const { return coeffs_.at(arity); }
  MultiBracket& coeff(int arity) { return coeffs_.at(arity); }
  GradedMap linear_part() const;

 private:
  GradedSpace source_, target_;
  int max_arity_ = 0;
  std::vector<MultiBracket> coeffs_;  // index 1..N used
};

// F-hat on a word: sum over set partitions with the Koszul regrouping sign.
WordCombo apply_morphism(const CoalgMorphism& f, const SymWord& w);
WordCombo apply_morphism(const CoalgMorphism& f, const WordCombo& c);

// Taylor coefficients of g o f.
CoalgMorphism compose(const CoalgMorphism& g, const CoalgMorphism& f);

// Inverse of a morphism whose linear part is the identity matrix.
CoalgMorphism invert_unipotent(const CoalgMorphism& t);

// e^{alpha-hat} for a degree-0 coderivation with q_0 = q_1 = 0. The series is
// finite on every word because alpha strictly shortens words.
CoalgMorphism exponential(const Coderivation& alpha);

// Word-level action of e^{alpha-hat}; sign = -1 gives e^{-alpha-hat}.
WordCombo apply_exponential(const Coderivation& alpha, int sign, const SymWord& w);

// Taylor coefficients of e^{alpha-hat} Q e^{-alpha-hat}.
Coderivation conjugate(const Coderivation& q, const Coderivation& alpha);

// Length-one component of a combination.
Vec corestrict(const WordCombo& c, const GradedSpace& target);

// Combinatorics shared by the extension formulas, the transfer recursion and
// the test oracles.
void for_each_subset(int total, int size, const std::function<void(const std::vector<int>&)>& fn);
void for_each_set_partition(int m, const std::function<void(const std::vector<std::vector<int>>&)>& fn);
// Koszul sign of pulling the selected positions to the front, blocks keeping
// their internal order.
Rational unshuffle_sign(const SymWord& w, const std::vector<int>& sel, const GradedSpace& v);

}  // namespace linf
