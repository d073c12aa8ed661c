// Truncated formal power series over the rationals in finitely many variables.
// Arithmetic drops everything beyond the truncation order deterministically.
#pragma once

#include <linf/rational.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linf {

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& i);

class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(int nvars, int order);
  static TruncatedSeries variable(int nvars, int order, int i);
  static TruncatedSeries constant(int nvars, int order, const Rational& c);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  const std::map<MultiIndex, Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Rational coeff(const MultiIndex& i) const;
  void set_coeff(const MultiIndex& i, const Rational& c);  // drops overflow terms
  void add_coeff(const MultiIndex& i, const Rational& c);

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries scaled(const Rational& c) const;

  // degree-k slice
  TruncatedSeries homogeneous_part(int k) const;
  // lowest total degree with a nonzero coefficient; nullopt for the zero series
  std::optional<int> multiplicity() const;
  TruncatedSeries derivative(int var) const;

  // f(images[0], ..., images[n-1]); every image must have zero constant term
  // so that truncation commutes with composition.
  TruncatedSeries substitute(const std::vector<TruncatedSeries>& images) const;

  TruncatedSeries with_order(int new_order) const;

  // graded-lexicographic monomial order, exact rational coefficients
  std::string str(const std::vector<std::string>& var_names) const;

  bool operator==(const TruncatedSeries& o) const;

 private:
  int nvars_ = 0;
  int order_ = 0;
  std::map<MultiIndex, Rational> coeffs_;
};

// All exponent vectors of the given total degree, graded-lex order.
std::vector<MultiIndex> monomials_of_degree(int nvars, int degree);

std::string monomial_str(const MultiIndex& i, const std::vector<std::string>& var_names);

}  // namespace linf
