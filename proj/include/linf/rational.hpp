// Exact rational scalar for the whole engine. No floating point anywhere.
#pragma once

#include <gmpxx.h>
#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace linf {

// mpq_class keeps values canonical (gcd 1, positive denominator) as long as
// every entry point canonicalizes; arithmetic then preserves the form.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p/q" or "p/-q" with arbitrary-precision parts.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
      throw std::invalid_argument("bad rational literal: " + s);
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace linf

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 100,
    MulCost = 80
  };
};

namespace internal {
// gmpxx returns expression templates; pin the result type for Eigen's scorer.
template <>
struct scalar_score_coeff_op<mpq_class> {
  struct result_type : mpq_class {
    result_type() : mpq_class(0) {}
    result_type(mpq_class v) : mpq_class(std::move(v)) {}
  };
  result_type operator()(const mpq_class& v) const { return mpq_class(abs(v)); }
};
}  // namespace internal

}  // namespace Eigen
