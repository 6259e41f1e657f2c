#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kllab {

/// Exact Laurent polynomial in v with 64-bit integer coefficients.
///
/// Stored as a strictly increasing list of (exponent, coefficient) pairs with
/// no zero coefficients, so equal values have equal representations. All
/// arithmetic is overflow-checked and throws OverflowError instead of
/// wrapping.
class LaurentPoly {
 public:
  using Coeff = std::int64_t;

  struct Term {
    int exponent;
    Coeff coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  LaurentPoly() = default;
  LaurentPoly(Coeff constant);  // NOLINT: integers promote to constants
  LaurentPoly(std::initializer_list<Term> terms);

  /// Builds from arbitrary (possibly repeated, unsorted, zero) terms.
  static LaurentPoly from_terms(std::vector<Term> terms);
  static LaurentPoly monomial(Coeff coeff, int exponent);
  /// v^k.
  static LaurentPoly v(int exponent = 1) { return monomial(1, exponent); }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Coefficient of v^k (zero when absent).
  Coeff coefficient(int k) const noexcept;
  /// Smallest / largest exponent. Undefined on the zero polynomial.
  int min_exponent() const { return terms_.front().exponent; }
  int max_exponent() const { return terms_.back().exponent; }

  /// Multiplication by v^k.
  LaurentPoly shifted(int k) const;

  /// True iff every coefficient is >= 0 and every exponent is >= 0.
  bool in_nonnegative_poly_ring() const noexcept;
  /// True iff every exponent is >= 1 (vZ[v]); the zero polynomial qualifies.
  bool in_v_poly_ring() const noexcept;

  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(const LaurentPoly& rhs);

  friend LaurentPoly operator+(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs += rhs; }
  friend LaurentPoly operator-(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs -= rhs; }
  friend LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs);
  friend LaurentPoly operator-(const LaurentPoly& p);

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Human-readable rendering, e.g. "v^-1 + 2 - 3v^2"; zero renders as "0".
  std::string to_string() const;
  /// CSV rendering: "c*v^k" terms in ascending exponent joined by '+',
  /// e.g. "1*v^1+1*v^3"; zero renders as "0".
  std::string to_csv_string() const;
  /// Inverse of to_csv_string(). Throws ParseError on malformed input.
  static LaurentPoly parse_csv_string(const std::string& text);

 private:
  void add_scaled(const LaurentPoly& rhs, Coeff sign);

  std::vector<Term> terms_;
};

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

inline LaurentPoly add(const LaurentPoly& p, const LaurentPoly& q) { return p + q; }
inline LaurentPoly mul(const LaurentPoly& p, const LaurentPoly& q) { return p * q; }
inline LaurentPoly::Coeff coefficient(const LaurentPoly& p, int k) { return p.coefficient(k); }

/// The involution v -> v^{-1}.
LaurentPoly bar(const LaurentPoly& p);

/// p ⪯ q: every coefficient of q - p is nonnegative.
bool leq_coefficientwise(const LaurentPoly& p, const LaurentPoly& q);

/// Smallest exponent carrying a negative coefficient, if any.
std::optional<int> first_negative_exponent(const LaurentPoly& p);

namespace checked {
LaurentPoly::Coeff add(LaurentPoly::Coeff a, LaurentPoly::Coeff b);
LaurentPoly::Coeff mul(LaurentPoly::Coeff a, LaurentPoly::Coeff b);
}  // namespace checked

}  // namespace kllab
