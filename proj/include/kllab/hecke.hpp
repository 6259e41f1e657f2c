#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kllab/coxeter.hpp"
#include "kllab/laurent.hpp"

namespace kllab {

/// Sparse expansion in a standard basis: element -> coefficient. Never
/// stores a zero coefficient.
using Expansion = std::map<ElementId, LaurentPoly>;

/// Adds p to the coefficient of x, erasing the entry if it cancels.
void accumulate(Expansion& e, ElementId x, const LaurentPoly& p);

/// Element of the Hecke algebra written in the standard basis {δ_x}.
class HeckeElt {
 public:
  HeckeElt() = default;
  explicit HeckeElt(Expansion terms);

  static HeckeElt delta(ElementId x) { return HeckeElt(Expansion{{x, LaurentPoly(1)}}); }

  const Expansion& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  LaurentPoly coefficient(ElementId x) const;
  void add_term(ElementId x, const LaurentPoly& p) { accumulate(terms_, x, p); }

  HeckeElt& operator+=(const HeckeElt& rhs);
  HeckeElt& operator-=(const HeckeElt& rhs);
  friend HeckeElt operator+(HeckeElt a, const HeckeElt& b) { return a += b; }
  friend HeckeElt operator-(HeckeElt a, const HeckeElt& b) { return a -= b; }
  friend HeckeElt operator*(const LaurentPoly& scalar, const HeckeElt& h);
  friend bool operator==(const HeckeElt&, const HeckeElt&) = default;

  /// "(1)*d[1,2] + (v)*d[1]" style rendering, terms in id order.
  std::string to_string(const GroupTable& group) const;

 private:
  Expansion terms_;
};

/// h·δ_s (right) or δ_s·h (left):
///   δ_x δ_s = δ_{xs} if xs > x, else δ_{xs} + (v^{-1} - v) δ_x.
/// Throws OutOfRangeError if a product leaves the length cap.
HeckeElt mult_delta_gen(const GroupTable& group, const HeckeElt& h, Gen s, Side side);

/// h·b_s (right) or b_s·h (left) with b_s = δ_s + v:
///   δ_x b_s = δ_{xs} + v δ_x if xs > x, else δ_{xs} + v^{-1} δ_x.
HeckeElt mult_b_gen(const GroupTable& group, const HeckeElt& h, Gen s, Side side);

/// General product a·b, expanding δ_y along the canonical word of y.
HeckeElt multiply(const GroupTable& group, const HeckeElt& a, const HeckeElt& b);

/// Memoized bar involution: bar(v) = v^{-1}, bar(δ_x) = δ_{x^{-1}}^{-1},
/// computed as the product of (δ_s + v - v^{-1}) along a reduced word of x.
/// Thread-safe; each bar(δ_x) is computed once.
class BarInvolution {
 public:
  explicit BarInvolution(const GroupTable& group);

  const GroupTable& group() const noexcept { return *group_; }
  const HeckeElt& bar_delta(ElementId x) const;
  HeckeElt operator()(const HeckeElt& h) const;

 private:
  const GroupTable* group_;
  std::unique_ptr<std::once_flag[]> once_;
  mutable std::vector<HeckeElt> cache_;
};

/// bar(δ_x) computed along an arbitrary reduced word of x, without the memo.
HeckeElt bar_delta_along_word(const GroupTable& group, const Word& reduced_word);

/// One-off bar involution (builds a throwaway memo).
HeckeElt bar_element(const GroupTable& group, const HeckeElt& h);

/// Kazhdan-Lusztig basis, KL polynomials h_{y,x}, μ(y,x) and inverse KL
/// polynomials h^{y,x} for every element held by a GroupTable.
///
/// b_x is built by increasing length with
///   b_{xs} = b_x b_s - Σ_{y : ys < y} μ(y, x) b_y,
/// and each column x of the inverse table comes from one descending
/// triangular solve of δ_x in the b-basis. Layers of equal length are built
/// in parallel; the result does not depend on the thread count.
class KLTable {
 public:
  explicit KLTable(const GroupTable& group, int threads = 1);

  const GroupTable& group() const noexcept { return *group_; }
  const BarInvolution& bar() const noexcept { return bar_; }

  /// b_x.
  const HeckeElt& kl_basis_element(ElementId x) const { return basis_[x.value]; }
  /// h_{y,x}. Throws InternalError if it is not in Z_{>=0}[v].
  LaurentPoly kl_poly(ElementId y, ElementId x) const;
  /// μ(y,x), the coefficient of v in h_{y,x}. Throws InternalError if negative.
  LaurentPoly::Coeff mu(ElementId y, ElementId x) const;
  /// h^{y,x}. Throws InternalError if it is not in Z_{>=0}[v].
  LaurentPoly inverse_kl_poly(ElementId y, ElementId x) const;
  /// y -> h^{y,x}, support exactly the y with nonzero value.
  const Expansion& inverse_column(ElementId x) const { return inverse_[x.value]; }

  /// b_x rebuilt along the given reduced word with the μ-recursion, using
  /// this table only for the lower b_y corrections.
  HeckeElt kl_basis_along_word(const Word& reduced_word) const;

  /// Every exponent of h^{y,x} is congruent to ℓ(x) - ℓ(y) mod 2.
  bool check_parity(ElementId y, ElementId x) const;
  /// Σ_{y<=z<=x} (-1)^{ℓ(z)-ℓ(y)} h^{y,z} h_{z,x} == [y == x].
  bool check_inversion_identity(ElementId y, ElementId x) const;

 private:
  const GroupTable* group_;
  BarInvolution bar_;
  std::vector<HeckeElt> basis_;
  std::vector<Expansion> inverse_;
};

/// b_x as the unique bar-invariant element of δ_x + Σ_{y<x} vZ[v] δ_y,
/// found degree by degree from the bar(δ_y) expansions. Independent of the
/// μ-recursion; used to cross-check KLTable.
HeckeElt kl_basis_by_bar_solve(const BarInvolution& bar, ElementId x);

}  // namespace kllab
