#pragma once

// Unitriangular solves shared by the Hecke algebra and its parabolic modules.
// Basis keys are ElementIds; ids are a linear extension of the Bruhat order,
// so "largest id in the support" is always Bruhat-maximal there.

#include <span>

#include "kllab/error.hpp"
#include "kllab/hecke.hpp"

namespace kllab {

/// Unique element top + Σ_{y<top} vZ[v] std_y fixed by the bar involution,
/// where bar(std_y) = bar_column(y) (an Expansion with coefficient 1 at y and
/// support below y). `interval` lists every key <= top in increasing id
/// order; the last entry must be `top`.
template <typename BarColumn>
Expansion solve_self_dual(std::span<const ElementId> interval, BarColumn&& bar_column) {
  const ElementId top = interval.back();
  Expansion result{{top, LaurentPoly(1)}};
  // Solved coefficients are kept bar-applied, since that is what the
  // recurrence consumes.
  std::vector<std::pair<ElementId, LaurentPoly>> solved_bar{{top, LaurentPoly(1)}};
  for (auto it = interval.rbegin() + 1; it != interval.rend(); ++it) {
    const ElementId z = *it;
    LaurentPoly rhs;
    for (const auto& [y, bar_h] : solved_bar) {
      const Expansion& col = bar_column(y);
      auto found = col.find(z);
      if (found != col.end()) rhs += bar_h * found->second;
    }
    // h_z - bar(h_z) = rhs with h_z ∈ vZ[v]: h_z is the positive part.
    std::vector<LaurentPoly::Term> positive;
    for (const auto& t : rhs.terms()) {
      if (t.exponent > 0) positive.push_back(t);
    }
    LaurentPoly h = LaurentPoly::from_terms(std::move(positive));
    if (h - bar(h) != rhs) {
      throw InternalError("bar-invariance solve has no solution at a coefficient; bar columns are inconsistent");
    }
    if (!h.is_zero()) {
      solved_bar.emplace_back(z, bar(h));
      result.emplace(z, std::move(h));
    }
  }
  return result;
}

/// Column x of the inverse change of basis: writes std_x = Σ_y (-1)^{ℓ(x)-ℓ(y)}
/// inv_{y,x} can_y and returns y -> inv_{y,x}. canonical_column(z) is the
/// standard-basis expansion of can_z (unitriangular, coefficient 1 at z).
template <typename CanonicalColumn, typename LengthOf>
Expansion invert_column(ElementId x, CanonicalColumn&& canonical_column, LengthOf&& length) {
  Expansion remainder{{x, LaurentPoly(1)}};
  Expansion inverse;
  const int lx = length(x);
  while (!remainder.empty()) {
    auto top = std::prev(remainder.end());
    const ElementId z = top->first;
    const LaurentPoly c = top->second;
    for (const auto& [y, p] : canonical_column(z)) accumulate(remainder, y, -(c * p));
    if (remainder.count(z)) throw InternalError("triangular solve: canonical column is not unitriangular");
    inverse.emplace(z, (lx - length(z)) % 2 == 0 ? c : -c);
  }
  return inverse;
}

}  // namespace kllab
