#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kllab/hecke.hpp"

namespace kllab {

/// Which rank-1 H_I-module is induced: δ_t (t ∈ I) acts by v^{-1}
/// (spherical) or by -v (antispherical).
enum class Flavor { spherical, antispherical };

std::string_view to_string(Flavor flavor);
/// "spherical" / "antispherical". Throws ParseError otherwise.
Flavor parse_flavor(std::string_view text);

/// 1-based sorted generator list, e.g. {1, 3}.
std::vector<int> generator_list(GenSet I);
/// "1,3"; empty set renders as "".
std::string render_generator_set(GenSet I);
/// Inverse of render_generator_set; accepts "" for the empty set.
GenSet parse_generator_set(std::string_view text, int rank);

/// The data fixing a spherical or antispherical module: the group, the
/// parabolic subset I and the minimal coset representatives ^I W it has.
class ParabolicContext {
 public:
  ParabolicContext(const GroupTable& group, GenSet I, Flavor flavor);

  const GroupTable& group() const noexcept { return *group_; }
  GenSet parabolic() const noexcept { return I_; }
  Flavor flavor() const noexcept { return flavor_; }
  /// ^I W within the cap, in id order.
  const std::vector<ElementId>& reps() const noexcept { return reps_; }
  bool is_rep(ElementId x) const { return (group_->left_descents(x) & I_) == 0; }
  /// The scalar by which δ_t, t ∈ I, acts: v^{-1} or -v.
  const LaurentPoly& scalar() const noexcept { return scalar_; }

  /// w = u·x with u ∈ W_I, x ∈ ^I W, lengths adding. Returns (ℓ(u), x).
  std::pair<int, ElementId> decompose(ElementId w) const;
  /// {y ∈ ^I W : y <= x}, in id order.
  std::vector<ElementId> lower_interval(ElementId x) const;

 private:
  const GroupTable* group_;
  GenSet I_;
  Flavor flavor_;
  LaurentPoly scalar_;
  std::vector<ElementId> reps_;
};

/// Element of ^I M or ^I N in the standard basis {δ^I_x : x ∈ ^I W}.
class ParabolicElt {
 public:
  ParabolicElt() = default;
  explicit ParabolicElt(Expansion terms);

  static ParabolicElt delta(ElementId x) { return ParabolicElt(Expansion{{x, LaurentPoly(1)}}); }

  const Expansion& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  LaurentPoly coefficient(ElementId x) const;
  void add_term(ElementId x, const LaurentPoly& p) { accumulate(terms_, x, p); }

  ParabolicElt& operator+=(const ParabolicElt& rhs);
  ParabolicElt& operator-=(const ParabolicElt& rhs);
  friend ParabolicElt operator*(const LaurentPoly& scalar, const ParabolicElt& m);
  friend bool operator==(const ParabolicElt&, const ParabolicElt&) = default;

  std::string to_string(const GroupTable& group) const;

 private:
  Expansion terms_;
};

/// The image 1 ⊗ h: δ_w with w = u·x maps to scalar^{ℓ(u)} δ^I_x.
ParabolicElt project(const ParabolicContext& ctx, const HeckeElt& h);

/// Right action of δ_s on the standard basis, for x ∈ ^I W:
///   xs ∈ ^I W, xs > x:  δ^I_{xs}
///   xs < x:             δ^I_{xs} + (v^{-1} - v) δ^I_x
///   xs = tx, t ∈ I:     scalar · δ^I_x
ParabolicElt act_delta_gen(const ParabolicContext& ctx, const ParabolicElt& m, Gen s);

/// bar(δ^I_x) := project(bar(δ_x)), extended semilinearly.
ParabolicElt bar_parabolic(const ParabolicContext& ctx, const BarInvolution& bar, const ParabolicElt& m);

/// Canonical basis c_x (spherical) or d_x (antispherical) of the module,
/// obtained by the bar-invariance solve, together with the parabolic KL
/// polynomials (m_{y,x} / n_{y,x}) and their inverses (m^{y,x} / n^{y,x}).
class ParabolicKLTable {
 public:
  ParabolicKLTable(const ParabolicContext& ctx, const BarInvolution& bar, int threads = 1);

  const ParabolicContext& context() const noexcept { return *ctx_; }
  Flavor flavor() const noexcept { return ctx_->flavor(); }

  /// c_x or d_x.
  const ParabolicElt& canonical_basis(ElementId x) const;
  /// bar(δ^I_x).
  const ParabolicElt& bar_standard(ElementId x) const;
  /// m_{y,x} or n_{y,x}.
  LaurentPoly kl_poly(ElementId y, ElementId x) const;
  /// m^{y,x} or n^{y,x}.
  LaurentPoly inverse_kl_poly(ElementId y, ElementId x) const;
  const Expansion& inverse_column(ElementId x) const;

  /// Σ_{y<=z<=x} (-1)^{ℓ(z)-ℓ(y)} inv_{y,z} kl_{z,x} == [y == x].
  bool check_inversion_identity(ElementId y, ElementId x) const;

 private:
  std::size_t slot(ElementId x) const;

  const ParabolicContext* ctx_;
  std::vector<std::uint32_t> slot_of_;  // element id -> index into reps, or npos
  std::vector<ParabolicElt> bar_standard_;
  std::vector<ParabolicElt> basis_;
  std::vector<Expansion> inverse_;
};

struct SoergelMismatch {
  ElementId z;
  ElementId x;
  LaurentPoly antispherical;  // n^{z,x}
  LaurentPoly classical;      // h^{z,x}
};

/// Compares n^{z,x} with h^{z,x} over all z, x ∈ ^I W. Empty iff they agree.
/// Throws FlavorMismatchError for a spherical table.
std::vector<SoergelMismatch> check_soergel_identification(const ParabolicKLTable& table, const KLTable& hecke);

}  // namespace kllab
