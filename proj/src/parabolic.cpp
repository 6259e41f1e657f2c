#include "kllab/parabolic.hpp"

#include <bit>
#include <limits>
#include <sstream>

#include "kllab/error.hpp"
#include "kllab/parallel.hpp"
#include "kllab/triangular.hpp"

namespace kllab {

namespace {
constexpr std::uint32_t kNotRep = std::numeric_limits<std::uint32_t>::max();
}

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::spherical ? "spherical" : "antispherical";
}

Flavor parse_flavor(std::string_view text) {
  if (text == "spherical") return Flavor::spherical;
  if (text == "antispherical") return Flavor::antispherical;
  throw ParseError("unknown flavor: " + std::string(text));
}

std::vector<int> generator_list(GenSet I) {
  std::vector<int> out;
  for (int s = 0; s < kMaxRank; ++s) {
    if (contains(I, s)) out.push_back(s + 1);
  }
  return out;
}

std::string render_generator_set(GenSet I) {
  std::string out;
  for (int s : generator_list(I)) {
    if (!out.empty()) out += ',';
    out += std::to_string(s);
  }
  return out;
}

GenSet parse_generator_set(std::string_view text, int rank) {
  GenSet I = 0;
  if (text.empty()) return I;
  for (Gen s : parse_word(text)) {
    if (s >= rank) throw ParseError("parabolic generator " + std::to_string(s + 1) + " exceeds rank");
    I |= GenSet{1} << s;
  }
  return I;
}

// ---------------------------------------------------------------------------
// ParabolicContext

ParabolicContext::ParabolicContext(const GroupTable& group, GenSet I, Flavor flavor)
    : group_(&group),
      I_(I),
      flavor_(flavor),
      scalar_(flavor == Flavor::spherical ? LaurentPoly::v(-1) : LaurentPoly::monomial(-1, 1)),
      reps_(group.min_coset_reps(I)) {}

std::pair<int, ElementId> ParabolicContext::decompose(ElementId w) const {
  int u_length = 0;
  while (GenSet d = group_->left_descents(w) & I_) {
    w = group_->mult(w, std::countr_zero(d), Side::left);
    ++u_length;
  }
  return {u_length, w};
}

std::vector<ElementId> ParabolicContext::lower_interval(ElementId x) const {
  std::vector<ElementId> out;
  for (ElementId y : group_->lower_interval(x)) {
    if (is_rep(y)) out.push_back(y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ParabolicElt

ParabolicElt::ParabolicElt(Expansion terms) : terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
}

LaurentPoly ParabolicElt::coefficient(ElementId x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? LaurentPoly{} : it->second;
}

ParabolicElt& ParabolicElt::operator+=(const ParabolicElt& rhs) {
  for (const auto& [x, p] : rhs.terms_) accumulate(terms_, x, p);
  return *this;
}

ParabolicElt& ParabolicElt::operator-=(const ParabolicElt& rhs) {
  for (const auto& [x, p] : rhs.terms_) accumulate(terms_, x, -p);
  return *this;
}

ParabolicElt operator*(const LaurentPoly& scalar, const ParabolicElt& m) {
  ParabolicElt out;
  if (scalar.is_zero()) return out;
  for (const auto& [x, p] : m.terms_) out.terms_.emplace_hint(out.terms_.end(), x, scalar * p);
  return out;
}

std::string ParabolicElt::to_string(const GroupTable& group) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [x, p] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << p << ")*dI[" << group.render(x) << ']';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Module operations

namespace {

LaurentPoly power(const LaurentPoly& base, int exponent) {
  LaurentPoly out(1);
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

ParabolicElt project(const ParabolicContext& ctx, const HeckeElt& h) {
  ParabolicElt out;
  for (const auto& [w, p] : h.terms()) {
    const auto [u_length, x] = ctx.decompose(w);
    out.add_term(x, u_length == 0 ? p : power(ctx.scalar(), u_length) * p);
  }
  return out;
}

ParabolicElt act_delta_gen(const ParabolicContext& ctx, const ParabolicElt& m, Gen s) {
  static const LaurentPoly vinv_minus_v{{-1, 1}, {1, -1}};
  const GroupTable& group = ctx.group();
  ParabolicElt out;
  for (const auto& [x, p] : m.terms()) {
    const ElementId xs = group.mult(x, s, Side::right);
    if (group.length(xs) < group.length(x)) {
      out.add_term(xs, p);
      out.add_term(x, vinv_minus_v * p);
    } else if (ctx.is_rep(xs)) {
      out.add_term(xs, p);
    } else {
      out.add_term(x, ctx.scalar() * p);
    }
  }
  return out;
}

ParabolicElt bar_parabolic(const ParabolicContext& ctx, const BarInvolution& bar, const ParabolicElt& m) {
  ParabolicElt out;
  for (const auto& [x, p] : m.terms()) out += kllab::bar(p) * project(ctx, bar.bar_delta(x));
  return out;
}

// ---------------------------------------------------------------------------
// ParabolicKLTable

ParabolicKLTable::ParabolicKLTable(const ParabolicContext& ctx, const BarInvolution& bar, int threads)
    : ctx_(&ctx), slot_of_(ctx.group().size(), kNotRep) {
  const auto& reps = ctx.reps();
  for (std::size_t i = 0; i < reps.size(); ++i) slot_of_[reps[i].value] = static_cast<std::uint32_t>(i);
  bar_standard_.resize(reps.size());
  basis_.resize(reps.size());
  inverse_.resize(reps.size());

  parallel_for(reps.size(), threads,
               [&](std::size_t i) { bar_standard_[i] = project(ctx, bar.bar_delta(reps[i])); });
  parallel_for(reps.size(), threads, [&](std::size_t i) {
    const std::vector<ElementId> interval = ctx.lower_interval(reps[i]);
    basis_[i] = ParabolicElt(solve_self_dual(std::span<const ElementId>(interval), [&](ElementId y) -> const Expansion& {
      return bar_standard_[slot(y)].terms();
    }));
  });
  parallel_for(reps.size(), threads, [&](std::size_t i) {
    inverse_[i] = invert_column(
        reps[i], [&](ElementId z) -> const Expansion& { return basis_[slot(z)].terms(); },
        [&](ElementId z) { return ctx.group().length(z); });
  });
}

std::size_t ParabolicKLTable::slot(ElementId x) const {
  const std::uint32_t i = slot_of_.at(x.value);
  if (i == kNotRep) {
    throw OutOfRangeError(ctx_->group().render(x) + " is not a minimal coset representative for I = {" +
                          render_generator_set(ctx_->parabolic()) + "}");
  }
  return i;
}

const ParabolicElt& ParabolicKLTable::canonical_basis(ElementId x) const { return basis_[slot(x)]; }

const ParabolicElt& ParabolicKLTable::bar_standard(ElementId x) const { return bar_standard_[slot(x)]; }

LaurentPoly ParabolicKLTable::kl_poly(ElementId y, ElementId x) const {
  slot(y);
  return basis_[slot(x)].coefficient(y);
}

LaurentPoly ParabolicKLTable::inverse_kl_poly(ElementId y, ElementId x) const {
  slot(y);
  const Expansion& col = inverse_[slot(x)];
  auto it = col.find(y);
  return it == col.end() ? LaurentPoly{} : it->second;
}

const Expansion& ParabolicKLTable::inverse_column(ElementId x) const { return inverse_[slot(x)]; }

bool ParabolicKLTable::check_inversion_identity(ElementId y, ElementId x) const {
  const GroupTable& group = ctx_->group();
  LaurentPoly sum;
  for (const auto& [z, kl] : basis_[slot(x)].terms()) {
    const Expansion& col = inverse_[slot(z)];
    auto it = col.find(y);
    if (it == col.end()) continue;
    const LaurentPoly term = it->second * kl;
    if ((group.length(z) - group.length(y)) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum == LaurentPoly(y == x ? 1 : 0);
}

std::vector<SoergelMismatch> check_soergel_identification(const ParabolicKLTable& table, const KLTable& hecke) {
  if (table.flavor() != Flavor::antispherical) {
    throw FlavorMismatchError("the identification n^{z,x} = h^{z,x} needs an antispherical table");
  }
  std::vector<SoergelMismatch> out;
  const auto& reps = table.context().reps();
  for (ElementId x : reps) {
    for (ElementId z : reps) {
      if (z > x) break;
      LaurentPoly n = table.inverse_kl_poly(z, x);
      LaurentPoly h = hecke.inverse_column(x).count(z) ? hecke.inverse_column(x).at(z) : LaurentPoly{};
      if (n != h) out.push_back({z, x, std::move(n), std::move(h)});
    }
  }
  return out;
}

}  // namespace kllab
